#pragma once

#include "mutsel/error.hpp"
#include "mutsel/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testing {

/// Dense matrix of the Neumann finite-volume operator, assembled from the
/// coefficient at cell centers without going through DiffusionOperator.
inline Eigen::MatrixXd dense_laplacian(const mutsel::Grid1D& grid, const std::function<double(double)>& A) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double h2 = grid.dx() * grid.dx();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double a = 0.5 * (A(grid.center(static_cast<std::size_t>(i))) + A(grid.center(static_cast<std::size_t>(i + 1))));
        L(i, i) -= a / h2;
        L(i + 1, i + 1) -= a / h2;
        L(i, i + 1) += a / h2;
        L(i + 1, i) += a / h2;
    }
    return L;
}

inline Eigen::VectorXd to_eigen(const mutsel::Field& f) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Eigen::Index>(i)) = f[i];
    return v;
}

inline mutsel::Field random_field(const mutsel::Grid1D& grid, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    mutsel::Field f(grid);
    for (double& v : f) v = d(rng);
    return f;
}

}  // namespace testing

#define CHECK_ERROR_CODE(expr, expected)                                   \
    do {                                                                   \
        bool thrown_ = false;                                              \
        try {                                                              \
            (void)(expr);                                                  \
        } catch (const mutsel::Error& e_) {                                \
            thrown_ = true;                                                \
            CHECK_MESSAGE(e_.code() == (expected), e_.what());             \
        }                                                                  \
        CHECK_MESSAGE(thrown_, "expected " << mutsel::to_string(expected)); \
    } while (false)
