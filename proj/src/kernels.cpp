#include "mutsel/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mutsel::kernels {

double abs_pow(double x, double p) noexcept {
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

namespace {

inline void split_one(double u, double r, double psi, double dt, double& rhs, double& shift) noexcept {
    const double g = r - psi;
    rhs = u * (1.0 + dt * std::max(g, 0.0));
    shift = 1.0 + dt * std::max(-g, 0.0);
}

}  // namespace

namespace serial {

void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = w * abs_pow(u[i], p);
}

void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out) {
    const std::size_t n = K.rows();
    const std::size_t m = K.cols();
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = K.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        out[i] = s;
    }
}

void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift) {
    for (std::size_t i = 0; i < u.size(); ++i) split_one(u[i], r[i], psi[i], dt, rhs[i], shift[i]);
}

}  // namespace serial

namespace omp {

void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = w * abs_pow(u[i], p);
}

void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(K.rows());
    const std::size_t m = K.cols();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto row = K.row(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        out[i] = s;
    }
}

void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift) {
    const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) split_one(u[i], r[i], psi[i], dt, rhs[i], shift[i]);
}

}  // namespace omp

void weighted_abs_pow(std::span<const double> u, double p, double w, std::span<double> out) {
    if (u.size() >= parallel_threshold) omp::weighted_abs_pow(u, p, w, out);
    else serial::weighted_abs_pow(u, p, w, out);
}

void dense_matvec(const DenseMatrix& K, std::span<const double> v, std::span<double> out) {
    if (K.rows() >= parallel_threshold) omp::dense_matvec(K, v, out);
    else serial::dense_matvec(K, v, out);
}

void split_reaction(std::span<const double> u, std::span<const double> r, std::span<const double> psi, double dt,
                    std::span<double> rhs, std::span<double> shift) {
    if (u.size() >= parallel_threshold) omp::split_reaction(u, r, psi, dt, rhs, shift);
    else serial::split_reaction(u, r, psi, dt, rhs, shift);
}

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace mutsel::kernels
