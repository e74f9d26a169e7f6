#include "mutsel/selection.hpp"

#include "mutsel/error.hpp"
#include "mutsel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mutsel {

namespace {

void require_square(const Grid1D& grid, const DenseMatrix& m, const char* what) {
    if (m.rows() != grid.size() || m.cols() != grid.size())
        throw Error(ErrorCode::LengthMismatch, std::string(what) + " must be n x n with n = " + std::to_string(grid.size()));
}

}  // namespace

Kernel Kernel::blind(Field k) {
    if (!(min_value(k) > 0.0)) throw Error(ErrorCode::InvalidKernel, "blind kernel k(y) must be positive");
    Grid1D grid = k.grid();
    return Kernel(grid, BlindKernel{std::move(k)});
}

Kernel Kernel::perturbed(Field k0, DenseMatrix k1, double eps) {
    const Grid1D grid = k0.grid();
    require_square(grid, k1, "k1");
    if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidKernel, "eps must be >= 0");
    if (!(min_value(k0) > 0.0)) throw Error(ErrorCode::InvalidKernel, "k0 must be positive");
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (!(k0[j] + eps * k1(i, j) > 0.0))
                throw Error(ErrorCode::InvalidKernel, "k0 + eps*k1 must be positive");
    return Kernel(grid, PerturbedKernel{std::move(k0), std::move(k1), eps});
}

Kernel Kernel::general(const Grid1D& grid, DenseMatrix K) {
    require_square(grid, K, "K");
    for (double v : K.data())
        if (!(v > 0.0)) throw Error(ErrorCode::InvalidKernel, "general kernel must be positive");
    return Kernel(grid, GeneralKernel{std::move(K)});
}

double Kernel::at(std::size_t i, std::size_t j) const {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, BlindKernel>) return f.k[j];
            else if constexpr (std::is_same_v<T, PerturbedKernel>) return f.k0[j] + f.eps * f.k1(i, j);
            else return f.K(i, j);
        },
        form_);
}

Field Kernel::row(std::size_t i) const {
    Field out(grid_);
    for (std::size_t j = 0; j < grid_.size(); ++j) out[j] = at(i, j);
    return out;
}

DenseMatrix Kernel::dense() const {
    if (is_general()) return as_general().K;
    const std::size_t n = grid_.size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = at(i, j);
    return m;
}

double Kernel::min_entry() const {
    if (is_blind()) return min_value(as_blind().k);
    const DenseMatrix m = dense();
    return *std::min_element(m.data().begin(), m.data().end());
}

double Kernel::max_entry() const {
    if (is_blind()) return max_value(as_blind().k);
    const DenseMatrix m = dense();
    return *std::max_element(m.data().begin(), m.data().end());
}

Kernel Kernel::homotopy(double s, std::size_t x0_index) const {
    const std::size_t n = grid_.size();
    if (x0_index >= n) throw Error(ErrorCode::InvalidKernel, "x0 index out of range");
    DenseMatrix m = dense();
    std::vector<double> base(n);
    for (std::size_t j = 0; j < n; ++j) base[j] = at(x0_index, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = s * m(i, j) + (1.0 - s) * base[j];
    return general(grid_, std::move(m));
}

Field psi(const Kernel& kernel, const Field& u, double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::UnsupportedExponent, "selection exponent p must be >= 1");
    require_same_grid(u, Field(kernel.grid()));
    const Grid1D& grid = kernel.grid();
    const std::size_t n = grid.size();
    std::vector<double> wu(n);
    kernels::weighted_abs_pow(u.values(), p, grid.dx(), wu);

    if (kernel.is_blind()) {
        const Field& k = kernel.as_blind().k;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += k[j] * wu[j];
        return Field(grid, s);
    }
    if (kernel.is_perturbed()) {
        const auto& pk = kernel.as_perturbed();
        double base = 0.0;
        for (std::size_t j = 0; j < n; ++j) base += pk.k0[j] * wu[j];
        Field out(grid);
        kernels::dense_matvec(pk.k1, wu, out.values());
        for (std::size_t i = 0; i < n; ++i) out[i] = base + pk.eps * out[i];
        return out;
    }
    Field out(grid);
    kernels::dense_matvec(kernel.as_general().K, wu, out.values());
    return out;
}

AlphaBounds alpha_bounds(const Kernel& kernel, const Field& u, double p) {
    if (!kernel.is_perturbed()) throw Error(ErrorCode::InvalidKernel, "alpha bounds need a perturbed kernel");
    const auto& pk = kernel.as_perturbed();
    double k1_sup = 0.0;
    for (double v : pk.k1.data()) k1_sup = std::max(k1_sup, std::abs(v));
    double base = 0.0;
    double mass = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a = kernels::abs_pow(u[j], p);
        base += pk.k0[j] * a;
        mass += a;
    }
    const double dx = u.grid().dx();
    return {(base - pk.eps * k1_sup * mass) * dx, (base + pk.eps * k1_sup * mass) * dx};
}

Kernel parse_kernel(std::string_view text, const Grid1D& grid, const std::filesystem::path& base_dir) {
    const SpecNode node = parse_spec_expression(text);
    auto sub = [&](std::size_t i) -> const SpecNode& {
        if (i >= node.args.size() || !std::holds_alternative<SpecNode>(node.args[i]))
            throw Error(ErrorCode::UnknownSpec, node.name + ": argument " + std::to_string(i + 1) + " must be a spec");
        return std::get<SpecNode>(node.args[i]);
    };
    if (node.name == "blind" && node.args.size() == 1) {
        return Kernel::blind(sample(CoefficientSpec::parse(to_string(sub(0))), grid));
    }
    if (node.name == "perturbed" && node.args.size() == 3) {
        if (!std::holds_alternative<double>(node.args[2]))
            throw Error(ErrorCode::UnknownSpec, "perturbed: eps must be a number");
        Field k0 = sample(CoefficientSpec::parse(to_string(sub(0))), grid);
        DenseMatrix k1 = sample(Coefficient2DSpec::from_node(sub(1)), grid, base_dir);
        return Kernel::perturbed(std::move(k0), std::move(k1), std::get<double>(node.args[2]));
    }
    if (node.name == "general" && node.args.size() == 1) {
        return Kernel::general(grid, sample(Coefficient2DSpec::from_node(sub(0)), grid, base_dir));
    }
    throw Error(ErrorCode::UnknownSpec, "unknown kernel spec '" + std::string(text) + "'");
}

}  // namespace mutsel
