#pragma once

#include "mutsel/coefficient.hpp"
#include "mutsel/grid.hpp"
#include "mutsel/matrix.hpp"

#include <filesystem>
#include <string_view>
#include <variant>

namespace mutsel {

/// K(x, y) = k(y): selection pressure independent of the focal trait.
struct BlindKernel {
    Field k;
};

/// K(x, y) = k0(y) + eps * k1(x, y).
struct PerturbedKernel {
    Field k0;
    DenseMatrix k1;
    double eps = 0.0;
};

struct GeneralKernel {
    DenseMatrix K;
};

/// Competition kernel sampled on the grid tensor. Construction validates
/// strict positivity of every sampled value (InvalidKernel otherwise).
class Kernel {
public:
    static Kernel blind(Field k);
    static Kernel perturbed(Field k0, DenseMatrix k1, double eps);
    static Kernel general(const Grid1D& grid, DenseMatrix K);

    const Grid1D& grid() const noexcept { return grid_; }
    bool is_blind() const noexcept { return std::holds_alternative<BlindKernel>(form_); }
    bool is_perturbed() const noexcept { return std::holds_alternative<PerturbedKernel>(form_); }
    bool is_general() const noexcept { return std::holds_alternative<GeneralKernel>(form_); }
    const BlindKernel& as_blind() const { return std::get<BlindKernel>(form_); }
    const PerturbedKernel& as_perturbed() const { return std::get<PerturbedKernel>(form_); }
    const GeneralKernel& as_general() const { return std::get<GeneralKernel>(form_); }

    /// K(x_i, y_j).
    double at(std::size_t i, std::size_t j) const;
    /// The row K(x_i, .) as a field in y.
    Field row(std::size_t i) const;
    DenseMatrix dense() const;
    double min_entry() const;
    double max_entry() const;

    /// s K(x, y) + (1 - s) K(x0, y), always returned as a General kernel.
    Kernel homotopy(double s, std::size_t x0_index) const;

private:
    using Form = std::variant<BlindKernel, PerturbedKernel, GeneralKernel>;
    Kernel(Grid1D grid, Form form) : grid_(grid), form_(std::move(form)) {}

    Grid1D grid_;
    Form form_;
};

/// Psi(x_i, u) = sum_j w_j K(x_i, y_j) |u_j|^p. Throws UnsupportedExponent for p < 1.
Field psi(const Kernel& kernel, const Field& u, double p);

struct AlphaBounds {
    double minus = 0.0;
    double plus = 0.0;
};

/// alpha_{eps,+-}(u) = integral of (k0(y) +- eps ||k1||_inf) |u|^p; brackets Psi
/// for perturbed kernels. Throws InvalidKernel for other kernel forms.
AlphaBounds alpha_bounds(const Kernel& kernel, const Field& u, double p);

/// Parses `blind(<1d>)`, `perturbed(<1d>, <2d>, eps)` or `general(<2d>)`.
Kernel parse_kernel(std::string_view text, const Grid1D& grid, const std::filesystem::path& base_dir = {});

}  // namespace mutsel
