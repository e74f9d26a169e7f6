#pragma once

#include "mutsel/coefficient.hpp"
#include "mutsel/grid.hpp"

#include <span>
#include <vector>

namespace mutsel {

/// Cell-centered discretization of d/dx(A(x) du/dx) with zero-flux (Neumann)
/// boundaries:
///
///   (Lu)_i = [A_{i+1/2}(u_{i+1} - u_i) - A_{i-1/2}(u_i - u_{i-1})] / dx^2
///
/// Face coefficients are arithmetic means of the adjacent cell values of A;
/// the two boundary faces carry zero flux. L is symmetric in the midpoint
/// inner product, annihilates constants and conserves the integral.
class DiffusionOperator {
public:
    /// Throws NotElliptic if any cell value of A is <= 0.
    explicit DiffusionOperator(const Field& cell_coefficient);
    /// Operator with explicit interior face coefficients (n+1 entries, the two
    /// boundary entries are ignored and stored as zero). Throws NotElliptic if an
    /// interior face is <= 0.
    static DiffusionOperator with_faces(const Grid1D& grid, std::vector<double> faces);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    /// n+1 face values; entries 0 and n are the (zero) boundary faces.
    std::span<const double> face_coefficients() const noexcept { return faces_; }
    const Field& cell_coefficient() const noexcept { return cells_; }
    double max_coefficient() const noexcept;

    Field apply(const Field& u) const;
    void apply(std::span<const double> u, std::span<double> out) const;

    /// Solves (sigma I - L) u = rhs by the Thomas algorithm.
    Field solve_shifted(double sigma, const Field& rhs) const;
    /// Solves (diag(shift) - L) u = rhs. Throws SingularSystem if a pivot
    /// vanishes relative to its row scale.
    Field solve_shifted(const Field& shift, const Field& rhs) const;
    void solve_shifted(std::span<const double> shift, std::span<const double> rhs, std::span<double> out) const;

private:
    DiffusionOperator(const Grid1D& grid, std::vector<double> faces);

    Grid1D grid_;
    Field cells_;
    std::vector<double> faces_;
};

/// Samples A at cell centers and assembles the operator.
DiffusionOperator assemble_diffusion(const Grid1D& grid, const CoefficientSpec& A);

/// Free-function form of DiffusionOperator::solve_shifted.
Field solve_shifted(const DiffusionOperator& op, double sigma, const Field& rhs);

}  // namespace mutsel
