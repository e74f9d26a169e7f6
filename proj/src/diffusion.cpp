#include "mutsel/diffusion.hpp"

#include "mutsel/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mutsel {

DiffusionOperator::DiffusionOperator(const Field& cell_coefficient)
    : grid_(cell_coefficient.grid()), cells_(cell_coefficient), faces_(grid_.size() + 1, 0.0) {
    const std::size_t n = grid_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(cells_[i] > 0.0) || !std::isfinite(cells_[i]))
            throw Error(ErrorCode::NotElliptic,
                        "diffusion coefficient must be positive, got " + std::to_string(cells_[i]) + " at cell " +
                            std::to_string(i));
    }
    for (std::size_t f = 1; f < n; ++f) faces_[f] = 0.5 * (cells_[f - 1] + cells_[f]);
}

DiffusionOperator::DiffusionOperator(const Grid1D& grid, std::vector<double> faces)
    : grid_(grid), cells_(grid), faces_(std::move(faces)) {
    const std::size_t n = grid_.size();
    if (faces_.size() != n + 1) throw Error(ErrorCode::LengthMismatch, "face coefficients need n+1 entries");
    faces_.front() = 0.0;
    faces_.back() = 0.0;
    for (std::size_t f = 1; f < n; ++f)
        if (!(faces_[f] > 0.0) || !std::isfinite(faces_[f]))
            throw Error(ErrorCode::NotElliptic, "face coefficient must be positive at face " + std::to_string(f));
    // Cell values are only informational here: the larger adjacent face.
    for (std::size_t i = 0; i < n; ++i) cells_[i] = std::max(faces_[i], faces_[i + 1]);
}

DiffusionOperator DiffusionOperator::with_faces(const Grid1D& grid, std::vector<double> faces) {
    return DiffusionOperator(grid, std::move(faces));
}

double DiffusionOperator::max_coefficient() const noexcept { return max_value(cells_); }

void DiffusionOperator::apply(std::span<const double> u, std::span<double> out) const {
    const std::size_t n = size();
    const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    for (std::size_t i = 0; i < n; ++i) {
        double flux_right = i + 1 < n ? faces_[i + 1] * (u[i + 1] - u[i]) : 0.0;
        double flux_left = i > 0 ? faces_[i] * (u[i] - u[i - 1]) : 0.0;
        out[i] = (flux_right - flux_left) * inv_dx2;
    }
}

Field DiffusionOperator::apply(const Field& u) const {
    require_same_grid(u, cells_);
    Field out(grid_);
    apply(u.values(), out.values());
    return out;
}

void DiffusionOperator::solve_shifted(std::span<const double> shift, std::span<const double> rhs,
                                      std::span<double> out) const {
    const std::size_t n = size();
    const double inv_dx2 = 1.0 / (grid_.dx() * grid_.dx());
    constexpr double tiny = 64.0 * std::numeric_limits<double>::epsilon();
    // Forward sweep stores modified super-diagonal in `c` and modified rhs in `out`.
    std::vector<double> c(n, 0.0);
    double prev_c = 0.0;
    double prev_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = faces_[i] * inv_dx2;
        const double right = faces_[i + 1] * inv_dx2;
        const double diag = shift[i] + left + right;
        const double pivot = diag - (-left) * prev_c;
        const double scale = std::abs(shift[i]) + left + right;
        if (!std::isfinite(pivot) || std::abs(pivot) <= tiny * scale)
            throw Error(ErrorCode::SingularSystem, "vanishing pivot at row " + std::to_string(i));
        c[i] = -right / pivot;
        out[i] = (rhs[i] + left * prev_d) / pivot;
        prev_c = c[i];
        prev_d = out[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
}

Field DiffusionOperator::solve_shifted(const Field& shift, const Field& rhs) const {
    require_same_grid(shift, cells_);
    require_same_grid(rhs, cells_);
    Field out(grid_);
    solve_shifted(shift.values(), rhs.values(), out.values());
    return out;
}

Field DiffusionOperator::solve_shifted(double sigma, const Field& rhs) const {
    return solve_shifted(Field(grid_, sigma), rhs);
}

DiffusionOperator assemble_diffusion(const Grid1D& grid, const CoefficientSpec& A) {
    return DiffusionOperator(sample(A, grid));
}

Field solve_shifted(const DiffusionOperator& op, double sigma, const Field& rhs) {
    return op.solve_shifted(sigma, rhs);
}

}  // namespace mutsel
