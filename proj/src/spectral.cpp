#include "mutsel/spectral.hpp"

#include "mutsel/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mutsel {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

double operator_scale(const DiffusionOperator& op) {
    const double dx = op.grid().dx();
    double m = 0.0;
    auto faces = op.face_coefficients();
    for (std::size_t i = 0; i + 1 < faces.size(); ++i) m = std::max(m, faces[i] + faces[i + 1]);
    return 2.0 * m / (dx * dx);
}

std::vector<double> weighted_faces(const Field& vbar, const DiffusionOperator& op) {
    auto faces = op.face_coefficients();
    std::vector<double> b(faces.begin(), faces.end());
    for (std::size_t f = 1; f + 1 < b.size(); ++f) b[f] *= 0.5 * (vbar[f - 1] * vbar[f - 1] + vbar[f] * vbar[f]);
    return b;
}

void project_out(Field& y, const Field& direction) {
    const double c = inner(y, direction) / inner(direction, direction);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * direction[i];
}

}  // namespace

double eigen_residual_floor(const DiffusionOperator& op, const Field& r) {
    return 8.0 * eps * (operator_scale(op) + sup_norm(r));
}

EigenPair principal_eigenpair(const DiffusionOperator& op, const Field& r, double tol_eig) {
    EigenOptions options;
    options.tol = tol_eig;
    return principal_eigenpair(op, r, options);
}

EigenPair principal_eigenpair(const DiffusionOperator& op, const Field& r, const EigenOptions& options) {
    require_same_grid(r, op.cell_coefficient());
    if (!(options.tol > 0.0)) throw Error(ErrorCode::NoConvergence, "tol_eig must be positive");
    const Grid1D& grid = op.grid();
    const double sigma0 = max_value(r) + 1.0;
    Field shift(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) shift[i] = sigma0 - r[i];

    Field x = options.start ? *options.start : Field(grid, 1.0);
    require_same_grid(x, r);
    if (!(min_value(x) > 0.0)) throw Error(ErrorCode::NoConvergence, "starting vector must be positive");
    x *= 1.0 / max_value(x);

    const double target = std::max(options.tol, eigen_residual_floor(op, r));
    EigenPair out{0.0, x, std::numeric_limits<double>::infinity(), 0};
    for (int it = 1; it <= options.max_iterations; ++it) {
        Field y = op.solve_shifted(shift, x);
        // The shifted matrix is an M-matrix: y > 0 for x > 0 in exact arithmetic.
        for (double& v : y) v = std::max(v, 0.0);
        const double top = max_value(y);
        if (!(top > 0.0) || !std::isfinite(top)) throw Error(ErrorCode::NoConvergence, "iterate lost positivity");
        y *= 1.0 / top;

        Field Ly = op.apply(y);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            num += y[i] * (Ly[i] + r[i] * y[i]);
            den += y[i] * y[i];
        }
        const double lambda1 = -num / den;
        double res = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) res = std::max(res, std::abs(Ly[i] + r[i] * y[i] + lambda1 * y[i]));

        out = {lambda1, y, res, it};
        if (res <= target) {
            if (!(min_value(out.phi1) > 0.0))
                throw Error(ErrorCode::NoConvergence, "principal eigenvector is not strictly positive");
            return out;
        }
        x = std::move(y);
    }
    throw Error(ErrorCode::NoConvergence, "eigen-residual " + std::to_string(out.residual) + " above " +
                                              std::to_string(target) + " after " +
                                              std::to_string(options.max_iterations) + " iterations");
}

double dirichlet_form(const Field& vbar, const Field& h, const DiffusionOperator& op) {
    require_same_grid(vbar, h);
    auto faces = op.face_coefficients();
    const double dx = op.grid().dx();
    double s = 0.0;
    for (std::size_t f = 1; f < h.size(); ++f) {
        const double weight = 0.5 * (vbar[f - 1] * vbar[f - 1] + vbar[f] * vbar[f]);
        const double dg = h[f] / vbar[f] - h[f - 1] / vbar[f - 1];
        s += faces[f] * weight * dg * dg;
    }
    return s / dx;
}

Field apply_weighted_operator(const Field& vbar, const Field& h, const DiffusionOperator& op) {
    const auto weighted = DiffusionOperator::with_faces(op.grid(), weighted_faces(vbar, op));
    Field g(op.grid());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = h[i] / vbar[i];
    Field out = weighted.apply(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] / vbar[i];
    return out;
}

SpectralGap spectral_gap(const Field& vbar, const CoefficientSpec& A, const Grid1D& grid) {
    return spectral_gap(vbar, assemble_diffusion(grid, A));
}

SpectralGap spectral_gap(const Field& vbar, const DiffusionOperator& op, const GapOptions& options) {
    require_same_grid(vbar, op.cell_coefficient());
    if (!(min_value(vbar) > 0.0)) throw Error(ErrorCode::NotPositiveWeight, "weight vbar must be strictly positive");
    const Grid1D& grid = op.grid();
    const std::size_t n = grid.size();

    const std::vector<double> b = weighted_faces(vbar, op);
    const auto weighted = DiffusionOperator::with_faces(grid, b);
    double v2_mean = 0.0;
    double v2_min = std::numeric_limits<double>::infinity();
    for (double v : vbar) {
        v2_mean += v * v / static_cast<double>(n);
        v2_min = std::min(v2_min, v * v);
    }
    double b_mean = 0.0;
    for (std::size_t f = 1; f < n; ++f) b_mean += b[f] / static_cast<double>(n - 1);
    const double sigma = b_mean / v2_mean / (grid.length() * grid.length());
    const double floor = 8.0 * eps * operator_scale(weighted) / v2_min;

    Field shift(grid);
    for (std::size_t i = 0; i < n; ++i) shift[i] = sigma * vbar[i] * vbar[i];

    Field y(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = grid.normalized(i);
        y[i] = std::cos(std::numbers::pi * s) + 0.3 * s * s;
    }
    project_out(y, vbar);
    y *= 1.0 / norm2(y);

    SpectralGap out{0.0, y, std::numeric_limits<double>::infinity(), 0.0, 0};
    out.ground_value = dirichlet_form(vbar, vbar, op) / inner(vbar, vbar);
    for (int it = 1; it <= options.max_iterations; ++it) {
        Field rhs = hadamard(vbar, y);
        Field g = weighted.solve_shifted(shift, rhs);
        Field next = hadamard(vbar, g);
        project_out(next, vbar);
        project_out(next, vbar);
        next *= 1.0 / norm2(next);

        const double rho = dirichlet_form(vbar, next, op) / inner(next, next);
        Field Sy = apply_weighted_operator(vbar, next, op);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(Sy[i] - rho * next[i]));
        res /= sup_norm(next);
        out = {rho, next, res, out.ground_value, it};
        if (res <= std::max(options.tol * rho, floor)) {
            if (!(rho > options.tol)) throw Error(ErrorCode::DegenerateGap, "second eigenvalue is not positive");
            return out;
        }
        y = std::move(next);
    }
    throw Error(ErrorCode::NoConvergence, "spectral gap iteration did not converge");
}

}  // namespace mutsel
