#pragma once

#include "mutsel/coefficient.hpp"
#include "mutsel/diffusion.hpp"
#include "mutsel/grid.hpp"

#include <optional>

namespace mutsel {

/// Principal eigenpair of L + diag(r) under the sign convention
/// L phi + r phi = -lambda1 phi; phi1 > 0 with max phi1 = 1.
struct EigenPair {
    double lambda1 = 0.0;
    Field phi1;
    double residual = 0.0;  ///< ||L phi1 + r phi1 + lambda1 phi1||_inf
    int iterations = 0;
};

struct EigenOptions {
    double tol = 1e-10;
    int max_iterations = 10000;
    std::optional<Field> start;  ///< positive starting vector; ones if empty
};

/// Shifted inverse power iteration with shift max(r) + 1. The shifted matrix
/// is an M-matrix, so iterates from a positive start stay positive. The
/// residual target is max(tol, 8 eps ||L + diag r||), the level below which the
/// residual cannot be evaluated in double precision.
/// Throws NoConvergence if the target is not reached within the iteration cap.
EigenPair principal_eigenpair(const DiffusionOperator& op, const Field& r, const EigenOptions& options = {});
EigenPair principal_eigenpair(const DiffusionOperator& op, const Field& r, double tol_eig);

/// Floating-point floor for the eigen-residual of L + diag(r).
double eigen_residual_floor(const DiffusionOperator& op, const Field& r);

/// Discrete weighted Dirichlet form
///   E(h) = sum over interior faces of A_f * mean(vbar^2)_f * (d(h/vbar)/dx)^2 * dx.
double dirichlet_form(const Field& vbar, const Field& h, const DiffusionOperator& op);

/// Spectral gap of the vbar-weighted Neumann problem: rho1 is the smallest
/// eigenvalue of the Dirichlet form above on h orthogonal to vbar.
struct SpectralGap {
    double rho1 = 0.0;
    Field psi2;               ///< second eigenfunction in h coordinates, <psi2, vbar>_w = 0
    double residual = 0.0;    ///< ||S psi2 - rho1 psi2||_inf / ||psi2||_inf
    double ground_value = 0.0;  ///< E(vbar) / ||vbar||^2, zero up to rounding
    int iterations = 0;
};

struct GapOptions {
    double tol = 1e-10;  ///< relative residual target
    int max_iterations = 10000;
};

/// Throws NotPositiveWeight if min vbar <= 0, DegenerateGap if rho1 <= tol and
/// NoConvergence if the deflated inverse iteration stalls.
SpectralGap spectral_gap(const Field& vbar, const DiffusionOperator& op, const GapOptions& options = {});
SpectralGap spectral_gap(const Field& vbar, const CoefficientSpec& A, const Grid1D& grid);

/// The weighted operator S h = -(1/vbar) L_B (h / vbar) with L_B's faces
/// A_f * mean(vbar^2)_f; symmetric, with <h, S h>_w = E(h).
Field apply_weighted_operator(const Field& vbar, const Field& h, const DiffusionOperator& op);

}  // namespace mutsel
