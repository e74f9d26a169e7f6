#pragma once

#include "mutsel/diffusion.hpp"
#include "mutsel/grid.hpp"
#include "mutsel/problem.hpp"
#include "mutsel/selection.hpp"
#include "mutsel/state.hpp"

#include <vector>

namespace mutsel {

// Relative-entropy functionals against a positive reference state ubar, for
// the power family H(s) = s^q.

/// H_q[ubar, u] = sum_i w_i ubar_i^2 (u_i / ubar_i)^q. Throws NotPositiveReference.
double entropy_H(double q, const Field& ubar, const Field& u);

/// Discrete dissipation: sum over interior faces of
/// A_f * mean(ubar^2 H''(u/ubar))_f * (d(u/ubar)/dx)^2 * dx.
double dissipation_D(double q, const Field& ubar, const Field& u, const DiffusionOperator& op);

/// log(H_q / H_1^q). Throws DegenerateState if H_1 <= 0.
double lyapunov_F(double q, const Field& ubar, const Field& u);

struct GammaRange {
    double min = 0.0;
    double max = 0.0;
};

/// Range over cells of Gamma = Psi(x, ubar) - Psi(x, u).
GammaRange gamma_range(const Field& ubar, const Field& u, const Kernel& kernel, double p);

/// u = lambda ubar + h with <h, ubar>_w = 0.
struct Decomposition {
    double lambda = 0.0;
    Field h;
};

/// Throws ZeroReference if <ubar, ubar>_w = 0.
Decomposition decompose(const Field& u, const Field& ubar);

/// Right-hand side of the projection-coefficient ODE,
///   lambda' = main + R1 + R2,
///   main = Psi~(ubar) lambda (1 - lambda^p) / ||ubar||^2,   Psi~(v) = int Psi(x, v) v^2,
///   R1   = int [Psi(x, ubar) - Psi(x, u)] ubar h / ||ubar||^2,
///   R2   = -lambda / ||ubar||^2 * int ( sum_{k=1..p} C(p,k) lambda^{p-k}
///                                       int K(x,y) ubar^{p-k} h^k dy ) ubar^2 dx,
/// with u = lambda ubar + h. Exact when ubar is stationary and u >= 0.
struct LambdaRhs {
    double main = 0.0;
    double R1 = 0.0;
    double R2 = 0.0;
    double total() const { return main + R1 + R2; }
};

/// Throws UnsupportedExponent unless p is 1 or 2.
LambdaRhs lambda_ode_rhs(double lambda, const Field& h, const Field& ubar, const Kernel& kernel, int p);

/// Blind-kernel form lambda' = (-lambda1 - Psi(u)) lambda, valid when
/// ubar = mu phi1 (so Psi(ubar) = -lambda1).
double blind_lambda_rate(double lambda1, double lambda, const Field& u, const Kernel& kernel, double p);

/// Per-snapshot diagnostics recorded along a trajectory.
struct EntropySample {
    double t = 0.0;
    double mass = 0.0;   ///< integral of u
    double sup_u = 0.0;
    std::vector<double> q;  ///< exponents, parallel to H, D, F
    std::vector<double> H;
    std::vector<double> D;
    std::vector<double> F;
    double H1 = 0.0;
    double gamma_min = 0.0;
    double gamma_max = 0.0;
    double lambda = 0.0;
    double h_norm2 = 0.0;      ///< ||h||_2
    double h_dirichlet = 0.0;  ///< weighted Dirichlet form of h against ubar
};

EntropySample entropy_sample(double t, const Field& u, const Field& ubar, const Problem& problem,
                             const std::vector<double>& qs);

/// Discrete check of dH_q/dt = -D(u) + int ubar H'(u/ubar) Gamma u along a
/// trajectory recorded at a uniform interval. The derivative is the centered
/// difference of H_q at neighboring snapshots, so interior snapshots only.
struct IdentityCheck {
    std::vector<double> t;
    std::vector<double> residual;
    std::vector<double> dHdt;
    double max_residual() const;
    double max_abs_dHdt() const;
};

/// Throws NotStationaryReference if ubar's stationary residual exceeds
/// stationary_tol.
IdentityCheck identity_residual(const Trajectory& traj, double q, const Field& ubar, const Problem& problem,
                                double stationary_tol = 1e-7);

}  // namespace mutsel
