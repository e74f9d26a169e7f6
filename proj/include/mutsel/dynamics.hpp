#pragma once

#include "mutsel/entropy.hpp"
#include "mutsel/problem.hpp"
#include "mutsel/spectral.hpp"
#include "mutsel/state.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mutsel {

enum class ConvergenceTarget { SteadyBlind, SteadyGeneral, Extinction, None };

std::string to_string(ConvergenceTarget target);
ConvergenceTarget parse_convergence_target(const std::string& text);

struct SimConfig {
    SimConfig(Problem problem_, Field u0_) : problem(std::move(problem_)), u0(std::move(u0_)) {}

    Problem problem;
    Field u0;
    double dt = 1e-3;
    double t_end = 1.0;
    long record_every = 1;
    ConvergenceTarget target = ConvergenceTarget::None;
    double tol = 1e-6;
    /// Target state for steady targets and reference for the entropy
    /// diagnostics. Without it, steady targets fall back to the stationarity
    /// test ||u(t+dt) - u(t)||_inf / dt < tol and no diagnostics are recorded.
    std::optional<Field> reference;
    std::vector<double> entropy_q{1.0, 2.0, 4.0};
    bool keep_snapshots = true;
    /// 1: positivity-preserving split. 2: Richardson extrapolation of two half
    /// steps against one full step, falling back to the half-step result in
    /// any step where the extrapolant has a negative cell.
    int time_order = 1;
};

/// Throws ConfigError unless dt > 0, t_end > 0, record_every >= 1,
/// time_order is 1 or 2 and u0 is
/// nonnegative and not identically zero.
void validate(const SimConfig& cfg);

/// One step of the positivity-preserving splitting (see positive_split_step)
/// with psi evaluated at the current state. Throws NonFiniteState.
SimState step_imex(const SimState& state, const SimConfig& cfg);

struct SimResult {
    Trajectory trajectory;  ///< snapshots every record_every steps plus the last state
    std::vector<EntropySample> diagnostics;
    SimState final_state;
    bool converged = false;
    double distance_to_target = 0.0;
};

/// Integrates to t_end or until the convergence target is met. Throws BlowUp
/// if ||u||_inf exceeds 1e12.
SimResult simulate(const SimConfig& cfg);

struct FrozenIteration {
    std::vector<Field> iterates;           ///< u_1(t_end), ..., u_N(t_end)
    std::vector<double> successive_diffs;  ///< ||u_{n+1}(t_end) - u_n(t_end)||_inf, n = 0..N-1
};

/// Outer iteration u_{n+1}' = L u_{n+1} + u_{n+1}(r - Psi(x, u_n(t))) from the
/// same initial datum each round, starting from u_0(t) = u0. Each round uses
/// the same time grid and step as simulate(), so the simulate trajectory is the
/// fixed point of the outer map.
///
/// window_steps > 0 restarts the outer iteration on consecutive windows of
/// that many steps (waveform relaxation); 0 iterates over the whole horizon.
FrozenIteration frozen_nonlocal_iteration(const SimConfig& cfg, int n_outer, long window_steps = 0);

/// Logistic bracket [c1, C1] for m(t) = int u phi1 with a blind kernel:
///   C1 = (-lambda1 |Omega|^{p-1} / k_min)^{1/p},
///   c1 = -lambda1 min(phi1) / (k_max sup_bound^{p-1}),
/// where sup_bound bounds ||u||_inf (unused for p = 1).
struct L1Bracket {
    double lower = 0.0;
    double upper = 0.0;
};

L1Bracket l1_bracket(const EigenPair& eig, const Kernel& kernel, double p, double sup_bound = 1.0);

}  // namespace mutsel
