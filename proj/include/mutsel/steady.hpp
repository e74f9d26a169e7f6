#pragma once

#include "mutsel/problem.hpp"
#include "mutsel/spectral.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mutsel {

enum class SteadyMethod { BlindClosedForm, Homotopy, LongTimeLimit };

std::string to_string(SteadyMethod method);

struct HomotopyStage {
    double s = 0.0;
    long iterations = 0;
    double residual = 0.0;
};

struct SteadyState {
    explicit SteadyState(Field ubar_) : ubar(std::move(ubar_)) {}

    Field ubar;
    double residual = 0.0;  ///< sup-norm of the stationary equation
    SteadyMethod method = SteadyMethod::BlindClosedForm;
    std::optional<double> mu;  ///< set for the blind closed form
    std::vector<HomotopyStage> homotopy_trace;
};

/// ||L ubar + ubar (r - Psi(x, ubar))||_inf.
double stationary_residual(const Field& ubar, const Problem& problem);

/// ubar = mu phi1 with mu = (-lambda1 / integral(k phi1^p))^(1/p). Needs a blind
/// kernel (InvalidKernel otherwise); throws NoPositiveSteadyState if lambda1 >= 0.
SteadyState blind_steady(const Problem& problem, const EigenPair& eig);

struct HomotopyOptions {
    std::vector<double> schedule;      ///< empty means 0, 0.1, ..., 1
    std::optional<std::size_t> x0_index;  ///< midpoint cell if empty
    double tol = 1e-9;
    double theta = 0.1;                ///< pseudo-time step
    long max_iterations = 50000;       ///< per stage
};

/// Continuation along K^s = s K + (1 - s) K(x0, .) from the blind closed form at
/// s = 0 to the target kernel at s = 1. Each stage runs the positivity-
/// preserving pseudo-time iteration
///   (I - theta L + theta g^-) v' = v (1 + theta g^+),   g = r - Psi_s(x, v)
/// until the stationary residual is below tol, then seeds the next stage.
/// Throws NoPositiveSteadyState if lambda1 >= 0, ContinuationStall if a stage
/// hits the iteration cap.
SteadyState homotopy_steady(const Problem& problem, const EigenPair& eig, const HomotopyOptions& options = {});

struct AprioriReport {
    bool positive = false;
    double integral_p = 0.0;   ///< integral of ubar^p
    double upper_bound = 0.0;  ///< ||r||_inf / K_min
    double lower_bound = 0.0;  ///< |lambda1| / K_max
    bool upper_ok = false;
    bool lower_ok = false;
    double min_u = 0.0;
    double max_u = 0.0;
    bool trivial = false;      ///< ubar identically zero
    bool all_ok() const { return positive && upper_ok && lower_ok; }
};

/// Integral bracket |lambda1|/K_max <= int ubar^p <= ||r||_inf/K_min plus
/// strict positivity. Comparisons allow a relative slack of `rel_tol`.
AprioriReport apriori_check(const Field& ubar, const Problem& problem, const EigenPair& eig, double rel_tol = 1e-9);

/// Uniform sup bounds across a family of steady states (e.g. an eps-sweep).
struct UniformBounds {
    double lower = 0.0;  ///< min over the family of min ubar
    double upper = 0.0;  ///< max over the family of max ubar
    bool ok = false;     ///< 0 < lower and upper finite
};

UniformBounds uniform_bounds(const std::vector<Field>& family);

}  // namespace mutsel
