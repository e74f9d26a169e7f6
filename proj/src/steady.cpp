#include "mutsel/steady.hpp"

#include "mutsel/error.hpp"
#include "mutsel/kernels.hpp"
#include "mutsel/stepping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mutsel {

std::string to_string(SteadyMethod method) {
    switch (method) {
        case SteadyMethod::BlindClosedForm: return "blind_closed_form";
        case SteadyMethod::Homotopy: return "homotopy";
        case SteadyMethod::LongTimeLimit: return "long_time_limit";
    }
    return "unknown";
}

namespace {

double residual_with(const Field& ubar, const Field& psi_value, const Problem& problem) {
    Field Lu = problem.op.apply(ubar);
    double res = 0.0;
    for (std::size_t i = 0; i < ubar.size(); ++i)
        res = std::max(res, std::abs(Lu[i] + ubar[i] * (problem.r[i] - psi_value[i])));
    return res;
}

void require_persistence(const EigenPair& eig) {
    if (!(eig.lambda1 < 0.0))
        throw Error(ErrorCode::NoPositiveSteadyState,
                    "principal eigenvalue lambda1 = " + std::to_string(eig.lambda1) + " >= 0");
}

double closed_form_mu(const Field& phi1, const Field& k, double p) {
    double s = 0.0;
    for (std::size_t j = 0; j < phi1.size(); ++j) s += k[j] * kernels::abs_pow(phi1[j], p);
    return s * phi1.grid().dx();
}

}  // namespace

double stationary_residual(const Field& ubar, const Problem& problem) {
    return residual_with(ubar, psi(problem.kernel, ubar, problem.p), problem);
}

SteadyState blind_steady(const Problem& problem, const EigenPair& eig) {
    validate(problem);
    if (!problem.kernel.is_blind()) throw Error(ErrorCode::InvalidKernel, "blind_steady needs a blind kernel");
    require_persistence(eig);
    const double integral = closed_form_mu(eig.phi1, problem.kernel.as_blind().k, problem.p);
    const double mu = std::pow(-eig.lambda1 / integral, 1.0 / problem.p);
    SteadyState out{mu * eig.phi1};
    out.mu = mu;
    out.method = SteadyMethod::BlindClosedForm;
    out.residual = stationary_residual(out.ubar, problem);
    return out;
}

SteadyState homotopy_steady(const Problem& problem, const EigenPair& eig, const HomotopyOptions& options) {
    validate(problem);
    require_persistence(eig);
    const Grid1D& grid = problem.grid;
    const std::size_t x0 = options.x0_index.value_or(grid.size() / 2);
    if (x0 >= grid.size()) throw Error(ErrorCode::ConfigError, "x0 index out of range");

    std::vector<double> schedule = options.schedule;
    if (schedule.empty())
        for (int k = 0; k <= 10; ++k) schedule.push_back(0.1 * k);
    if (schedule.front() != 0.0 || std::abs(schedule.back() - 1.0) > 1e-12 ||
        !std::is_sorted(schedule.begin(), schedule.end()) ||
        std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end())
        throw Error(ErrorCode::ConfigError, "homotopy schedule must increase from 0 to 1");
    if (!(options.theta > 0.0)) throw Error(ErrorCode::ConfigError, "homotopy theta must be positive");

    // s = 0: K^0(x, y) = K(x0, y) is blind and the closed form applies.
    const Field k_base = problem.kernel.row(x0);
    const double mu0 = std::pow(-eig.lambda1 / closed_form_mu(eig.phi1, k_base, problem.p), 1.0 / problem.p);
    Field v = mu0 * eig.phi1;

    SteadyState out{v};
    out.method = SteadyMethod::Homotopy;
    const double floor = eigen_residual_floor(problem.op, problem.r);
    for (double s : schedule) {
        const Kernel stage_kernel = problem.kernel.homotopy(s, x0);
        HomotopyStage stage{s, 0, 0.0};
        while (true) {
            const Field psi_v = psi(stage_kernel, v, problem.p);
            stage.residual = residual_with(v, psi_v, problem);
            if (stage.residual <= std::max(options.tol, floor * sup_norm(v))) break;
            if (stage.iterations >= options.max_iterations)
                throw Error(ErrorCode::ContinuationStall, "stage s = " + std::to_string(s) + " stalled at residual " +
                                                              std::to_string(stage.residual));
            v = positive_split_step(problem.op, problem.r, psi_v, v, options.theta);
            if (!all_finite(v)) throw Error(ErrorCode::NonFiniteState, "homotopy iterate is not finite");
            ++stage.iterations;
        }
        out.homotopy_trace.push_back(stage);
    }
    out.ubar = v;
    out.residual = stationary_residual(v, problem);
    return out;
}

AprioriReport apriori_check(const Field& ubar, const Problem& problem, const EigenPair& eig, double rel_tol) {
    AprioriReport rep;
    rep.min_u = min_value(ubar);
    rep.max_u = max_value(ubar);
    rep.trivial = sup_norm(ubar) == 0.0;
    rep.positive = rep.min_u > 0.0;
    double s = 0.0;
    for (double v : ubar) s += kernels::abs_pow(v, problem.p);
    rep.integral_p = s * ubar.grid().dx();
    rep.upper_bound = sup_norm(problem.r) / problem.kernel.min_entry();
    rep.lower_bound = std::abs(eig.lambda1) / problem.kernel.max_entry();
    rep.upper_ok = rep.integral_p <= rep.upper_bound * (1.0 + rel_tol);
    rep.lower_ok = rep.integral_p >= rep.lower_bound * (1.0 - rel_tol);
    return rep;
}

UniformBounds uniform_bounds(const std::vector<Field>& family) {
    UniformBounds b{std::numeric_limits<double>::infinity(), 0.0, false};
    for (const Field& f : family) {
        b.lower = std::min(b.lower, min_value(f));
        b.upper = std::max(b.upper, max_value(f));
    }
    b.ok = !family.empty() && b.lower > 0.0 && std::isfinite(b.upper);
    return b;
}

}  // namespace mutsel
