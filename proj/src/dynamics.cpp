#include "mutsel/dynamics.hpp"

#include "mutsel/error.hpp"
#include "mutsel/stepping.hpp"

#include <algorithm>
#include <cmath>

namespace mutsel {

namespace {

constexpr double blow_up_level = 1e12;

long step_count(double t_end, double dt) { return std::max(1L, std::lround(t_end / dt)); }

}  // namespace

std::string to_string(ConvergenceTarget target) {
    switch (target) {
        case ConvergenceTarget::SteadyBlind: return "steady_blind";
        case ConvergenceTarget::SteadyGeneral: return "steady_general";
        case ConvergenceTarget::Extinction: return "extinction";
        case ConvergenceTarget::None: return "none";
    }
    return "none";
}

ConvergenceTarget parse_convergence_target(const std::string& text) {
    if (text == "steady_blind") return ConvergenceTarget::SteadyBlind;
    if (text == "steady_general") return ConvergenceTarget::SteadyGeneral;
    if (text == "extinction") return ConvergenceTarget::Extinction;
    if (text == "none") return ConvergenceTarget::None;
    throw Error(ErrorCode::ConfigError, "unknown convergence target '" + text + "'");
}

void validate(const SimConfig& cfg) {
    validate(cfg.problem);
    require_same_grid(cfg.u0, cfg.problem.r);
    if (!(cfg.dt > 0.0)) throw Error(ErrorCode::ConfigError, "dt must be positive");
    if (!(cfg.t_end > 0.0)) throw Error(ErrorCode::ConfigError, "t_end must be positive");
    if (cfg.record_every < 1) throw Error(ErrorCode::ConfigError, "record_every must be >= 1");
    if (cfg.time_order != 1 && cfg.time_order != 2) throw Error(ErrorCode::ConfigError, "time_order must be 1 or 2");
    if (!(min_value(cfg.u0) >= 0.0) || !(max_value(cfg.u0) > 0.0) || !all_finite(cfg.u0))
        throw Error(ErrorCode::ConfigError, "u0 must be nonnegative and not identically zero");
    if (cfg.reference) require_same_grid(*cfg.reference, cfg.u0);
}

SimState step_imex(const SimState& state, const SimConfig& cfg) {
    const Problem& pb = cfg.problem;
    const Field psi_u = psi(pb.kernel, state.u, pb.p);
    SimState next{state.t + cfg.dt, positive_split_step(pb.op, pb.r, psi_u, state.u, cfg.dt), state.step + 1};
    if (cfg.time_order == 2) {
        const double h = 0.5 * cfg.dt;
        const Field half = positive_split_step(pb.op, pb.r, psi_u, state.u, h);
        Field two_half = positive_split_step(pb.op, pb.r, psi(pb.kernel, half, pb.p), half, h);
        Field extrapolated = 2.0 * two_half - next.u;
        next.u = min_value(extrapolated) >= 0.0 ? std::move(extrapolated) : std::move(two_half);
    }
    if (!all_finite(next.u))
        throw Error(ErrorCode::NonFiniteState, "non-finite value at t = " + std::to_string(next.t));
    return next;
}

SimResult simulate(const SimConfig& cfg) {
    validate(cfg);
    const bool diagnostics = cfg.reference && min_value(*cfg.reference) > 0.0;
    const long steps = step_count(cfg.t_end, cfg.dt);

    SimState state{0.0, cfg.u0, 0};
    SimResult out{{}, {}, state};
    auto record = [&](const SimState& s) {
        if (cfg.keep_snapshots) out.trajectory.push_back(s);
        if (diagnostics) out.diagnostics.push_back(entropy_sample(s.t, s.u, *cfg.reference, cfg.problem, cfg.entropy_q));
    };
    auto distance = [&](const SimState& s, const Field* previous) -> double {
        switch (cfg.target) {
            case ConvergenceTarget::Extinction: return sup_norm(s.u);
            case ConvergenceTarget::SteadyBlind:
            case ConvergenceTarget::SteadyGeneral:
                if (cfg.reference) return sup_distance(s.u, *cfg.reference);
                return previous ? sup_distance(s.u, *previous) / cfg.dt : std::numeric_limits<double>::infinity();
            case ConvergenceTarget::None: break;
        }
        return cfg.reference ? sup_distance(s.u, *cfg.reference) : 0.0;
    };

    record(state);
    out.distance_to_target = distance(state, nullptr);
    bool last_recorded = true;
    for (long k = 0; k < steps; ++k) {
        SimState next = step_imex(state, cfg);
        const double sup = sup_norm(next.u);
        if (sup > blow_up_level) throw Error(ErrorCode::BlowUp, "||u|| exceeded 1e12 at t = " + std::to_string(next.t));
        out.distance_to_target = distance(next, &state.u);
        state = std::move(next);
        last_recorded = state.step % cfg.record_every == 0;
        if (last_recorded) record(state);
        if (cfg.target != ConvergenceTarget::None && out.distance_to_target <= cfg.tol) {
            out.converged = true;
            break;
        }
    }
    if (!last_recorded) record(state);
    out.final_state = std::move(state);
    return out;
}

FrozenIteration frozen_nonlocal_iteration(const SimConfig& cfg, int n_outer, long window_steps) {
    validate(cfg);
    if (n_outer < 1) throw Error(ErrorCode::ConfigError, "n_outer must be >= 1");
    if (cfg.time_order != 1) throw Error(ErrorCode::ConfigError, "frozen iteration uses the first-order step");
    const Problem& pb = cfg.problem;
    const long steps = step_count(cfg.t_end, cfg.dt);
    const long window = window_steps > 0 ? std::min(window_steps, steps) : steps;

    FrozenIteration out;
    Field start = cfg.u0;
    for (long w0 = 0; w0 < steps; w0 += window) {
        const long len = std::min(window, steps - w0);
        // previous[k] = u_n at step w0 + k; round 0 is the constant-in-time datum.
        std::vector<Field> previous(static_cast<std::size_t>(len) + 1, start);
        const bool last_window = w0 + len >= steps;
        if (last_window) {
            out.iterates.clear();
            out.successive_diffs.clear();
        }
        for (int round = 0; round < n_outer; ++round) {
            std::vector<Field> current;
            current.reserve(previous.size());
            current.push_back(start);
            for (long k = 0; k < len; ++k) {
                const Field psi_prev = psi(pb.kernel, previous[static_cast<std::size_t>(k)], pb.p);
                Field next = positive_split_step(pb.op, pb.r, psi_prev, current.back(), cfg.dt);
                if (!all_finite(next)) throw Error(ErrorCode::NonFiniteState, "frozen iteration produced non-finite values");
                if (sup_norm(next) > blow_up_level) throw Error(ErrorCode::BlowUp, "frozen iterate exceeded 1e12");
                current.push_back(std::move(next));
            }
            if (last_window) {
                out.successive_diffs.push_back(sup_distance(current.back(), previous.back()));
                out.iterates.push_back(current.back());
            }
            previous = std::move(current);
        }
        start = previous.back();
    }
    return out;
}

L1Bracket l1_bracket(const EigenPair& eig, const Kernel& kernel, double p, double sup_bound) {
    if (!kernel.is_blind()) throw Error(ErrorCode::InvalidKernel, "l1_bracket needs a blind kernel");
    const double growth = -eig.lambda1;
    const double omega = eig.phi1.grid().length();
    const Field& k = kernel.as_blind().k;
    L1Bracket b;
    b.upper = std::pow(growth * std::pow(omega, p - 1.0) / min_value(k), 1.0 / p);
    b.lower = growth * min_value(eig.phi1) / (max_value(k) * std::pow(sup_bound, p - 1.0));
    return b;
}

}  // namespace mutsel
