#include "mutsel/harness.hpp"

#include "mutsel/csv.hpp"
#include "mutsel/entropy.hpp"
#include "mutsel/error.hpp"
#include "mutsel/rng.hpp"
#include "mutsel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mutsel {

using nlohmann::json;

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Eig: return "eig";
        case Scenario::Gap: return "gap";
        case Scenario::Simulate: return "simulate";
        case Scenario::Steady: return "steady";
        case Scenario::EntropyCheck: return "entropy_check";
        case Scenario::EpsilonSweep: return "epsilon_sweep";
        case Scenario::ConvergenceStudy: return "convergence_study";
        case Scenario::Dichotomy: return "dichotomy";
    }
    return "unknown";
}

Scenario parse_scenario(const std::string& text) {
    if (text == "eig") return Scenario::Eig;
    if (text == "gap") return Scenario::Gap;
    if (text == "simulate") return Scenario::Simulate;
    if (text == "steady") return Scenario::Steady;
    if (text == "entropy" || text == "entropy_check") return Scenario::EntropyCheck;
    if (text == "sweep" || text == "epsilon_sweep") return Scenario::EpsilonSweep;
    if (text == "convergence" || text == "convergence_study") return Scenario::ConvergenceStudy;
    if (text == "dichotomy") return Scenario::Dichotomy;
    throw Error(ErrorCode::ConfigError, "unknown scenario '" + text + "'");
}

bool Report::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

json Report::to_json() const {
    json j = measured;
    j["scenario"] = scenario;
    j["config_hash"] = config_hash;
    json v = json::object();
    for (const auto& [name, ok] : verdicts) v[name] = ok;
    j["verdicts"] = v;
    j["files"] = files;
    j["passed"] = passed();
    return j;
}

double OrderStudy::min_order() const {
    if (orders.empty()) return std::numeric_limits<double>::quiet_NaN();
    double m = std::numeric_limits<double>::infinity();
    for (double o : orders) m = std::min(m, o);
    return m;
}

int sweep_threads() {
    int cap = 1;
#ifdef _OPENMP
    cap = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("MUTSEL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) cap = std::min(cap, v);
    }
    return std::max(cap, 1);
}

namespace {

struct Context {
    const Config& cfg;
    std::filesystem::path out_dir;
    std::uint64_t seed;
    std::optional<std::filesystem::path> traj;
};

std::filesystem::path write_json(const std::filesystem::path& path, const json& j) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    return path;
}

Grid1D build_grid_from(const Config& cfg) {
    return build_grid(cfg.get_double("grid.a", 0.0), cfg.get_double("grid.b", 1.0),
                      static_cast<std::size_t>(cfg.get_int("grid.n", 128)));
}

Problem build_problem_with(const Config& cfg, std::optional<std::string> r_override) {
    const Grid1D grid = build_grid_from(cfg);
    const auto A = CoefficientSpec::parse(cfg.get_string("coeff.A", "const(1)"));
    const std::string r_text = r_override ? *r_override : cfg.get_string("coeff.r");
    Problem pb{grid, assemble_diffusion(grid, A), sample(CoefficientSpec::parse(r_text), grid),
               parse_kernel(cfg.get_string("selection.kernel", "blind(const(1))"), grid, cfg.base_dir()),
               cfg.get_double("selection.p", 1.0)};
    validate(pb);
    return pb;
}

EigenPair eigenpair_for(const Config& cfg, const Problem& pb) {
    return principal_eigenpair(pb.op, pb.r, cfg.get_double("eig.tol", 1e-10));
}

HomotopyOptions homotopy_options(const Config& cfg) {
    HomotopyOptions h;
    h.schedule = cfg.get_doubles("steady.schedule", {});
    if (cfg.has("steady.x0")) h.x0_index = static_cast<std::size_t>(cfg.get_int("steady.x0"));
    h.tol = cfg.get_double("steady.tol", h.tol);
    h.theta = cfg.get_double("steady.theta", h.theta);
    h.max_iterations = cfg.get_int("steady.max_iterations", h.max_iterations);
    return h;
}

SteadyState long_time_limit(const Problem& pb, const EigenPair& eig, const Config& cfg, std::uint64_t seed) {
    if (!(eig.lambda1 < 0.0)) throw Error(ErrorCode::NoPositiveSteadyState, "lambda1 >= 0");
    SimConfig sc{pb, seeded_rng(seed).positive_field(pb.grid)};
    sc.dt = cfg.get_double("steady.dt", 1e-2);
    sc.t_end = cfg.get_double("steady.t_end", 1000.0);
    sc.target = ConvergenceTarget::SteadyGeneral;
    sc.tol = cfg.get_double("steady.stationarity_tol", 1e-9);
    sc.keep_snapshots = false;
    SimResult res = simulate(sc);
    SteadyState s{res.final_state.u};
    s.method = SteadyMethod::LongTimeLimit;
    s.residual = stationary_residual(s.ubar, pb);
    return s;
}

SteadyState reference_state(const Problem& pb, const EigenPair& eig, const Config& cfg, std::uint64_t seed) {
    const std::string method = cfg.get_string("steady.method", "auto");
    if (method == "blind" || (method == "auto" && pb.kernel.is_blind())) return blind_steady(pb, eig);
    if (method == "homotopy" || method == "auto") return homotopy_steady(pb, eig, homotopy_options(cfg));
    if (method == "long_time") return long_time_limit(pb, eig, cfg, seed);
    throw Error(ErrorCode::ConfigError, "unknown steady.method '" + method + "'");
}

Field initial_datum(const Config& cfg, const Grid1D& grid, std::uint64_t seed) {
    const std::string spec = cfg.get_string("dynamics.u0", "random");
    if (spec == "random") return seeded_rng(seed).positive_field(grid);
    return sample(CoefficientSpec::parse(spec), grid);
}

double steady_tolerance(const Config& cfg, const Problem& pb, const Field& ubar) {
    return std::max(cfg.get_double("steady.tol", 1e-9), eigen_residual_floor(pb.op, pb.r) * sup_norm(ubar) * 4.0);
}

json homotopy_trace_json(const SteadyState& s) {
    json trace = json::array();
    for (const auto& st : s.homotopy_trace) trace.push_back({{"s", st.s}, {"iterations", st.iterations}, {"residual", st.residual}});
    return trace;
}

// ---------------------------------------------------------------- scenarios

Report run_eig(const Context& ctx, Report rep) {
    const Problem pb = build_problem(ctx.cfg);
    const EigenPair eig = eigenpair_for(ctx.cfg, pb);
    rep.measured["lambda1"] = eig.lambda1;
    rep.measured["min_phi1"] = min_value(eig.phi1);
    rep.measured["residual"] = eig.residual;
    rep.measured["iterations"] = eig.iterations;
    rep.verdict("phi1_positive", min_value(eig.phi1) > 0.0);
    if (ctx.cfg.has("eig.expect_lambda1")) {
        const double expected = ctx.cfg.get_double("eig.expect_lambda1");
        rep.verdict("lambda1_matches", std::abs(eig.lambda1 - expected) <= ctx.cfg.get_double("eig.expect_tol", 1e-9));
    }
    write_field(ctx.out_dir / "phi1.csv", eig.phi1);
    rep.files.push_back((ctx.out_dir / "phi1.csv").string());
    return rep;
}

Report run_gap(const Context& ctx, Report rep) {
    const Problem pb = build_problem(ctx.cfg);
    const std::string vbar_spec = ctx.cfg.get_string("gap.vbar", "const(1)");
    Field vbar = vbar_spec == "steady"
                     ? reference_state(pb, eigenpair_for(ctx.cfg, pb), ctx.cfg, ctx.seed).ubar
                     : sample(CoefficientSpec::parse(vbar_spec), pb.grid);
    const SpectralGap gap = spectral_gap(vbar, pb.op);
    rep.measured["rho1"] = gap.rho1;
    rep.measured["residual"] = gap.residual;
    rep.measured["ground_value"] = gap.ground_value;
    rep.verdict("rho1_positive", gap.rho1 > 0.0);
    rep.verdict("ground_state_zero", std::abs(gap.ground_value) <= 1e-8 * gap.rho1);
    if (ctx.cfg.has("gap.expect_rho1")) {
        const double expected = ctx.cfg.get_double("gap.expect_rho1");
        rep.verdict("rho1_matches",
                    std::abs(gap.rho1 - expected) <= ctx.cfg.get_double("gap.expect_rel_tol", 5e-3) * expected);
    }
    write_field(ctx.out_dir / "psi2.csv", gap.psi2);
    rep.files.push_back((ctx.out_dir / "psi2.csv").string());
    return rep;
}

std::vector<std::vector<double>> timeseries_rows(const SimResult& res) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> rows;
    if (!res.diagnostics.empty()) {
        for (const EntropySample& s : res.diagnostics) {
            double h2 = nan;
            double f2 = nan;
            for (std::size_t k = 0; k < s.q.size(); ++k)
                if (s.q[k] == 2.0) {
                    h2 = s.H[k];
                    f2 = s.F[k];
                }
            rows.push_back({s.t, s.mass, s.sup_u, s.H1, h2, f2, s.lambda, s.h_norm2});
        }
        return rows;
    }
    for (const SimState& s : res.trajectory)
        rows.push_back({s.t, quadrature(s.u), sup_norm(s.u), nan, nan, nan, nan, nan});
    return rows;
}

Report run_simulate(const Context& ctx, Report rep) {
    const Config& cfg = ctx.cfg;
    const Problem pb = build_problem(cfg);
    SimConfig sc{pb, initial_datum(cfg, pb.grid, ctx.seed)};
    sc.dt = cfg.get_double("dynamics.dt", 0.25 * pb.grid.dx() * pb.grid.dx() / pb.op.max_coefficient());
    sc.t_end = cfg.get_double("dynamics.t_end");
    const long steps = std::max(1L, std::lround(sc.t_end / sc.dt));
    sc.record_every = cfg.get_int("dynamics.record_every", std::max(1L, steps / 1000));
    sc.time_order = static_cast<int>(cfg.get_int("dynamics.time_order", 1));
    sc.target = parse_convergence_target(cfg.get_string("convergence.target", "none"));
    sc.tol = cfg.get_double("convergence.tol", 1e-6);
    sc.entropy_q = cfg.get_doubles("entropy.q", {1.0, 2.0, 4.0});
    const bool snapshots = cfg.get_bool("output.snapshots", false);

    const EigenPair eig = eigenpair_for(cfg, pb);
    rep.measured["lambda1"] = eig.lambda1;
    if (eig.lambda1 < 0.0 && sc.target != ConvergenceTarget::Extinction) {
        const SteadyState ref = reference_state(pb, eig, cfg, ctx.seed);
        sc.reference = ref.ubar;
        rep.measured["reference_residual"] = ref.residual;
    }
    const SimResult res = simulate(sc);

    double min_u = std::numeric_limits<double>::infinity();
    for (const SimState& s : res.trajectory) min_u = std::min(min_u, min_value(s.u));
    rep.measured["converged"] = res.converged;
    rep.measured["target"] = to_string(sc.target);
    rep.measured["t_final"] = res.final_state.t;
    rep.measured["distance_to_target"] = res.distance_to_target;
    rep.measured["min_u"] = min_u;
    rep.verdict("positivity", min_u >= 0.0);
    if (sc.target != ConvergenceTarget::None) rep.verdict("converged", res.converged);

    const auto ts = ctx.out_dir / "timeseries.csv";
    write_csv(ts, {"t", "mass", "sup_u", "H1", "H2", "F", "lambda", "h_norm2"}, timeseries_rows(res));
    rep.files.push_back(ts.string());
    write_field(ctx.out_dir / "final.csv", res.final_state.u);
    rep.files.push_back((ctx.out_dir / "final.csv").string());
    if (snapshots) {
        write_snapshots(ctx.out_dir / "snapshots.csv", res.trajectory);
        rep.files.push_back((ctx.out_dir / "snapshots.csv").string());
    }
    return rep;
}

Report run_steady(const Context& ctx, Report rep) {
    const Problem pb = build_problem(ctx.cfg);
    const EigenPair eig = eigenpair_for(ctx.cfg, pb);
    rep.measured["lambda1"] = eig.lambda1;
    std::optional<SteadyState> found;
    try {
        found = reference_state(pb, eig, ctx.cfg, ctx.seed);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPositiveSteadyState) throw;
        rep.measured["exists"] = false;
        rep.measured["reason"] = e.what();
        rep.verdict("steady_exists", false);
        return rep;
    }
    const SteadyState& s = *found;
    rep.measured["exists"] = true;
    if (s.mu) rep.measured["mu"] = *s.mu;
    rep.measured["residual"] = s.residual;
    rep.measured["method"] = to_string(s.method);
    rep.measured["homotopy_trace"] = homotopy_trace_json(s);
    const AprioriReport ap = apriori_check(s.ubar, pb, eig);
    rep.measured["apriori"] = {{"positive", ap.positive},       {"integral_p", ap.integral_p},
                               {"upper_bound", ap.upper_bound}, {"lower_bound", ap.lower_bound},
                               {"min_u", ap.min_u},             {"max_u", ap.max_u}};
    rep.verdict("steady_exists", true);
    rep.verdict("residual_within_tol", s.residual <= steady_tolerance(ctx.cfg, pb, s.ubar));
    rep.verdict("positive", ap.positive);
    rep.verdict("apriori_upper", ap.upper_ok);
    rep.verdict("apriori_lower", ap.lower_ok);
    write_field(ctx.out_dir / "steady.csv", s.ubar);
    rep.files.push_back((ctx.out_dir / "steady.csv").string());
    return rep;
}

Report run_entropy(const Context& ctx, Report rep) {
    const Config& cfg = ctx.cfg;
    const Problem pb = build_problem(cfg);
    std::filesystem::path traj_path;
    if (ctx.traj) traj_path = *ctx.traj;
    else traj_path = cfg.get_string("entropy.traj");
    const Trajectory traj = read_snapshots(traj_path, pb.grid);
    const EigenPair eig = eigenpair_for(cfg, pb);
    const SteadyState ref = reference_state(pb, eig, cfg, ctx.seed);
    const std::vector<double> qs = cfg.get_doubles("entropy.q", {1.0, 2.0, 4.0});
    const double rel = cfg.get_double("entropy.residual_rel", 1e-3);
    const double f_tol = cfg.get_double("entropy.f_tol", 1e-8);
    const double gap_slack = cfg.get_double("entropy.gap_slack", 0.05);

    std::vector<IdentityCheck> checks;
    double max_residual = 0.0;
    bool identity_ok = true;
    for (double q : qs) {
        checks.push_back(identity_residual(traj, q, ref.ubar, pb, cfg.get_double("entropy.stationary_tol", 1e-7)));
        max_residual = std::max(max_residual, checks.back().max_residual());
        identity_ok = identity_ok && checks.back().max_residual() <= rel * checks.back().max_abs_dHdt();
    }

    bool f_monotone = true;
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (double q : qs) {
        if (q <= 1.0) continue;
        double prev = lyapunov_F(q, ref.ubar, traj.front().u);
        for (std::size_t k = 1; k < traj.size(); ++k) {
            const double f = lyapunov_F(q, ref.ubar, traj[k].u);
            worst_increase = std::max(worst_increase, f - prev);
            if (f - prev > f_tol) f_monotone = false;
            prev = f;
        }
    }

    const SpectralGap gap = spectral_gap(ref.ubar, pb.op);
    bool gap_ok = true;
    for (const SimState& s : traj) {
        const Decomposition d = decompose(s.u, ref.ubar);
        const double hn = inner(d.h, d.h);
        if (dirichlet_form(ref.ubar, d.h, pb.op) < gap.rho1 * hn * (1.0 - gap_slack)) gap_ok = false;
    }

    std::vector<std::string> header{"t"};
    for (double q : qs) header.push_back("residual_q" + format_double(q));
    for (double q : qs) header.push_back("dHdt_q" + format_double(q));
    std::vector<std::vector<double>> rows;
    if (!checks.empty())
        for (std::size_t k = 0; k < checks.front().t.size(); ++k) {
            std::vector<double> row{checks.front().t[k]};
            for (const auto& c : checks) row.push_back(c.residual[k]);
            for (const auto& c : checks) row.push_back(c.dHdt[k]);
            rows.push_back(std::move(row));
        }
    write_csv(ctx.out_dir / "identity_residual.csv", header, rows);
    rep.files.push_back((ctx.out_dir / "identity_residual.csv").string());

    rep.measured["max_residual"] = max_residual;
    rep.measured["F_monotone"] = f_monotone;
    rep.measured["F_worst_increase"] = worst_increase;
    rep.measured["gap_bound_ok"] = gap_ok;
    rep.measured["rho1"] = gap.rho1;
    rep.verdict("identity_residual", identity_ok);
    rep.verdict("F_monotone", f_monotone);
    rep.verdict("gap_bound_ok", gap_ok);
    return rep;
}

struct SweepJob {
    std::size_t eps_index = 0;
    int seed_index = 0;
};

struct SweepOutcome {
    nlohmann::json measured;
    bool converged = true;
    bool pairs_ok = true;
    bool scaling_ok = true;
    bool gap_ok = true;
    bool bounds_ok = true;
};

struct SweepSettings {
    std::vector<double> eps;
    int seeds = 3;
    double pair_tol = 2e-4;
    double slope_tol = 0.25;
    double gap_ratio = 0.9;
    double dt = 1e-2;
    double t_end = 200.0;
    double stat_tol = 1e-8;
};

SweepOutcome sweep_for_exponent(const Context& ctx, const Problem& base, const SweepSettings& st, Report& rep) {
    const auto& pk = base.kernel.as_perturbed();
    const EigenPair eig = eigenpair_for(ctx.cfg, base);
    Problem blind = base;
    blind.kernel = Kernel::blind(pk.k0);
    const SteadyState ubar0 = blind_steady(blind, eig);
    const SpectralGap gap0 = spectral_gap(ubar0.ubar, base.op);

    std::vector<SweepJob> jobs;
    for (std::size_t e = 0; e < st.eps.size(); ++e)
        for (int s = 0; s < st.seeds; ++s) jobs.push_back({e, s});
    std::vector<std::optional<Field>> limits(jobs.size());
    std::vector<char> converged(jobs.size(), 0);
    std::vector<std::exception_ptr> errors(jobs.size());

    const auto n_jobs = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(sweep_threads())
    for (std::ptrdiff_t j = 0; j < n_jobs; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        try {
            const SweepJob& job = jobs[idx];
            Problem pb = base;
            pb.kernel = Kernel::perturbed(pk.k0, pk.k1, st.eps[job.eps_index]);
            SimConfig sc{pb, seeded_rng(ctx.seed + static_cast<std::uint64_t>(job.seed_index)).positive_field(pb.grid)};
            sc.dt = st.dt;
            sc.t_end = st.t_end;
            sc.target = ConvergenceTarget::SteadyGeneral;
            sc.tol = st.stat_tol;
            sc.keep_snapshots = false;
            SimResult res = simulate(sc);
            converged[idx] = res.converged;
            limits[idx] = std::move(res.final_state.u);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SweepOutcome out;
    json per_eps = json::array();
    double min_gap = std::numeric_limits<double>::infinity();
    std::vector<double> slopes;
    std::vector<Field> family{ubar0.ubar};
    const auto seeds = static_cast<std::size_t>(st.seeds);
    for (std::size_t e = 0; e < st.eps.size(); ++e) {
        double worst_pair = 0.0;
        for (std::size_t a = 0; a < seeds; ++a) {
            out.converged = out.converged && converged[e * seeds + a];
            for (std::size_t b = a + 1; b < seeds; ++b)
                worst_pair = std::max(worst_pair, sup_distance(*limits[e * seeds + a], *limits[e * seeds + b]));
        }
        const Field& ue = *limits[e * seeds];
        const double slope = sup_distance(ue, ubar0.ubar) / st.eps[e];
        const double g = spectral_gap(ue, base.op).rho1;
        out.pairs_ok = out.pairs_ok && worst_pair <= st.pair_tol;
        min_gap = std::min(min_gap, g);
        slopes.push_back(slope);
        family.push_back(ue);
        per_eps.push_back({{"eps", st.eps[e]}, {"max_pair_distance", worst_pair}, {"deviation_over_eps", slope},
                           {"rho1", g}, {"min_u", min_value(ue)}, {"max_u", max_value(ue)}});
        const auto file = ctx.out_dir / ("steady_p" + format_double(base.p) + "_eps" + format_double(st.eps[e]) + ".csv");
        write_field(file, ue);
        rep.files.push_back(file.string());
    }
    const double smin = *std::min_element(slopes.begin(), slopes.end());
    const double smax = *std::max_element(slopes.begin(), slopes.end());
    const double variation = (smax - smin) / smin;
    const UniformBounds ub = uniform_bounds(family);
    out.scaling_ok = variation < st.slope_tol;
    out.gap_ok = min_gap >= st.gap_ratio * gap0.rho1;
    out.bounds_ok = ub.ok;
    out.measured = {{"p", base.p},
                    {"per_eps", per_eps},
                    {"rho1_eps0", gap0.rho1},
                    {"min_rho1", min_gap},
                    {"slope_variation", variation},
                    {"uniform_lower", ub.lower},
                    {"uniform_upper", ub.upper}};
    return out;
}

Report run_sweep(const Context& ctx, Report rep) {
    const Config& cfg = ctx.cfg;
    const Problem base = build_problem(cfg);
    if (!base.kernel.is_perturbed()) throw Error(ErrorCode::ConfigError, "epsilon_sweep needs a perturbed kernel");
    SweepSettings st;
    st.eps = cfg.get_doubles("sweep.eps", {0.1, 0.05, 0.025});
    st.seeds = static_cast<int>(cfg.get_int("sweep.seeds", st.seeds));
    if (st.eps.empty() || st.seeds < 1) throw Error(ErrorCode::ConfigError, "sweep needs eps values and seeds >= 1");
    st.pair_tol = cfg.get_double("sweep.pair_tol", st.pair_tol);
    st.slope_tol = cfg.get_double("sweep.slope_tol", st.slope_tol);
    st.gap_ratio = cfg.get_double("sweep.gap_ratio", st.gap_ratio);
    st.dt = cfg.get_double("sweep.dt", st.dt);
    st.t_end = cfg.get_double("sweep.t_end", st.t_end);
    st.stat_tol = cfg.get_double("sweep.stationarity_tol", st.stat_tol);
    const std::vector<double> ps = cfg.get_doubles("sweep.p", {base.p});

    json runs = json::array();
    SweepOutcome all;
    for (double p : ps) {
        Problem pb = base;
        pb.p = p;
        validate(pb);
        const SweepOutcome o = sweep_for_exponent(ctx, pb, st, rep);
        runs.push_back(o.measured);
        all.converged = all.converged && o.converged;
        all.pairs_ok = all.pairs_ok && o.pairs_ok;
        all.scaling_ok = all.scaling_ok && o.scaling_ok;
        all.gap_ok = all.gap_ok && o.gap_ok;
        all.bounds_ok = all.bounds_ok && o.bounds_ok;
    }
    rep.measured["runs"] = runs;
    rep.verdict("all_converged", all.converged);
    rep.verdict("common_limit_per_eps", all.pairs_ok);
    rep.verdict("first_order_scaling", all.scaling_ok);
    rep.verdict("uniform_gap", all.gap_ok);
    rep.verdict("uniform_bounds", all.bounds_ok);
    return rep;
}

Report run_convergence(const Context& ctx, Report rep) {
    const Config& cfg = ctx.cfg;
    std::vector<std::size_t> ns;
    for (double v : cfg.get_doubles("convergence_study.n", {64, 128, 256})) ns.push_back(static_cast<std::size_t>(v));
    const std::vector<double> dts = cfg.get_doubles("convergence_study.dt", {1e-2, 5e-3, 2.5e-3});
    const std::vector<double> joint_n = cfg.get_doubles("convergence_study.joint_n", {128, 256});
    const std::vector<double> joint_dt = cfg.get_doubles("convergence_study.joint_dt", {1e-3, 5e-4});
    if (joint_n.size() != joint_dt.size())
        throw Error(ErrorCode::ConfigError, "convergence_study.joint_n and joint_dt must have equal length");
    const double op_min = cfg.get_double("convergence_study.operator_min_order", 1.9);
    const double time_min = cfg.get_double("convergence_study.time_min_order", 0.9);
    const double joint_factor = cfg.get_double("convergence_study.joint_min_factor", 1.0);
    const double identity_t_end = cfg.get_double("convergence_study.identity_t_end", 2.0);
    const int identity_order = static_cast<int>(cfg.get_int("convergence_study.identity_time_order", 2));

    const OrderStudy op = operator_order_study(ns);
    const OrderStudy tm = time_order_study(dts);
    std::vector<std::pair<std::size_t, double>> ladder;
    for (std::size_t k = 0; k < joint_n.size(); ++k) ladder.emplace_back(static_cast<std::size_t>(joint_n[k]), joint_dt[k]);
    const auto id = identity_refinement_study(ladder, 2.0, identity_t_end, ctx.seed, identity_order);

    bool decreasing = true;
    json rungs = json::array();
    for (std::size_t k = 0; k < id.size(); ++k) {
        rungs.push_back({{"n", id[k].n}, {"dt", id[k].dt}, {"max_residual", id[k].max_residual},
                         {"max_abs_dHdt", id[k].max_abs_dHdt}});
        if (k > 0 && !(id[k].max_residual * joint_factor < id[k - 1].max_residual)) decreasing = false;
    }
    rep.measured["operator"] = {{"n", op.parameter}, {"error", op.error}, {"orders", op.orders}, {"min_order", op.min_order()}};
    rep.measured["time"] = {{"dt", tm.parameter}, {"error", tm.error}, {"orders", tm.orders}, {"min_order", tm.min_order()}};
    rep.measured["identity"] = rungs;
    rep.verdict("operator_order", op.min_order() >= op_min);
    rep.verdict("time_order", tm.min_order() >= time_min);
    rep.verdict("identity_decrease", decreasing);
    return rep;
}

Report run_dichotomy(const Context& ctx, Report rep) {
    const std::vector<double> cs = ctx.cfg.get_doubles("dichotomy.c", {-1.0, -0.5, 0.5, 1.0, 2.0});
    json rows = json::array();
    bool consistent = true;
    for (double c : cs) {
        const Problem pb = build_problem_with(ctx.cfg, "const(" + format_double(c) + ")");
        const EigenPair eig = eigenpair_for(ctx.cfg, pb);
        bool exists = true;
        try {
            (void)reference_state(pb, eig, ctx.cfg, ctx.seed);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoPositiveSteadyState) throw;
            exists = false;
        }
        consistent = consistent && exists == (eig.lambda1 < 0.0) && exists == (c > 0.0);
        rows.push_back({{"c", c}, {"lambda1", eig.lambda1}, {"exists", exists}});
    }
    rep.measured["cases"] = rows;
    rep.verdict("exists_iff_lambda1_negative", consistent);
    return rep;
}

}  // namespace

Problem build_problem(const Config& cfg) { return build_problem_with(cfg, std::nullopt); }

Report run(const Config& cfg, const RunOptions& options, std::optional<Scenario> forced) {
    const Scenario scenario = forced ? *forced : parse_scenario(cfg.get_string("scenario"));
    if (forced && cfg.has("scenario") && parse_scenario(cfg.get_string("scenario")) != *forced)
        throw Error(ErrorCode::ConfigError, "config scenario '" + cfg.get_string("scenario") +
                                                "' does not match subcommand '" + to_string(*forced) + "'");
    const std::filesystem::path out_dir =
        options.out_dir ? *options.out_dir : std::filesystem::path(cfg.get_string("output.dir", "out"));
    const auto config_seed = static_cast<std::uint64_t>(cfg.get_int("rng.seed", 12345));
    const std::uint64_t seed = options.seed ? *options.seed : config_seed;
    Context ctx{cfg, out_dir, seed, options.traj};
    std::filesystem::create_directories(out_dir);

    Report rep;
    rep.scenario = to_string(scenario);
    rep.config_hash = cfg.hash();
    rep.measured["seed"] = seed;
    try {
        switch (scenario) {
            case Scenario::Eig: rep = run_eig(ctx, std::move(rep)); break;
            case Scenario::Gap: rep = run_gap(ctx, std::move(rep)); break;
            case Scenario::Simulate: rep = run_simulate(ctx, std::move(rep)); break;
            case Scenario::Steady: rep = run_steady(ctx, std::move(rep)); break;
            case Scenario::EntropyCheck: rep = run_entropy(ctx, std::move(rep)); break;
            case Scenario::EpsilonSweep: rep = run_sweep(ctx, std::move(rep)); break;
            case Scenario::ConvergenceStudy: rep = run_convergence(ctx, std::move(rep)); break;
            case Scenario::Dichotomy: rep = run_dichotomy(ctx, std::move(rep)); break;
        }
        cfg.reject_unused();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        throw Error(e.code(), "scenario " + to_string(scenario) + ": " + e.what());
    }
    const auto report_path = write_json(out_dir / "report.json", rep.to_json());
    rep.files.push_back(report_path.string());
    return rep;
}

// ------------------------------------------------------------------ studies

OrderStudy operator_order_study(const std::vector<std::size_t>& ns) {
    OrderStudy st;
    const double pi = std::numbers::pi;
    for (std::size_t n : ns) {
        const Grid1D grid = build_grid(0.0, 1.0, n);
        const DiffusionOperator op = assemble_diffusion(grid, CoefficientSpec::parse("poly(1,1)"));
        const Field u = sample(CoefficientSpec::parse("cos(1,0)"), grid);
        const Field Lu = op.apply(u);
        double err = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double x = grid.center(i);
            const double exact = -pi * std::sin(pi * x) - (1.0 + x) * pi * pi * std::cos(pi * x);
            err = std::max(err, std::abs(Lu[i] - exact));
        }
        st.parameter.push_back(static_cast<double>(n));
        st.error.push_back(err);
    }
    for (std::size_t k = 1; k < st.error.size(); ++k)
        st.orders.push_back(std::log(st.error[k - 1] / st.error[k]) / std::log(st.parameter[k] / st.parameter[k - 1]));
    return st;
}

OrderStudy time_order_study(const std::vector<double>& dts, double t_end, std::size_t n) {
    OrderStudy st;
    const Grid1D grid = build_grid(0.0, 1.0, n);
    const Problem pb{grid, assemble_diffusion(grid, CoefficientSpec::constant(1.0)), Field(grid, 2.0),
                     Kernel::blind(Field(grid, 1.0)), 1.0};
    const double exact = 2.0 / (1.0 + 19.0 * std::exp(-2.0 * t_end));
    for (double dt : dts) {
        SimConfig sc{pb, Field(grid, 0.1)};
        sc.dt = dt;
        sc.t_end = t_end;
        sc.keep_snapshots = false;
        const SimResult res = simulate(sc);
        double err = 0.0;
        for (double v : res.final_state.u) err = std::max(err, std::abs(v - exact));
        st.parameter.push_back(dt);
        st.error.push_back(err);
    }
    for (std::size_t k = 1; k < st.error.size(); ++k)
        st.orders.push_back(std::log(st.error[k - 1] / st.error[k]) / std::log(st.parameter[k - 1] / st.parameter[k]));
    return st;
}

std::vector<IdentityRung> identity_refinement_study(const std::vector<std::pair<std::size_t, double>>& ladder,
                                                    double q, double t_end, std::uint64_t seed, int time_order) {
    std::vector<IdentityRung> out;
    for (const auto& [n, dt] : ladder) {
        const Grid1D grid = build_grid(0.0, 1.0, n);
        Problem pb{grid, assemble_diffusion(grid, CoefficientSpec::parse("poly(1,1)")),
                   sample(CoefficientSpec::parse("const(2) + cos(1,0)"), grid),
                   Kernel::blind(sample(CoefficientSpec::parse("poly(1,1)"), grid)), 2.0};
        const EigenPair eig = principal_eigenpair(pb.op, pb.r);
        const SteadyState ref = blind_steady(pb, eig);
        SimConfig sc{pb, seeded_rng(seed).positive_field(grid)};
        sc.dt = dt;
        sc.t_end = t_end;
        sc.record_every = 1;
        sc.time_order = time_order;
        const SimResult res = simulate(sc);
        const IdentityCheck chk = identity_residual(res.trajectory, q, ref.ubar, pb);
        out.push_back({n, dt, chk.max_residual(), chk.max_abs_dHdt()});
    }
    return out;
}

}  // namespace mutsel
