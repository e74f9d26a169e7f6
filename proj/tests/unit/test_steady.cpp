#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mutsel/dynamics.hpp"
#include "mutsel/rng.hpp"
#include "mutsel/steady.hpp"
#include "support.hpp"

#include <cmath>

using namespace mutsel;

namespace {

Problem constant_problem(double r, double p, std::size_t n = 32) {
    const Grid1D g = build_grid(0.0, 1.0, n);
    return Problem{g, assemble_diffusion(g, CoefficientSpec::constant(1.0)), Field(g, r), Kernel::blind(Field(g, 1.0)), p};
}

Problem nonconstant(std::size_t n, const std::string& kernel, double p) {
    const Grid1D g = build_grid(0.0, 1.0, n);
    return Problem{g, assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)")),
                   sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g), parse_kernel(kernel, g), p};
}

}  // namespace

TEST_CASE("blind closed form in the constant case") {
    for (auto [p, expected] : {std::pair{1.0, 2.0}, std::pair{2.0, std::sqrt(2.0)}}) {
        const Problem pb = constant_problem(2.0, p);
        const SteadyState s = blind_steady(pb, principal_eigenpair(pb.op, pb.r, 1e-12));
        REQUIRE(s.mu);
        CHECK(*s.mu == doctest::Approx(expected).epsilon(1e-12));
        for (double v : s.ubar) CHECK(v == doctest::Approx(expected).epsilon(1e-10));
        CHECK(s.residual <= 1e-12);
        CHECK(s.method == SteadyMethod::BlindClosedForm);
    }
}

TEST_CASE("no positive steady state when lambda1 >= 0") {
    const Problem pb = constant_problem(-0.5, 1.0);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r);
    CHECK(eig.lambda1 == doctest::Approx(0.5));
    CHECK_ERROR_CODE(blind_steady(pb, eig), ErrorCode::NoPositiveSteadyState);
    const Problem gen = nonconstant(16, "general(sepcos(0.1))", 1.0);
    Problem neg = gen;
    neg.r = Field(gen.grid, -1.0);
    CHECK_ERROR_CODE(homotopy_steady(neg, principal_eigenpair(neg.op, neg.r)), ErrorCode::NoPositiveSteadyState);
}

TEST_CASE("dichotomy over constant r") {
    for (double c : {-1.0, -0.5, 0.5, 1.0, 2.0}) {
        const Problem pb = constant_problem(c, 1.0, 16);
        const EigenPair eig = principal_eigenpair(pb.op, pb.r);
        bool exists = true;
        try {
            (void)blind_steady(pb, eig);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NoPositiveSteadyState);
            exists = false;
        }
        CHECK(exists == (eig.lambda1 < 0.0));
        CHECK(exists == (c > 0.0));
    }
}

TEST_CASE("blind steady state of a nonconstant problem") {
    const Problem pb = nonconstant(256, "blind(poly(1,1))", 2.0);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r);
    const SteadyState s = blind_steady(pb, eig);
    Field integrand(pb.grid);
    for (std::size_t i = 0; i < pb.grid.size(); ++i) integrand[i] = (1 + pb.grid.center(i)) * eig.phi1[i] * eig.phi1[i];
    CHECK(*s.mu == doctest::Approx(std::sqrt(-eig.lambda1 / quadrature(integrand))).epsilon(1e-12));
    CHECK(s.residual <= 1e-8);
    CHECK(min_value(s.ubar) > 0.0);

    // Rescaling phi1 leaves mu * phi1 unchanged.
    EigenPair scaled = eig;
    scaled.phi1 = 3.7 * eig.phi1;
    CHECK(sup_distance(blind_steady(pb, scaled).ubar, s.ubar) <= 1e-10);
}

TEST_CASE("homotopy with x-independent rows stays on the blind solution") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const Field k = sample(CoefficientSpec::parse("poly(1,1)"), g);
    DenseMatrix rows(64, 64);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) rows(i, j) = k[j];
    const Problem general{g, assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)")),
                          sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g), Kernel::general(g, rows), 2.0};
    Problem blind = general;
    blind.kernel = Kernel::blind(k);
    const EigenPair eig = principal_eigenpair(general.op, general.r);
    const SteadyState b = blind_steady(blind, eig);
    const SteadyState h = homotopy_steady(general, eig);
    CHECK(h.method == SteadyMethod::Homotopy);
    CHECK(h.homotopy_trace.size() == 11);
    for (const HomotopyStage& st : h.homotopy_trace) CHECK(st.residual <= 1e-8);
    CHECK(sup_distance(h.ubar, b.ubar) <= 1e-8);
}

TEST_CASE("homotopy agrees with the long-time limit") {
    for (const std::string coeffs : {"constant", "nonconstant"}) {
        CAPTURE(coeffs);
        const Grid1D g = build_grid(0.0, 1.0, 64);
        const bool flat = coeffs == "constant";
        const Problem pb{g, assemble_diffusion(g, CoefficientSpec::parse(flat ? "const(1)" : "poly(1,1)")),
                         sample(CoefficientSpec::parse(flat ? "const(2)" : "const(2) + cos(1,0)"), g),
                         parse_kernel("general(sepcos(0.1))", g), 1.0};
        const SteadyState h = homotopy_steady(pb, principal_eigenpair(pb.op, pb.r));
        SimConfig sc{pb, seeded_rng(6).positive_field(g)};
        sc.dt = 1e-2;
        sc.t_end = 200.0;
        sc.target = ConvergenceTarget::SteadyGeneral;
        sc.tol = 1e-9;
        sc.keep_snapshots = false;
        const SimResult res = simulate(sc);
        CHECK(res.converged);
        CHECK(sup_distance(res.final_state.u, h.ubar) <= 1e-3);
        CHECK(h.residual <= 1e-9);
    }
}

TEST_CASE("homotopy argument checks") {
    const Problem pb = nonconstant(32, "general(sepcos(0.5))", 1.0);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r);
    HomotopyOptions o;
    o.schedule = {0.0, 0.5};
    CHECK_ERROR_CODE(homotopy_steady(pb, eig, o), ErrorCode::ConfigError);
    o.schedule = {0.0, 0.6, 0.4, 1.0};
    CHECK_ERROR_CODE(homotopy_steady(pb, eig, o), ErrorCode::ConfigError);
    HomotopyOptions stall;
    stall.max_iterations = 1;
    CHECK_ERROR_CODE(homotopy_steady(pb, eig, stall), ErrorCode::ContinuationStall);
}

TEST_CASE("stationary residual") {
    const Problem pb = constant_problem(2.0, 1.0);
    const SteadyState s = blind_steady(pb, principal_eigenpair(pb.op, pb.r, 1e-12));
    CHECK(stationary_residual(s.ubar, pb) <= 1e-12);
    CHECK(stationary_residual(s.ubar + Field(pb.grid, 0.1), pb) > 0.01);
    CHECK(stationary_residual(Field(pb.grid, 0.0), pb) == 0.0);
}

TEST_CASE("a priori bounds") {
    const Problem pb = constant_problem(2.0, 1.0);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r, 1e-12);
    const AprioriReport rep = apriori_check(blind_steady(pb, eig).ubar, pb, eig);
    CHECK(rep.all_ok());
    CHECK(rep.integral_p == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rep.upper_bound == doctest::Approx(2.0));
    CHECK(rep.lower_bound == doctest::Approx(2.0));

    const AprioriReport zero = apriori_check(Field(pb.grid, 0.0), pb, eig);
    CHECK_FALSE(zero.positive);
    CHECK(zero.trivial);

    const Problem gen = nonconstant(64, "general(sepcos(0.5))", 2.0);
    const EigenPair ge = principal_eigenpair(gen.op, gen.r);
    const AprioriReport g = apriori_check(homotopy_steady(gen, ge).ubar, gen, ge);
    CHECK(g.all_ok());
    CHECK(g.lower_bound < g.integral_p);
    CHECK(g.integral_p < g.upper_bound);
}

TEST_CASE("stationarity under the dynamics") {
    const Problem pb = nonconstant(64, "general(sepcos(0.1))", 1.0);
    const SteadyState h = homotopy_steady(pb, principal_eigenpair(pb.op, pb.r));
    SimConfig sc{pb, h.ubar};
    sc.dt = 1e-2;
    sc.t_end = 10.0;
    sc.record_every = 10;
    double drift = 0.0;
    for (const SimState& s : simulate(sc).trajectory) drift = std::max(drift, sup_distance(s.u, h.ubar));
    CHECK(drift < 10.0 * h.residual);
}

TEST_CASE("uniform bounds over an eps family") {
    const Grid1D g = build_grid(0.0, 1.0, 48);
    std::vector<Field> family;
    std::vector<double> mins;
    for (double eps : {0.0, 0.05, 0.1}) {
        const Problem pb{g, assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)")),
                         sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g),
                         Kernel::perturbed(Field(g, 1.0), sample(Coefficient2DSpec::parse("sepcos(1)"), g), eps), 1.0};
        family.push_back(homotopy_steady(pb, principal_eigenpair(pb.op, pb.r)).ubar);
        mins.push_back(min_value(family.back()));
    }
    const UniformBounds b = uniform_bounds(family);
    CHECK(b.ok);
    CHECK(b.lower > 0.0);
    CHECK(std::isfinite(b.upper));
    CHECK(std::abs(mins[2] - mins[0]) <= 2.0 * std::abs(mins[1] - mins[0]) * 1.2);
    CHECK_FALSE(uniform_bounds({Field(g, 0.0)}).ok);
}

TEST_CASE("method names") {
    CHECK(to_string(SteadyMethod::BlindClosedForm) == "blind_closed_form");
    CHECK(to_string(SteadyMethod::Homotopy) == "homotopy");
    CHECK(to_string(SteadyMethod::LongTimeLimit) == "long_time_limit");
}
