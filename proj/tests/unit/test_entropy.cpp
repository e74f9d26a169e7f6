#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mutsel/dynamics.hpp"
#include "mutsel/entropy.hpp"
#include "mutsel/rng.hpp"
#include "mutsel/steady.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace mutsel;

namespace {

Problem constant_problem(std::size_t n) {
    const Grid1D g = build_grid(0.0, 1.0, n);
    return Problem{g, assemble_diffusion(g, CoefficientSpec::constant(1.0)), Field(g, 2.0), Kernel::blind(Field(g, 1.0)), 1.0};
}

Problem blind_problem(std::size_t n) {
    const Grid1D g = build_grid(0.0, 1.0, n);
    return Problem{g, assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)")),
                   sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g),
                   Kernel::blind(sample(CoefficientSpec::parse("poly(1,1)"), g)), 2.0};
}

SimResult run(const Problem& pb, Field u0, double dt, double t_end, int order = 1) {
    SimConfig sc{pb, std::move(u0)};
    sc.dt = dt;
    sc.t_end = t_end;
    sc.time_order = order;
    return simulate(sc);
}

}  // namespace

TEST_CASE("entropy H") {
    const Grid1D g = build_grid(0.0, 1.0, 50);
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    for (double q : {1.0, 2.0, 3.5}) CHECK(entropy_H(q, ubar, ubar) == doctest::Approx(quadrature(hadamard(ubar, ubar))));
    const Field u = sample(CoefficientSpec::parse("gaussian(0.4,0.2,1)"), g);
    CHECK(entropy_H(2.0, ubar, u) == doctest::Approx(inner(u, u)).epsilon(1e-13));
    CHECK(entropy_H(1.0, Field(g, 1.0), sample(CoefficientSpec::parse("poly(0,1)"), g)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(entropy_H(2.0, ubar, 1.5 * ubar) > 0.0);
    CHECK_ERROR_CODE(entropy_H(2.0, Field(g, 0.0), u), ErrorCode::NotPositiveReference);
}

TEST_CASE("dissipation D") {
    const Grid1D g = build_grid(0.0, 1.0, 256);
    const DiffusionOperator op = assemble_diffusion(g, CoefficientSpec::constant(1.0));
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    CHECK(dissipation_D(2.0, ubar, 3.0 * ubar, op) == doctest::Approx(0.0));
    const Field u = sample(CoefficientSpec::parse("const(2) + gaussian(0.5,0.1,1)"), g);
    CHECK(dissipation_D(1.0, ubar, u, op) == 0.0);
    CHECK(dissipation_D(3.0, ubar, u, op) >= 0.0);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double D = dissipation_D(2.0, Field(g, 1.0), sample(CoefficientSpec::parse("cos(1,0)"), g), op);
    CHECK(std::abs(D - pi2) <= 1e-2 * pi2);
}

TEST_CASE("q = 2 dissipation is the discrete Dirichlet form") {
    // For q = 2, D = -2 <u, L u>_w exactly, whatever ubar is, only if the face
    // averaging matches the operator; check it with ubar = 1.
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const DiffusionOperator op = assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)"));
    std::mt19937_64 rng(12);
    const Field u = testing::random_field(g, rng, 0.5, 2.0);
    CHECK(dissipation_D(2.0, Field(g, 1.0), u, op) == doctest::Approx(-2.0 * inner(u, op.apply(u))).epsilon(1e-12));
}

TEST_CASE("Lyapunov functional") {
    const Grid1D g = build_grid(0.0, 1.0, 40);
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    const double base = quadrature(hadamard(ubar, ubar));
    for (double q : {2.0, 4.0})
        for (double c : {0.1, 1.0, 7.0})
            CHECK(lyapunov_F(q, ubar, c * ubar) == doctest::Approx((1.0 - q) * std::log(base)).epsilon(1e-12));
    const Field u = sample(CoefficientSpec::parse("gaussian(0.3,0.2,2) + const(0.1)"), g);
    CHECK(lyapunov_F(3.0, ubar, 4.5 * u) == doctest::Approx(lyapunov_F(3.0, ubar, u)).epsilon(1e-12));
    CHECK_ERROR_CODE(lyapunov_F(2.0, ubar, Field(g, 0.0)), ErrorCode::DegenerateState);
}

TEST_CASE("gamma range") {
    const Grid1D g = build_grid(0.0, 1.0, 32);
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    const Kernel general = parse_kernel("general(sepcos(0.5))", g);
    const GammaRange zero = gamma_range(ubar, ubar, general, 2.0);
    CHECK(zero.min == 0.0);
    CHECK(zero.max == 0.0);
    const Kernel blind = parse_kernel("blind(poly(1,1))", g);
    const GammaRange flat = gamma_range(ubar, 1.3 * ubar, blind, 1.0);
    CHECK(flat.min == doctest::Approx(flat.max).epsilon(1e-14));
    std::mt19937_64 rng(31);
    for (int k = 0; k < 20; ++k) {
        const Field u = ubar + testing::random_field(g, rng, 0.0, 1.0);
        const GammaRange gr = gamma_range(ubar, u, general, 1.5);
        CHECK(gr.min <= 0.0);
        CHECK(gr.max <= 0.0);
    }
}

TEST_CASE("decomposition") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    const Decomposition d3 = decompose(3.0 * ubar, ubar);
    CHECK(d3.lambda == doctest::Approx(3.0));
    CHECK(sup_norm(d3.h) <= 1e-14);

    Field psi = sample(CoefficientSpec::parse("cos(2,0.3)"), g);
    psi -= (inner(psi, ubar) / inner(ubar, ubar)) * ubar;
    const Decomposition d1 = decompose(ubar + psi, ubar);
    CHECK(d1.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sup_distance(d1.h, psi) <= 1e-14);

    std::mt19937_64 rng(41);
    for (int k = 0; k < 20; ++k) {
        const Field u = testing::random_field(g, rng);
        const Decomposition d = decompose(u, ubar);
        CHECK(sup_distance(d.lambda * ubar + d.h, u) <= 1e-12);
        CHECK(std::abs(inner(d.h, ubar)) <= 1e-10 * norm2(u) * norm2(ubar));
    }
    CHECK_ERROR_CODE(decompose(ubar, Field(g, 0.0)), ErrorCode::ZeroReference);
}

TEST_CASE("lambda ODE right-hand side") {
    const Grid1D g = build_grid(0.0, 1.0, 32);
    const Field ubar = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), g);
    const Kernel K = parse_kernel("general(sepcos(0.3))", g);
    const Field zero(g, 0.0);
    for (int p : {1, 2}) {
        const LambdaRhs at1 = lambda_ode_rhs(1.0, zero, ubar, K, p);
        CHECK(at1.main == doctest::Approx(0.0));
        CHECK(at1.R1 == 0.0);
        CHECK(at1.R2 == 0.0);
        for (double lambda : {0.3, 1.7}) {
            const LambdaRhs r = lambda_ode_rhs(lambda, zero, ubar, K, p);
            CHECK(r.R1 == 0.0);
            CHECK(r.R2 == 0.0);
            CHECK((r.main > 0.0) == (lambda < 1.0));
        }
    }
    CHECK_ERROR_CODE(lambda_ode_rhs(1.0, zero, ubar, K, 3), ErrorCode::UnsupportedExponent);
}

TEST_CASE("lambda ODE along a perturbed-kernel trajectory") {
    const Grid1D g = build_grid(0.0, 1.0, 64);
    for (int p : {1, 2}) {
        CAPTURE(p);
        const Problem pb{g, assemble_diffusion(g, CoefficientSpec::parse("poly(1,1)")),
                         sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g),
                         parse_kernel("perturbed(const(1), sepcos(1), 0.1)", g), static_cast<double>(p)};
        const EigenPair eig = principal_eigenpair(pb.op, pb.r);
        const SteadyState ref = homotopy_steady(pb, eig);
        const double dt = 2e-4;
        const SimResult res = run(pb, seeded_rng(5).positive_field(g), dt, 1.0, 2);
        double worst = 0.0;
        double scale = 0.0;
        for (std::size_t k = 1; k + 1 < res.trajectory.size(); ++k) {
            const double lm = decompose(res.trajectory[k - 1].u, ref.ubar).lambda;
            const double lp = decompose(res.trajectory[k + 1].u, ref.ubar).lambda;
            const Decomposition d = decompose(res.trajectory[k].u, ref.ubar);
            const double measured = (lp - lm) / (2 * dt);
            worst = std::max(worst, std::abs(measured - lambda_ode_rhs(d.lambda, d.h, ref.ubar, pb.kernel, p).total()));
            scale = std::max(scale, std::abs(measured));
        }
        CHECK(worst <= 1e-3 * scale);
    }
}

TEST_CASE("blind lambda rate matches the general form") {
    const Problem pb = blind_problem(64);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r);
    const SteadyState ref = blind_steady(pb, eig);
    const Field u = seeded_rng(9).positive_field(pb.grid);
    const Decomposition d = decompose(u, ref.ubar);
    CHECK(blind_lambda_rate(eig.lambda1, d.lambda, u, pb.kernel, pb.p) ==
          doctest::Approx(lambda_ode_rhs(d.lambda, d.h, ref.ubar, pb.kernel, 2).total()).epsilon(1e-8));
}

TEST_CASE("identity residual") {
    SUBCASE("stationary trajectory") {
        const Problem pb = blind_problem(64);
        const SteadyState ref = blind_steady(pb, principal_eigenpair(pb.op, pb.r));
        Trajectory traj;
        for (int k = 0; k < 5; ++k) traj.push_back({0.1 * k, ref.ubar, k});
        for (double q : {1.0, 2.0, 4.0}) CHECK(identity_residual(traj, q, ref.ubar, pb).max_residual() <= 1e-10);
    }
    SUBCASE("blind constant case at n = 128, dt = 1e-3") {
        const Problem pb = constant_problem(128);
        const SimResult res = run(pb, Field(pb.grid, 0.1), 1e-3, 5.0);
        const IdentityCheck chk = identity_residual(res.trajectory, 2.0, Field(pb.grid, 2.0), pb);
        CHECK(chk.max_residual() <= 1e-3 * chk.max_abs_dHdt());
    }
    SUBCASE("joint refinement") {
        std::vector<double> first;
        std::vector<double> second;
        for (auto [n, dt] : {std::pair<std::size_t, double>{64, 2e-3}, {128, 1e-3}, {256, 5e-4}}) {
            const Problem pb = blind_problem(n);
            const SteadyState ref = blind_steady(pb, principal_eigenpair(pb.op, pb.r));
            const Field u0 = sample(CoefficientSpec::parse("const(1) + cos(1,0,0.5)"), pb.grid);
            first.push_back(identity_residual(run(pb, u0, dt, 1.0, 1).trajectory, 2.0, ref.ubar, pb).max_residual());
            second.push_back(identity_residual(run(pb, u0, dt, 1.0, 2).trajectory, 2.0, ref.ubar, pb).max_residual());
        }
        // The split step is first order, so its residual ratio tends to 2.
        CHECK(first[0] / first[1] == doctest::Approx(2.0).epsilon(0.1));
        CHECK(first[1] / first[2] == doctest::Approx(2.0).epsilon(0.1));
        CHECK(second[0] >= 2.0 * second[1]);
        CHECK(second[1] >= 2.0 * second[2]);
    }
    SUBCASE("reference must be stationary") {
        const Problem pb = blind_problem(32);
        Trajectory traj{{0.0, Field(pb.grid, 1.0), 0}, {0.1, Field(pb.grid, 1.0), 1}, {0.2, Field(pb.grid, 1.0), 2}};
        CHECK_ERROR_CODE(identity_residual(traj, 2.0, Field(pb.grid, 1.0), pb), ErrorCode::NotStationaryReference);
    }
}

TEST_CASE("blind-case trajectory properties") {
    const Problem pb = blind_problem(128);
    const EigenPair eig = principal_eigenpair(pb.op, pb.r);
    const SteadyState ref = blind_steady(pb, eig);
    const double dt = 5e-4;
    SimConfig sc{pb, seeded_rng(2).positive_field(pb.grid)};
    sc.dt = dt;
    sc.t_end = 8.0;
    sc.time_order = 2;
    sc.reference = ref.ubar;
    sc.entropy_q = {1.0, 2.0, 4.0};
    const SimResult res = simulate(sc);
    REQUIRE(res.diagnostics.size() == res.trajectory.size());

    // H_1 evolution: d/dt log H_1 = Gamma, Gamma spatially constant here.
    double worst_h1 = 0.0;
    double scale_h1 = 0.0;
    for (std::size_t k = 1; k + 1 < res.trajectory.size(); ++k) {
        const double dH = (res.diagnostics[k + 1].H1 - res.diagnostics[k - 1].H1) / (2 * dt);
        const double gamma = res.diagnostics[k].gamma_min;
        worst_h1 = std::max(worst_h1, std::abs(dH - gamma * res.diagnostics[k].H1));
        scale_h1 = std::max(scale_h1, std::abs(dH));
    }
    CHECK(worst_h1 <= 1e-3 * scale_h1);

    // F nonincreasing, and dF/dt = -q(q-1)/H_q * int ubar^2 (u/ubar)^{q-2} |grad(u/ubar)|^2_A.
    for (std::size_t qi : {1u, 2u}) {
        const double q = res.diagnostics[0].q[qi];
        double worst = 0.0;
        double scale = 0.0;
        for (std::size_t k = 1; k < res.diagnostics.size(); ++k) {
            CHECK(res.diagnostics[k].F[qi] <= res.diagnostics[k - 1].F[qi] + 1e-8);
            if (k + 1 < res.diagnostics.size()) {
                const double dF = (res.diagnostics[k + 1].F[qi] - res.diagnostics[k - 1].F[qi]) / (2 * dt);
                const double rhs = -res.diagnostics[k].D[qi] / res.diagnostics[k].H[qi];
                worst = std::max(worst, std::abs(dF - rhs));
                scale = std::max(scale, std::abs(dF));
            }
        }
        CAPTURE(q);
        CHECK(worst <= 1e-3 * scale);
    }

    // h decays below 1e-5, eventually strictly decreasing, with the gap bound at every sample.
    const SpectralGap gap = spectral_gap(ref.ubar, pb.op);
    bool below = false;
    std::size_t last_increase = 0;
    for (std::size_t k = 0; k < res.diagnostics.size(); ++k) {
        const EntropySample& s = res.diagnostics[k];
        if (k > 0 && s.h_norm2 > 1e-9 && s.h_norm2 >= res.diagnostics[k - 1].h_norm2) last_increase = k;
        below = below || s.h_norm2 < 1e-5;
        CHECK(s.h_dirichlet >= gap.rho1 * s.h_norm2 * s.h_norm2 * (1 - 5e-2));
    }
    CHECK(below);
    CHECK(last_increase < res.diagnostics.size() / 2);
}
