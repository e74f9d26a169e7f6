#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mutsel/coefficient.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace mutsel;

TEST_CASE("grid geometry") {
    const Grid1D g = build_grid(0.0, 1.0, 4);
    CHECK(g.dx() == doctest::Approx(0.25));
    const std::vector<double> expected{0.125, 0.375, 0.625, 0.875};
    for (std::size_t i = 0; i < 4; ++i) CHECK(g.center(i) == doctest::Approx(expected[i]).epsilon(1e-15));
    double total = 0.0;
    for (double w : g.weights()) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    const Grid1D h = build_grid(0.0, 2.0, 3);
    CHECK(h.dx() == doctest::Approx(2.0 / 3.0));
    CHECK(h.center(0) == doctest::Approx(1.0 / 3.0));
    CHECK(h.center(1) == doctest::Approx(1.0));
    CHECK(h.center(2) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("grid rejects bad domains") {
    CHECK_ERROR_CODE(build_grid(1.0, 1.0, 4), ErrorCode::InvalidDomain);
    CHECK_ERROR_CODE(build_grid(1.0, 0.0, 4), ErrorCode::InvalidDomain);
    CHECK_ERROR_CODE(build_grid(0.0, 1.0, 0), ErrorCode::InvalidDomain);
    CHECK_ERROR_CODE(build_grid(0.0, 1.0, 1), ErrorCode::InvalidDomain);
}

TEST_CASE("sampling coefficient specs") {
    const Grid1D g = build_grid(0.0, 1.0, 4);
    for (double v : sample(CoefficientSpec::parse("const(2)"), g)) CHECK(v == 2.0);

    const Grid1D g2 = build_grid(0.0, 1.0, 2);
    const Field c = sample(CoefficientSpec::parse("cos(1,0)"), g2);
    CHECK(c[0] == doctest::Approx(std::cos(std::numbers::pi / 4)).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(std::cos(3 * std::numbers::pi / 4)).epsilon(1e-15));

    const Field amp = sample(CoefficientSpec::parse("cos(2,0.5,3)"), g);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(amp[i] == doctest::Approx(3.0 * std::cos(2.0 * std::numbers::pi * g.center(i) + 0.5)));

    const Field poly = sample(CoefficientSpec::parse("poly(1,2,3)"), g);
    for (std::size_t i = 0; i < 4; ++i) {
        const double x = g.center(i);
        CHECK(poly[i] == doctest::Approx(1 + 2 * x + 3 * x * x));
    }

    const Field gauss = sample(CoefficientSpec::parse("gaussian(0.5,0.1,2)"), g);
    CHECK(gauss[1] == doctest::Approx(2.0 * std::exp(-0.125 * 0.125 / 0.02)));

    const Field sum = sample(CoefficientSpec::parse("const(2) + cos(1,0)"), g2);
    CHECK(sum[0] == doctest::Approx(2.0 + std::cos(std::numbers::pi / 4)));

    const Field tab = sample(CoefficientSpec::parse("tabulated(1,2,3,4)"), g);
    CHECK(tab[3] == 4.0);
}

TEST_CASE("sampling errors") {
    const Grid1D g = build_grid(0.0, 1.0, 4);
    CHECK_ERROR_CODE(sample(CoefficientSpec::parse("tabulated(1,2,3)"), g), ErrorCode::LengthMismatch);
    CHECK_ERROR_CODE(CoefficientSpec::parse("sinh(1)"), ErrorCode::UnknownSpec);
    CHECK_ERROR_CODE(CoefficientSpec::parse("const(1"), ErrorCode::UnknownSpec);
    CHECK_ERROR_CODE(CoefficientSpec::parse("const(a)"), ErrorCode::UnknownSpec);
    CHECK_ERROR_CODE(CoefficientSpec::parse("gaussian(0,0,1)"), ErrorCode::UnknownSpec);
}

TEST_CASE("midpoint quadrature") {
    const Grid1D g = build_grid(0.0, 1.0, 17);
    CHECK(quadrature(Field(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t n : {2, 3, 10, 33}) {
        const Grid1D gn = build_grid(0.0, 1.0, n);
        CHECK(quadrature(sample(CoefficientSpec::parse("poly(0,1)"), gn)) == doctest::Approx(0.5).epsilon(1e-14));
    }
    const Grid1D g64 = build_grid(0.0, 1.0, 64);
    CHECK(std::abs(quadrature(sample(CoefficientSpec::parse("poly(0,0,1)"), g64)) - 1.0 / 3.0) <= 1e-4);
}

TEST_CASE("field algebra") {
    const Grid1D g = build_grid(0.0, 1.0, 3);
    Field a(g, {1.0, 2.0, 3.0});
    const Field b(g, {3.0, 2.0, 1.0});
    CHECK((a + b)[1] == 4.0);
    CHECK((a - b)[0] == -2.0);
    CHECK((2.0 * a)[2] == 6.0);
    CHECK(hadamard(a, b)[0] == 3.0);
    CHECK(inner(a, b) == doctest::Approx(10.0 / 3.0));
    CHECK(norm2(a) == doctest::Approx(std::sqrt(14.0 / 3.0)));
    CHECK(sup_norm(b - a) == 2.0);
    CHECK(min_value(a) == 1.0);
    CHECK(max_value(a) == 3.0);
    CHECK(sup_distance(a, b) == 2.0);
    a[1] = std::nan("");
    CHECK_FALSE(all_finite(a));
    CHECK_ERROR_CODE(Field(g, std::vector<double>{1.0, 2.0}), ErrorCode::LengthMismatch);
    const Grid1D other = build_grid(0.0, 2.0, 3);
    CHECK_ERROR_CODE(Field(g) + Field(other), ErrorCode::LengthMismatch);
}
