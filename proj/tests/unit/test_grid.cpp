#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sburgers/grid.hpp"
#include "sburgers/noise.hpp"
#include "support.hpp"

using namespace sburgers;
using testing_support::random_field;
using testing_support::simpson;

TEST_CASE("make_grid spacing and nodes") {
    const Grid g = make_grid(1.0, 3);
    CHECK(g.dx() == 0.5);
    CHECK(g.node(0) == -0.5);
    CHECK(g.node(1) == 0.0);
    CHECK(g.node(2) == 0.5);
    CHECK(make_grid(32.0, 2047).dx() == 0.03125);
}

TEST_CASE("make_grid rejects small domains and grids") {
    CHECK_THROWS_AS(make_grid(0.5, 100), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(32.0, 2), std::invalid_argument);
}

TEST_CASE("lp_norm of zero, first mode and Gaussian") {
    const Grid g = make_grid(32.0, 2047);
    CHECK(lp_norm(Field(g), 2.0) == 0.0);
    CHECK(lp_norm(Field(g), 3.5) == 0.0);
    CHECK_THROWS_AS(lp_norm(Field(g), 0.5), std::invalid_argument);

    // independent reference: int_{-L}^{L} e_1(x)^2 dx by fine Simpson
    const double L = 8.0;
    const Grid h = make_grid(L, 1023);
    const double ref = simpson(
        [&](double x) {
            const double e = std::sin(std::numbers::pi * (x + L) / (2 * L)) / std::sqrt(L);
            return e * e;
        },
        -L, L, 200000);
    const double e1 = lp_norm(basis_eval(1, h), 2.0);
    CHECK(std::abs(e1 * e1 - ref) <= 1e-6 * ref);
    CHECK(std::abs(e1 - 1.0) <= 1e-6);

    const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
    CHECK(std::abs(lp_norm(gauss, 2.0) - std::pow(std::numbers::pi / 2, 0.25)) <= 1e-6);
}

TEST_CASE("h1_seminorm of the first mode approaches sqrt(lambda_1)") {
    for (double L : {1.0, 32.0}) {
        const Grid g = make_grid(L, 1023);
        const double expect = std::numbers::pi / (2 * L);
        CHECK(std::abs(h1_seminorm(basis_eval(1, g)) - expect) <= 1e-3 * expect);
    }
    const Grid g = make_grid(4.0, 255);
    CHECK(h1_seminorm(Field(g)) == 0.0);
    const Field f = random_field(g, 1);
    CHECK(h1_seminorm(-2.5 * f) == doctest::Approx(2.5 * h1_seminorm(f)).epsilon(1e-15));
}

TEST_CASE("tail_mass edge cases and Gaussian tail") {
    const Grid g = make_grid(32.0, 2047);
    const Field f = random_field(g, 2);
    const double l2 = lp_norm(f, 2.0);
    CHECK(tail_mass(f, 0.0) == doctest::Approx(l2 * l2).epsilon(1e-14));
    CHECK(tail_mass(f, 32.0) == 0.0);
    CHECK(tail_mass(f, 40.0) == 0.0);

    // int_{|x| >= 2} e^{-2x^2} dx = sqrt(pi/2) erfc(2 sqrt 2), both tails
    const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
    const double expect = std::sqrt(std::numbers::pi / 2) * std::erfc(2 * std::sqrt(2.0));
    CHECK(std::abs(tail_mass(gauss, 2.0) - expect) <= 0.05 * expect);
    // one side is half of that
    CHECK(std::abs(0.5 * tail_mass(gauss, 2.0) - 0.5 * expect) <= 0.05 * 0.5 * expect);
}

TEST_CASE("tail_mass is nonincreasing in N") {
    const Grid g = make_grid(16.0, 511);
    for (std::uint64_t id = 0; id < 20; ++id) {
        const Field f = random_field(g, 100 + id);
        double prev = tail_mass(f, 0.0);
        for (double N = 0.01; N <= 17.0; N += 0.0137) {
            const double t = tail_mass(f, N);
            CHECK(t <= prev + 1e-15);
            prev = t;
        }
    }
}

TEST_CASE("cutoff theta values, range and slope") {
    const Grid g = make_grid(32.0, 2047);
    CHECK(cutoff_profile(0.25) == 0.0);
    CHECK(cutoff_profile(2.0) == 1.0);
    CHECK(cutoff_profile(-2.0) == 1.0);
    CHECK(cutoff_profile(0.75) == doctest::Approx(0.5).epsilon(1e-15));
    // direct polynomial evaluation at t = 2 * 0.75 - 1 = 0.5
    const double t = 0.5;
    CHECK(cutoff_profile(0.75) == doctest::Approx(6 * std::pow(t, 5) - 15 * std::pow(t, 4) + 10 * std::pow(t, 3)));

    for (double m : {0.5, 2.0, 7.3}) {
        const Field th = cutoff_theta(m, g);
        double prev_left = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            CHECK(th[i] >= 0.0);
            CHECK(th[i] <= 1.0);
        }
        // monotone in |x|: scan the right half outward
        const int mid = g.size() / 2;
        for (int i = mid; i < g.size(); ++i) {
            CHECK(th[i] >= prev_left);
            prev_left = th[i];
        }
        double slope = 0.0;
        for (int i = 0; i + 1 < g.size(); ++i) slope = std::max(slope, std::abs(th[i + 1] - th[i]) / g.dx());
        CHECK(slope <= kCutoffSlopeBound / m * (1 + 1e-9) + 1e-12);
        CHECK(slope >= 0.9 * kCutoffSlopeBound / m);
    }
}

TEST_CASE("lp_norm homogeneity and triangle inequality") {
    const Grid g = make_grid(8.0, 255);
    for (std::uint64_t id = 0; id < 1000; ++id) {
        const Field a = random_field(g, 1000 + 2 * id);
        const Field b = random_field(g, 1001 + 2 * id);
        const double p = 1.0 + static_cast<double>(id % 7);
        CHECK(lp_norm(a + b, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-12);
        if (id < 50) {
            CHECK(lp_norm(-3.0 * a, p) == doctest::Approx(3.0 * lp_norm(a, p)).epsilon(1e-13));
        }
    }
}
