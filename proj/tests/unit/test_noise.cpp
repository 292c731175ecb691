#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sburgers/noise.hpp"
#include "support.hpp"

using namespace sburgers;

TEST_CASE("basis values") {
    const Grid g1 = make_grid(1.0, 2047);
    const Field e1 = basis_eval(1, g1);
    CHECK(e1[1023] == doctest::Approx(1.0).epsilon(1e-15));  // x = 0
    CHECK_THROWS_AS(basis_eval(0, g1), std::invalid_argument);
    CHECK_THROWS_AS(basis_eval(2048, g1), std::invalid_argument);

    const Grid g = make_grid(8.0, 255);
    for (int j : {1, 2, 5, 100, 255}) {
        const Field e = basis_eval(j, g);
        for (int i = 0; i < g.size(); ++i) {
            const double x = g.node(i);
            CHECK(std::abs(e[i] - std::sin(j * std::numbers::pi * (x + 8.0) / 16.0) / std::sqrt(8.0)) <= 1e-13);
        }
        CHECK(max_abs(e) <= 1.0);
        CHECK(max_abs(e) <= 1.0 / std::sqrt(8.0) + 1e-15);
    }
}

TEST_CASE("basis is discretely orthonormal") {
    const Grid g = make_grid(4.0, 127);
    std::vector<Field> e;
    for (int j = 1; j <= 127; ++j) e.push_back(basis_eval(j, g));
    double worst = 0.0;
    for (int j = 0; j < 127; ++j) {
        for (int m = j; m < 127; ++m) {
            worst = std::max(worst, std::abs(inner(e[j], e[m]) - (j == m ? 1.0 : 0.0)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("zero coefficients give a zero increment") {
    const Grid g = make_grid(8.0, 127);
    const NoiseModel model(g, std::vector<double>(10, 0.0));
    RandomStream rs(1, 2);
    const NoiseIncrement inc = sample_increment(model, 0.01, rs);
    CHECK(max_abs(inc.dW) == 0.0);
    CHECK(inc.mode_draws.size() == 10);
    CHECK(rs.step() == 1);
}

TEST_CASE("increment assembly matches the mode sum") {
    const Grid g = make_grid(8.0, 127);
    const NoiseModel model = NoiseModel::power_law(g, 0.5, 1.0, 16);
    RandomStream rs(3, 4);
    const NoiseIncrement inc = sample_increment(model, 0.01, rs);
    Field direct(g);
    for (int j = 1; j <= 16; ++j) direct += (0.5 / j * inc.mode_draws[j - 1]) * basis_eval(j, g);
    CHECK(lp_norm(direct - inc.dW, 2.0) <= 1e-13);
}

TEST_CASE("trace and power law") {
    const Grid g = make_grid(32.0, 2047);
    const NoiseModel model = NoiseModel::power_law(g, 0.5, 1.0, 64);
    double a = 0.0;
    for (int j = 1; j <= 64; ++j) a += 0.25 / (j * j);
    CHECK(model.trace() == doctest::Approx(a).epsilon(1e-14));
    CHECK(model.trace() == doctest::Approx(0.4073).epsilon(1e-3));
    CHECK_THROWS_AS(NoiseModel::power_law(g, -1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::power_law(g, 0.5, 0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::power_law(g, 0.5, 1.0, 4096), std::invalid_argument);
}

TEST_CASE("mean squared increment equals a dt") {
    const Grid g = make_grid(32.0, 2047);
    const NoiseModel model = NoiseModel::power_law(g, 0.5, 1.0, 64);
    const double dt = 1e-2;
    const int samples = 10000;
    RandomStream rs(99, stream_id(StreamPurpose::test, 1));
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> draws(64), coeffs(2047), dW(2047);
    for (int q = 0; q < samples; ++q) {
        sample_increment_into(model, dt, rs, draws, coeffs, dW);
        double s = 0.0;
        for (double v : dW) s += v * v;
        s *= g.dx();
        sum += s;
        sumsq += s * s;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sumsq / samples - mean * mean) / (samples - 1));
    CHECK(std::abs(mean - model.trace() * dt) <= 3 * se);
}

TEST_CASE("mode draws are uncorrelated with variance dt") {
    const Grid g = make_grid(8.0, 63);
    const NoiseModel model(g, {1.0, 1.0, 1.0, 1.0});
    const double dt = 0.5;
    const int samples = 10000;
    RandomStream rs(5, stream_id(StreamPurpose::test, 2));
    std::vector<std::array<double, 4>> d(samples);
    for (int q = 0; q < samples; ++q) {
        const auto inc = sample_increment(model, dt, rs);
        for (int j = 0; j < 4; ++j) d[q][j] = inc.mode_draws[j];
    }
    for (int j = 0; j < 4; ++j) {
        double var = 0.0;
        for (const auto& r : d) var += r[j] * r[j] / samples;
        CHECK(std::abs(var - dt) <= 3 * dt * std::sqrt(2.0 / samples));
        for (int m = j + 1; m < 4; ++m) {
            double cov = 0.0;
            for (const auto& r : d) cov += r[j] * r[m] / samples;
            CHECK(std::abs(cov) <= 3 * dt / std::sqrt(samples));
        }
    }
}

TEST_CASE("increments are deterministic per stream and step") {
    const Grid g = make_grid(8.0, 127);
    const NoiseModel model = NoiseModel::power_law(g, 0.5, 1.0, 32);
    RandomStream a(7, 11), b(7, 11), c(7, 12);
    for (int s = 0; s < 5; ++s) {
        const auto x = sample_increment(model, 0.1, a);
        const auto y = sample_increment(model, 0.1, b);
        const auto z = sample_increment(model, 0.1, c);
        CHECK(x.dW == y.dW);
        CHECK(!(x.dW == z.dW));
    }
    RandomStream late(7, 11);
    for (int s = 0; s < 4; ++s) late.advance();
    RandomStream ref(7, 11);
    NoiseIncrement last = sample_increment(model, 0.1, ref);
    for (int s = 1; s < 5; ++s) last = sample_increment(model, 0.1, ref);
    CHECK(sample_increment(model, 0.1, late).dW == last.dW);
}

TEST_CASE("sigma values and hypotheses") {
    const Grid g = make_grid(4.0, 31);
    const Field two = Field::sample(g, [](double) { return 2.0; });
    const Field lin = sigma_eval({SigmaKind::linear, 0.3}, two);
    for (double v : lin.values()) CHECK(v == doctest::Approx(0.6).epsilon(1e-15));
    for (SigmaKind kind : {SigmaKind::linear, SigmaKind::saturating}) {
        const SigmaSpec s{kind, 0.3};
        CHECK(s(0.0) == 0.0);
        RandomStream rs(17, stream_id(StreamPurpose::test, 3));
        std::vector<double> z(2);
        double lip = 0.0, growth = 0.0;
        for (int q = 0; q < 100000; ++q) {
            rs.next_normals(z);
            const double u = 5 * z[0], v = 5 * z[1];
            // nearly equal pairs only measure cancellation in u - v
            if (std::abs(u - v) >= 1e-3 * std::max(std::abs(u), std::abs(v))) lip = std::max(lip, std::abs(s(u) - s(v)) / std::abs(u - v));
            if (u != 0) growth = std::max(growth, std::abs(s(u)) / std::abs(u));
        }
        CHECK(lip <= s.lipschitz() * (1 + 1e-12));
        CHECK(growth <= 0.3 * (1 + 1e-12));
    }
    CHECK(sigma_kind_from_string(to_string(SigmaKind::saturating)) == SigmaKind::saturating);
    CHECK_THROWS_AS(sigma_kind_from_string("cubic"), std::invalid_argument);
}
