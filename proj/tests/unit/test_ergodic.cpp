#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sburgers/diagnostics.hpp"
#include "sburgers/ergodic.hpp"
#include "sburgers/noise.hpp"
#include "support.hpp"

using namespace sburgers;

namespace {

SimConfig small_config() {
    SimConfig c;
    c.L = 16.0;
    c.n = 255;
    c.dt = 2e-3;
    c.T = 3.0;
    c.snapshot_stride = 50;
    c.M = 16;
    c.seed = 31;
    return c;
}

EmpiricalMeasure random_measure(int count, std::uint64_t id, double shift) {
    RandomStream rs(5, stream_id(StreamPurpose::test, id));
    EmpiricalMeasure mu;
    std::vector<double> z(kObservableDim);
    for (int q = 0; q < count; ++q) {
        rs.next_normals(z);
        ObservableVector v{};
        for (std::size_t c = 0; c < kObservableDim; ++c) v[c] = (c + 1) * z[c] + shift;
        mu.samples.push_back(v);
    }
    return mu;
}

// Independent evaluation straight from the definition, all ordered pairs.
double brute_energy(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    std::vector<ObservableVector> all = a.samples;
    all.insert(all.end(), b.samples.begin(), b.samples.end());
    ObservableVector sd{};
    for (std::size_t c = 0; c < kObservableDim; ++c) {
        double m = 0.0, v = 0.0;
        for (const auto& x : all) m += x[c] / all.size();
        for (const auto& x : all) v += (x[c] - m) * (x[c] - m) / all.size();
        sd[c] = v > 0 ? std::sqrt(v) : 1.0;
    }
    auto dist = [&](const ObservableVector& x, const ObservableVector& y) {
        double s = 0.0;
        for (std::size_t c = 0; c < kObservableDim; ++c) s += std::pow((x[c] - y[c]) / sd[c], 2);
        return std::sqrt(s);
    };
    auto mean = [&](const auto& p, const auto& q) {
        double s = 0.0;
        for (const auto& x : p)
            for (const auto& y : q) s += dist(x, y);
        return s / (p.size() * q.size());
    };
    return 2 * mean(a.samples, b.samples) - mean(a.samples, a.samples) - mean(b.samples, b.samples);
}

}  // namespace

TEST_CASE("observe") {
    const Grid g = make_grid(8.0, 255);
    const ObservableVector z = observe(Field(g));
    for (double v : z) CHECK(v == 0.0);
    const Field e1 = basis_eval(1, g);
    const ObservableVector v = observe(e1);
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(v[4] - 1.0) <= 1e-10);
    for (std::size_t c = 5; c < kObservableDim; ++c) CHECK(std::abs(v[c]) <= 1e-10);
    const Field f = testing_support::random_field(g, 9);
    const ObservableVector w = observe(f);
    CHECK(w[0] == std::pow(lp_norm(f, 2.0), 2));
    CHECK(w[2] <= w[0]);
    CHECK(w[3] <= w[2]);
    CHECK(observable_names()[0] == "l2sq");
}

TEST_CASE("row observations agree with field observations") {
    SimConfig cfg = small_config();
    cfg.T = 0.2;
    SimOptions opts;
    opts.retain_states = true;
    const Trajectory t = simulate(cfg, gaussian_initial(cfg.grid()), RandomStream(1, 2), opts);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const ObservableVector a = observe(t.rows[r], t.tail_radii, cfg.L);
        const ObservableVector b = observe(t.states[r]);
        for (std::size_t c = 0; c < kObservableDim; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
    }
}

TEST_CASE("kb_average bookkeeping") {
    SimConfig cfg = small_config();
    const Trajectory zero = simulate(cfg, Field(cfg.grid()), RandomStream(1, 0));
    const EmpiricalMeasure m0 = kb_average(zero, cfg, 2);
    for (const auto& v : m0.samples)
        for (double x : v) CHECK(x == 0.0);
    const Trajectory t = simulate(cfg, gaussian_initial(cfg.grid()), RandomStream(1, 0));
    const EmpiricalMeasure m1 = kb_average(t, cfg, 1, 0.1), m2 = kb_average(t, cfg, 2, 0.1);
    CHECK(m1.size() == 11);
    CHECK(m2.size() == 21);
    CHECK(m2.weight() == doctest::Approx(1.0 / 21));
    CHECK(m1.window_end == 2.0);
    CHECK(!m1.has_states());
    CHECK_THROWS_AS(kb_average(t, cfg, 3), std::invalid_argument);
    CHECK_THROWS_AS(kb_average(t, cfg, 1, 0.15), std::invalid_argument);
    const auto times = kb_times(cfg, 2, 0.5);
    CHECK(times == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
}

TEST_CASE("measure distance basics") {
    const EmpiricalMeasure a = random_measure(40, 1, 0.0), b = random_measure(30, 2, 0.7);
    CHECK(measure_distance(a, a) == 0.0);
    CHECK(measure_distance(a, b) == measure_distance(b, a));
    CHECK(measure_distance(a, b) == doctest::Approx(brute_energy(a, b)).epsilon(1e-12));
    CHECK(measure_distance(a, b) > 0.0);

    EmpiricalMeasure shuffled = a;
    std::reverse(shuffled.samples.begin(), shuffled.samples.end());
    CHECK(measure_distance(a, shuffled) <= 1e-12);

    EmpiricalMeasure zero, unit;
    zero.samples.push_back(ObservableVector{});
    ObservableVector one{};
    one.fill(1.0);
    unit.samples.push_back(one);
    // pooled sd of {0, 1} is 1/2 per component: |X - Y| = sqrt(12 * 4)
    CHECK(measure_distance(zero, unit) == doctest::Approx(2 * std::sqrt(48.0)).epsilon(1e-14));
    CHECK(measure_distance(zero, unit) == doctest::Approx(brute_energy(zero, unit)).epsilon(1e-14));
    CHECK_THROWS_AS(measure_distance(EmpiricalMeasure{}, a), std::invalid_argument);
}

TEST_CASE("square-root energy distance obeys the triangle inequality at a fixed scale") {
    Scale scale;
    scale.fill(1.0);
    int violations = 0;
    for (int q = 0; q < 1000; ++q) {
        const EmpiricalMeasure a = random_measure(5 + q % 7, 10 + 3 * q, 0.0);
        const EmpiricalMeasure b = random_measure(4 + q % 5, 11 + 3 * q, 0.3 * (q % 4));
        const EmpiricalMeasure c = random_measure(6 + q % 3, 12 + 3 * q, -0.5 * (q % 3));
        const double ab = std::sqrt(energy_distance(a, b, scale));
        const double bc = std::sqrt(energy_distance(b, c, scale));
        const double ac = std::sqrt(energy_distance(a, c, scale));
        violations += ac > ab + bc + 1e-12;
    }
    CHECK(violations == 0);
}

TEST_CASE("invariance check") {
    SimConfig cfg = small_config();
    cfg.retain_states = true;
    SUBCASE("point mass at zero is invariant") {
        const Ensemble e = run_ensemble(cfg, Field(cfg.grid()));
        const EmpiricalMeasure mu = kb_average(e, 2, 0.5);
        REQUIRE(mu.has_states());
        const InvarianceResult r = invariance_check(mu, cfg, 1.0, 10, {.threads = 0, .replicates = 4});
        CHECK(r.distance == 0.0);
        CHECK(r.pass);
    }
    SUBCASE("zero lag reproduces the first baseline replicate") {
        const Ensemble e = run_ensemble(cfg, gaussian_initial(cfg.grid()));
        const EmpiricalMeasure mu = kb_average(e, 2, 0.5);
        const InvarianceResult r = invariance_check(mu, cfg, 0.0, 20, {.threads = 0, .replicates = 8});
        // the identity push-forward is exactly one of the baseline subsamples
        CHECK(r.distance == r.replicates[0]);
        CHECK(r.distance <= *std::max_element(r.replicates.begin(), r.replicates.end()));
        CHECK(r.replicates.size() == 8);
        const InvarianceResult again = invariance_check(mu, cfg, 0.5, 20, {.threads = 1, .replicates = 8});
        const InvarianceResult threaded = invariance_check(mu, cfg, 0.5, 20, {.threads = 4, .replicates = 8});
        CHECK(again.distance == threaded.distance);
    }
    SUBCASE("states are required") {
        const Trajectory t = simulate(cfg, gaussian_initial(cfg.grid()), RandomStream(1, 0),
                                      {.retain_states = false});
        CHECK_THROWS_AS(invariance_check(kb_average(t, cfg, 1), cfg, 1.0, 5), std::invalid_argument);
    }
}

TEST_CASE("tightness report") {
    SimConfig cfg = small_config();
    SUBCASE("zero solution") {
        const Ensemble e = run_ensemble(cfg, Field(cfg.grid()));
        const TightnessReport r = tightness_report(e, ensemble_stats(e), 2, 0.1, {1, 2, 3}, 0.5);
        for (const auto& row : r.rows) {
            CHECK(row.p_core == 0.0);
            CHECK(row.p_cut == 0.0);
            CHECK(row.markov_ok);
        }
        CHECK(r.total == 0.0);
        CHECK(r.pass);
    }
    SUBCASE("small stochastic ensemble") {
        const Ensemble e = run_ensemble(cfg, gaussian_initial(cfg.grid()));
        const TightnessReport r = tightness_report(e, ensemble_stats(e), 2, 0.1, {1, 2, 3}, 0.5);
        CHECK(r.c2 == doctest::Approx(29.125));
        CHECK(r.c1_ok);
        for (const auto& row : r.rows) {
            CHECK(row.N_star.has_value());
            CHECK(row.markov_ok);
            CHECK(row.estimate <= row.markov_bound + 3 * row.se);
        }
        CHECK(r.total < 0.1);
        CHECK(render_report(r).find("tightness total=") != std::string::npos);
    }
}

TEST_CASE("Cesaro distances are finite and nonnegative") {
    SimConfig cfg = small_config();
    cfg.T = 5.0;
    const Ensemble e = run_ensemble(cfg, gaussian_initial(cfg.grid()));
    const auto d = cesaro_distances(e, {1, 2}, 0.5);
    REQUIRE(d.size() == 2);
    for (double v : d) CHECK((std::isfinite(v) && v >= 0.0));
}

TEST_CASE("measure csv") {
    const EmpiricalMeasure a = random_measure(3, 1, 0.0);
    const std::string csv = measure_csv(a);
    CHECK(csv.rfind("l2sq,h1sq,tail_L4,tail_L2,c1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
