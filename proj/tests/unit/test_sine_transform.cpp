#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "sburgers/noise.hpp"
#include "sburgers/sine_transform.hpp"
#include "support.hpp"

using namespace sburgers;

TEST_CASE("forward transform matches the direct sine sum") {
    for (int n : {3, 7, 63, 100, 255, 1000}) {
        const Grid g = make_grid(5.0, n);
        const Field f = testing_support::random_field(g, static_cast<std::uint64_t>(n));
        const SineTransform tr(g);
        std::vector<double> c(static_cast<std::size_t>(n));
        tr.forward(f.values(), c);
        double worst = 0.0, scale = 0.0;
        for (int j = 1; j <= n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                s += f[i] * std::sin(j * std::numbers::pi * (i + 1) / (n + 1)) / std::sqrt(5.0);
            }
            s *= g.dx();
            worst = std::max(worst, std::abs(s - c[j - 1]));
            scale = std::max(scale, std::abs(s));
        }
        CHECK(worst <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("inverse undoes forward") {
    const Grid g = make_grid(32.0, 2047);
    const SineTransform tr(g);
    const Field f = testing_support::random_field(g, 3);
    std::vector<double> c(2047);
    Field back(g);
    tr.forward(f.values(), c);
    tr.inverse(c, back.values());
    CHECK(lp_norm(back - f, 2.0) <= 1e-13 * lp_norm(f, 2.0));
    // Parseval
    double s = 0.0;
    for (double v : c) s += v * v;
    CHECK(std::sqrt(s) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
}

TEST_CASE("basis modes map to unit coefficients") {
    const Grid g = make_grid(8.0, 127);
    const SineTransform tr(g);
    std::vector<double> c(127);
    for (int j : {1, 2, 64, 127}) {
        tr.forward(basis_eval(j, g).values(), c);
        for (int m = 1; m <= 127; ++m) CHECK(std::abs(c[m - 1] - (m == j ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("spectral derivative of a mode") {
    const Grid g = make_grid(4.0, 255);
    const SineTransform tr(g);
    std::vector<double> c(255, 0.0), d(255), scratch(2 * 257);
    c[2] = 1.0;  // e_3
    tr.derivative(c, d, scratch);
    const double w = tr.wavenumber(3);
    CHECK(w == doctest::Approx(3 * std::numbers::pi / 8.0));
    for (int i = 0; i < 255; ++i) {
        const double x = g.node(i);
        CHECK(std::abs(d[i] - w * std::cos(w * (x + 4.0)) / 2.0) <= 1e-11);
    }
}

TEST_CASE("transforms are safe to use from several threads") {
    const Grid g = make_grid(32.0, 2047);
    const Field f = testing_support::random_field(g, 4);
    std::vector<double> ref(2047);
    SineTransform(g).forward(f.values(), ref);
    std::vector<std::vector<double>> out(8, std::vector<double>(2047));
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&, t] {
            const SineTransform tr(g);
            for (int r = 0; r < 50; ++r) tr.forward(f.values(), out[static_cast<std::size_t>(t)]);
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& o : out) CHECK(o == ref);
}
