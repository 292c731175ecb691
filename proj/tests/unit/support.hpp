#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sburgers/grid.hpp"
#include "sburgers/random.hpp"

namespace testing_support {

// Random smooth-ish field: sum of a few sine modes plus pointwise jitter.
inline sburgers::Field random_field(const sburgers::Grid& g, std::uint64_t id, double jitter = 0.1) {
    sburgers::RandomStream rs(12345, sburgers::stream_id(sburgers::StreamPurpose::test, id));
    std::vector<double> z(static_cast<std::size_t>(g.size()) + 8);
    rs.next_normals(z);
    sburgers::Field f(g);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < g.size(); ++i) {
        const double s = static_cast<double>(i + 1) / (g.size() + 1);
        double v = 0.0;
        for (int j = 1; j <= 8; ++j) v += z[static_cast<std::size_t>(g.size() + j - 1)] / j * std::sin(j * pi * s);
        f[i] = v + jitter * z[static_cast<std::size_t>(i)];
    }
    return f;
}

// Composite Simpson rule on [a, b] with m (even) panels.
template <class Fn>
double simpson(Fn&& fn, double a, double b, int m) {
    const double h = (b - a) / m;
    double s = fn(a) + fn(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
    return s * h / 3.0;
}

}  // namespace testing_support
