#include "sburgers/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sburgers {

Grid::Grid(double half_width, int n)
    : half_width_(half_width), n_(n), dx_(2.0 * half_width / (n + 1)) {}

Grid Grid::make(double half_width, int n) {
    if (!(half_width >= 1.0)) {
        throw std::invalid_argument(
            "grid half-width L = " + std::to_string(half_width) +
            " < 1: the sine basis would violate sup_j |e_j| <= 1");
    }
    if (n < 3) {
        throw std::invalid_argument("grid needs at least 3 interior nodes, got " +
                                    std::to_string(n));
    }
    return Grid(half_width, n);
}

Grid make_grid(double half_width, int n) { return Grid::make(half_width, n); }

std::vector<double> Grid::nodes() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

Field::Field(const Grid& grid) : grid_(grid), values_(static_cast<std::size_t>(grid.size()), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(grid_.size())) {
        throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                    " values but grid has " + std::to_string(grid_.size()) +
                                    " nodes");
    }
}

bool Field::is_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field f) { return f *= c; }
Field operator*(Field f, double c) { return f *= c; }

Field hadamard(const Field& a, const Field& b) {
    require_same_grid(a, b);
    Field out(a.grid());
    for (int i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b);
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid().dx();
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
    const double dx = f.grid().dx();
    double s = 0.0;
    if (p == 2.0) {
        for (double v : f.values()) s += v * v;
        return std::sqrt(s * dx);
    }
    for (double v : f.values()) s += std::pow(std::abs(v), p);
    return std::pow(s * dx, 1.0 / p);
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

void centered_difference(std::span<const double> f, double dx, std::span<double> out) {
    const std::size_t n = f.size();
    const double inv = 0.5 / dx;
    out[0] = f[1] * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv;
    out[n - 1] = -f[n - 2] * inv;
}

Field centered_difference(const Field& f) {
    Field out(f.grid());
    centered_difference(f.values(), f.grid().dx(), out.values());
    return out;
}

Field second_difference(const Field& f) {
    const int n = f.size();
    const double inv = 1.0 / (f.grid().dx() * f.grid().dx());
    Field out(f.grid());
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? f[i - 1] : 0.0;
        const double right = i + 1 < n ? f[i + 1] : 0.0;
        out[i] = (right - 2.0 * f[i] + left) * inv;
    }
    return out;
}

double h1_seminorm_sq(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    const double inv = 0.5 / dx;
    double s = 0.0;
    double d = f[1] * inv;
    s += d * d;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d = (f[i + 1] - f[i - 1]) * inv;
        s += d * d;
    }
    d = f[n - 2] * inv;
    s += d * d;
    const double left = f[0] / dx;
    const double right = f[n - 1] / dx;
    return dx * s + 0.5 * dx * (left * left + right * right);
}

double h1_seminorm(const Field& f) { return std::sqrt(h1_seminorm_sq(f.values(), f.grid().dx())); }

double tail_mass(std::span<const double> f, const Grid& grid, double radius) {
    if (radius < 0.0) throw std::invalid_argument("tail radius must be nonnegative");
    const double dx = grid.dx();
    double s = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = std::abs(grid.node(i));
        const double lo = x - 0.5 * dx;
        const double hi = x + 0.5 * dx;
        double w;
        if (lo >= radius) {
            w = dx;
        } else if (hi <= radius) {
            w = 0.0;
        } else {
            w = hi - radius;
        }
        // A cell straddling x = 0 is symmetric; only its |x| >= radius part counts.
        if (grid.node(i) - 0.5 * dx < 0.0 && grid.node(i) + 0.5 * dx > 0.0) {
            const double a = -(grid.node(i) - 0.5 * dx);
            const double b = grid.node(i) + 0.5 * dx;
            w = std::max(0.0, a - radius) + std::max(0.0, b - radius);
        }
        s += w * f[i] * f[i];
    }
    return s;
}

double tail_mass(const Field& f, double radius) { return tail_mass(f.values(), f.grid(), radius); }

double cutoff_profile(double s) {
    const double a = std::abs(s);
    if (a <= 0.5) return 0.0;
    if (a >= 1.0) return 1.0;
    const double t = 2.0 * a - 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

Field cutoff_theta(double m, const Grid& grid) {
    if (!(m > 0.0)) throw std::invalid_argument("cutoff scale m must be positive");
    return Field::sample(grid, [m](double x) { return cutoff_profile(x / m); });
}

}  // namespace sburgers
