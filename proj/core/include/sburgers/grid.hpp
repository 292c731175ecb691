#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sburgers {

/// Uniform mesh on [-L, L] with homogeneous Dirichlet ends.
///
/// Only the n interior nodes x_i = -L + i*dx (i = 1..n) are stored; the two
/// boundary nodes carry u = 0 implicitly. L >= 1 keeps the sine basis
/// bounded by one in sup norm.
class Grid {
public:
    static Grid make(double half_width, int n);

    double half_width() const { return half_width_; }
    int size() const { return n_; }
    double dx() const { return dx_; }

    /// Interior node, zero-based: node(0) = -L + dx.
    double node(int i) const { return -half_width_ + (i + 1) * dx_; }
    std::vector<double> nodes() const;

    bool operator==(const Grid& other) const {
        return n_ == other.n_ && half_width_ == other.half_width_;
    }

private:
    Grid(double half_width, int n);

    double half_width_ = 1.0;
    int n_ = 3;
    double dx_ = 0.5;
};

Grid make_grid(double half_width, int n);

/// Nodal values of u(t, .) at the interior nodes of a grid.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, std::vector<double> values);

    template <class Fn>
    static Field sample(const Grid& grid, Fn&& fn) {
        std::vector<double> v(static_cast<std::size_t>(grid.size()));
        for (int i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
        return Field(grid, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool is_finite() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c);

    bool operator==(const Field& other) const {
        return grid_ == other.grid_ && values_ == other.values_;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field f);
Field operator*(Field f, double c);

/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b);

/// Discrete inner product sum_i a_i b_i dx.
double inner(const Field& a, const Field& b);

/// (sum_i |f_i|^p dx)^(1/p); p >= 1.
double lp_norm(const Field& f, double p);
double max_abs(const Field& f);

/// Centered difference with the implicit zero boundary values.
/// The matrix is skew-symmetric.
void centered_difference(std::span<const double> f, double dx, std::span<double> out);
Field centered_difference(const Field& f);

/// Second difference (f_{i+1} - 2 f_i + f_{i-1}) / dx^2 with zero ends.
Field second_difference(const Field& f);

/// L^2 norm of the discrete derivative. Interior nodes use the centered
/// difference; the two boundary nodes contribute one-sided slopes against the
/// implicit zeros with half (trapezoid) weight.
double h1_seminorm(const Field& f);
double h1_seminorm_sq(std::span<const double> f, double dx);

/// Mass of f^2 on {|x| >= radius}. Each node owns the cell
/// [x_i - dx/2, x_i + dx/2]; a cell cut by the threshold contributes only the
/// part lying in the tail.
double tail_mass(const Field& f, double radius);
double tail_mass(std::span<const double> f, const Grid& grid, double radius);

/// Cutoff profile: 0 on |s| <= 1/2, 1 on |s| >= 1, quintic smoothstep between.
double cutoff_profile(double s);

/// sup |theta'| for the quintic profile.
inline constexpr double kCutoffSlopeBound = 3.75;

/// theta_m(x) = theta(x / m) sampled on the grid; m > 0.
Field cutoff_theta(double m, const Grid& grid);

}  // namespace sburgers
