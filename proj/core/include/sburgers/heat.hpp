#pragma once

#include <span>
#include <vector>

#include "sburgers/grid.hpp"
#include "sburgers/sine_transform.hpp"

namespace sburgers {

/// Uniformly sampled path s_m = m * step, m = 0..size()-1.
struct FieldPath {
    double step = 0.0;
    std::vector<Field> values;

    int size() const { return static_cast<int>(values.size()); }
    double time(int m) const { return m * step; }
};

/// Damped heat semigroup S_k(t) = exp(t (d_xx - k)) on the truncated line,
/// diagonal in the Dirichlet sine basis: mode j is multiplied by
/// exp(-(lambda_j + k) t) with lambda_j = (j pi / (2L))^2.
class HeatOperator {
public:
    HeatOperator(const Grid& grid, double damping);

    const Grid& grid() const { return transform_.grid(); }
    const SineTransform& transform() const { return transform_; }
    double damping() const { return damping_; }
    double eigenvalue(int j) const;  // 1-based
    double multiplier(int j, double t) const;

    /// exp(-(lambda_j + k) t) for j = 1..n.
    std::vector<double> multipliers(double t) const;

private:
    SineTransform transform_;
    double damping_;
};

/// S_k(t) f. t = 0 returns f unchanged; t < 0 throws.
Field heat_apply(const HeatOperator& op, const Field& f, double t);

struct KernelCheck {
    double mass = 0.0;  // sum_i G(t, x_i) dx
    double l2sq = 0.0;  // sum_i G(t, x_i)^2 dx
};

/// Free-space kernel G(t, x) = (4 pi t)^{-1/2} exp(-x^2 / (4t)).
double heat_kernel(double t, double x);

/// Quadrature of the explicit kernel on the grid. The exact integrals are
/// mass = 1 and l2sq = (8 pi t)^{-1/2}. Requires 4 sqrt(t) <= L.
KernelCheck kernel_checks(const Grid& grid, double t);

/// Left-endpoint quadrature of int_0^t S(t - s) v(s) ds for every partition
/// time: result[m] approximates the integral up to s_m (result[0] = 0).
std::vector<Field> j1_path(const FieldPath& v, const HeatOperator& op);
Field j1_apply(const FieldPath& v, const HeatOperator& op, double t);

/// Left-endpoint quadrature of int_0^t int d/dy[G(t - s, x - y)] w(s, y) dy ds,
/// which equals -d_x of the heat-smoothed integral. The node s = t is never
/// evaluated.
std::vector<Field> j2_path(const FieldPath& w, const HeatOperator& op);
Field j2_apply(const FieldPath& w, const HeatOperator& op, double t);

/// Ito sum sum_{s_m < t} S(t - s_m)[phi(s_m) * dW_m]. dW[m] is the noise
/// increment over [s_m, s_{m+1}].
std::vector<Field> stoch_conv_path(const FieldPath& phi, std::span<const Field> dW,
                                   const HeatOperator& op);
Field stoch_conv(const FieldPath& phi, std::span<const Field> dW, const HeatOperator& op,
                 double t);

/// Partition index for time t; throws unless t is (within rounding) a
/// partition point of the path.
int partition_index(const FieldPath& path, double t);

}  // namespace sburgers
