#pragma once

#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/grid.hpp"
#include "sburgers/heat.hpp"
#include "sburgers/random.hpp"

namespace sburgers {

/// A field-valued path on the uniform partition s_m = m * step of [0, T]
/// together with the noise increments that drive it. dW[m] is the increment
/// over [s_m, s_{m+1}]; an empty dW means no noise.
struct PathFunction {
    Field u0;
    double step = 0.0;
    std::vector<Field> values;  // u(s_0) .. u(s_K), values[0] == u0
    std::vector<Field> dW;

    int size() const { return static_cast<int>(values.size()); }
    double horizon() const { return step * (size() - 1); }
    const Grid& grid() const { return u0.grid(); }
    FieldPath as_field_path() const { return {step, values}; }
};

/// Horizon used for Picard experiments.
inline constexpr double kPicardHorizon = 0.25;

/// Radial projection onto the L^p ball of radius N.
Field pi_n(const Field& f, double N, double p);

/// Noise increments for `steps` steps of size cfg.dt from `stream`.
std::vector<Field> noise_path(const SimConfig& cfg, int steps, RandomStream& stream);

/// The path with every value equal to the heat flow S(s_m) u0 (k = 0 kernel).
PathFunction heat_flow_path(const Field& u0, const SimConfig& cfg, double horizon,
                            std::vector<Field> dW);

/// A = A1 + A2 + A3 + A4 evaluated on the partition:
///   A1 = S(t) u0,  A2 = -k J1(pi_N u),  A3 = (1/2) J2((pi_N u)^2),
///   A4 = stochastic convolution of sigma(pi_N u),
/// with S the k = 0 heat semigroup and left-endpoint time quadrature. A3
/// uses the same skew-symmetric difference as the integrator, so at k = 0 the
/// fixed point of A is exactly the integrator's trajectory.
PathFunction apply_A(const PathFunction& u, const SimConfig& cfg, double N);

/// Exponentially weighted path norm
///   ( int_0^T e^{-lambda t} ||u(t)||_p^p dt )^{1/p}
/// with ||u(t)||_p^p interpolated linearly between partition points and the
/// weight integrated exactly.
double weighted_norm(const PathFunction& u, double lambda, double p);

/// Difference of two paths on the same partition (noise of `a` kept).
PathFunction path_difference(const PathFunction& a, const PathFunction& b);

struct PicardResult {
    PathFunction solution;          // last iterate
    std::vector<double> residuals;  // weighted_norm(u^{m+1} - u^m)
    bool diverged = false;          // residual grew 3 iterations in a row
    int iterations = 0;
};

/// u^{m+1} = A(u^m) from the heat flow of u0, for `iters` iterations or
/// until divergence. Residual norms use weight `lambda` and exponent cfg.p.
PicardResult picard_solve(const Field& u0, const SimConfig& cfg, double N, int iters,
                          double lambda, std::vector<Field> dW, double horizon = kPicardHorizon);

/// Largest successive ratio residuals[m+1] / residuals[m], taken while
/// residuals[m] > floor * residuals[0]. Returns 0 when no ratio qualifies.
/// Geometric decrease means a value below 1.
double max_residual_ratio(const std::vector<double>& residuals, double floor = 1e-12);

/// weighted_norm(A u - A v) / weighted_norm(u - v); u and v must share the
/// partition and noise. Throws if u == v.
double contraction_factor(const PathFunction& u, const PathFunction& v, const SimConfig& cfg,
                          double N, double lambda);

/// A random smooth path for contraction probes: the first 16 sine modes
/// with amplitudes ~ amplitude * j^-1 following independent random walks.
PathFunction random_path(const Field& u0, const SimConfig& cfg, double horizon,
                         std::vector<Field> dW, RandomStream& stream, double amplitude = 1.0);

}  // namespace sburgers
