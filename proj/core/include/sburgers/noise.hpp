#pragma once

#include <span>
#include <string>
#include <vector>

#include "sburgers/grid.hpp"
#include "sburgers/random.hpp"
#include "sburgers/sine_transform.hpp"

namespace sburgers {

/// Spectral Q-Wiener process W(t) = sum_{j<=J} a_j beta_j(t) e_j on the
/// Dirichlet sine basis of the grid.
class NoiseModel {
public:
    /// a_j = a0 * j^{-r}; requires a0 >= 0, r > 1/2 and 0 <= J <= n.
    static NoiseModel power_law(const Grid& grid, double a0, double r, int modes);
    /// Arbitrary coefficients, a[j-1] = a_j.
    NoiseModel(const Grid& grid, std::vector<double> coefficients);

    const Grid& grid() const { return transform_.grid(); }
    const SineTransform& transform() const { return transform_; }
    int modes() const { return static_cast<int>(coefficients_.size()); }
    std::span<const double> coefficients() const { return coefficients_; }

    /// a = sum_j a_j^2.
    double trace() const { return trace_; }

private:
    SineTransform transform_;
    std::vector<double> coefficients_;
    double trace_ = 0.0;
};

/// e_j(x) = L^{-1/2} sin(j pi (x + L) / (2L)) at the nodes; 1 <= j <= n.
Field basis_eval(int j, const Grid& grid);

struct NoiseIncrement {
    Field dW;
    double dt = 0.0;
    std::vector<double> mode_draws;  // Delta B_j ~ N(0, dt)
};

/// Draws the J Brownian increments for the stream's current step and
/// assembles dW by an inverse sine transform. Advances the stream.
NoiseIncrement sample_increment(const NoiseModel& model, double dt, RandomStream& stream);

/// Allocation-free variant; `draws` has modes() entries and `coeffs`, `dW`
/// have n entries.
void sample_increment_into(const NoiseModel& model, double dt, RandomStream& stream,
                           std::span<double> draws, std::span<double> coeffs,
                           std::span<double> dW);

enum class SigmaKind { linear, saturating };

std::string to_string(SigmaKind kind);
SigmaKind sigma_kind_from_string(const std::string& name);

/// Noise coefficient: linear l*u or saturating l*sin(u). Both satisfy
/// |sigma(u)| <= l |u| and are l-Lipschitz.
struct SigmaSpec {
    SigmaKind kind = SigmaKind::linear;
    double growth = 0.3;

    double operator()(double u) const;
    double lipschitz() const { return growth; }
};

Field sigma_eval(const SigmaSpec& spec, const Field& f);

}  // namespace sburgers
