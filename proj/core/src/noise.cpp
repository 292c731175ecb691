#include "sburgers/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sburgers {

NoiseModel::NoiseModel(const Grid& grid, std::vector<double> coefficients)
    : transform_(grid), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() > static_cast<std::size_t>(grid.size())) {
        throw std::invalid_argument("noise model has more modes than grid nodes");
    }
    for (double a : coefficients_) {
        if (!std::isfinite(a)) throw std::invalid_argument("noise coefficients must be finite");
        trace_ += a * a;
    }
}

NoiseModel NoiseModel::power_law(const Grid& grid, double a0, double r, int modes) {
    if (!(a0 >= 0.0)) throw std::invalid_argument("noise amplitude a0 must be nonnegative");
    if (!(r > 0.5)) {
        throw std::invalid_argument("noise decay r must exceed 1/2 so that sum a_j^2 converges");
    }
    if (modes < 0 || modes > grid.size()) {
        throw std::invalid_argument("noise mode count J must lie in [0, n]");
    }
    std::vector<double> a(static_cast<std::size_t>(modes));
    for (int j = 1; j <= modes; ++j) a[j - 1] = a0 * std::pow(static_cast<double>(j), -r);
    return NoiseModel(grid, std::move(a));
}

Field basis_eval(int j, const Grid& grid) {
    if (j < 1 || j > grid.size()) throw std::invalid_argument("basis index out of range");
    const double scale = 1.0 / std::sqrt(grid.half_width());
    const double theta = j * std::numbers::pi / (grid.size() + 1);
    Field e(grid);
    for (int i = 0; i < grid.size(); ++i) e[i] = scale * std::sin(theta * (i + 1));
    return e;
}

void sample_increment_into(const NoiseModel& model, double dt, RandomStream& stream,
                           std::span<double> draws, std::span<double> coeffs,
                           std::span<double> dW) {
    if (!(dt > 0.0)) throw std::invalid_argument("noise increment needs dt > 0");
    const auto J = static_cast<std::size_t>(model.modes());
    stream.next_normals(draws.first(J));
    const double sdt = std::sqrt(dt);
    const auto a = model.coefficients();
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        draws[j] *= sdt;
        coeffs[j] = a[j] * draws[j];
    }
    model.transform().inverse(coeffs, dW);
}

NoiseIncrement sample_increment(const NoiseModel& model, double dt, RandomStream& stream) {
    NoiseIncrement inc{Field(model.grid()), dt,
                       std::vector<double>(static_cast<std::size_t>(model.modes()))};
    std::vector<double> coeffs(static_cast<std::size_t>(model.grid().size()));
    sample_increment_into(model, dt, stream, inc.mode_draws, coeffs, inc.dW.values());
    return inc;
}

std::string to_string(SigmaKind kind) {
    return kind == SigmaKind::linear ? "linear" : "saturating";
}

SigmaKind sigma_kind_from_string(const std::string& name) {
    if (name == "linear") return SigmaKind::linear;
    if (name == "saturating") return SigmaKind::saturating;
    throw std::invalid_argument("unknown sigma kind '" + name + "' (expected linear|saturating)");
}

double SigmaSpec::operator()(double u) const {
    return kind == SigmaKind::linear ? growth * u : growth * std::sin(u);
}

Field sigma_eval(const SigmaSpec& spec, const Field& f) {
    Field out(f.grid());
    for (int i = 0; i < f.size(); ++i) out[i] = spec(f[i]);
    return out;
}

}  // namespace sburgers
