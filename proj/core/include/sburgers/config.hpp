#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sburgers/grid.hpp"
#include "sburgers/noise.hpp"

namespace sburgers {

/// Every knob of a run. Defaults are the desk-scale configuration.
struct SimConfig {
    // domain
    double L = 32.0;
    int n = 2047;
    // time stepping
    double dt = 1e-3;
    double T = 50.0;
    int snapshot_stride = 100;
    // physics
    double k = 1.0;
    double l = 0.3;
    SigmaKind sigma_kind = SigmaKind::linear;
    double a0 = 0.5;
    double r = 1.0;
    int J = 64;
    // ensemble
    int M = 200;
    std::uint64_t seed = 0;
    double N_max = 100.0;
    double p = 2.0;
    bool retain_states = false;

    bool operator==(const SimConfig&) const = default;

    Grid grid() const { return Grid::make(L, n); }
    SigmaSpec sigma() const { return {sigma_kind, l}; }
    NoiseModel noise_model() const { return NoiseModel::power_law(grid(), a0, r, J); }

    /// a = sum_{j<=J} a_j^2.
    double trace() const;
    double noise_strength() const { return trace() * l * l; }  // a l^2

    /// a l^2 < k / (p - 1): uniform p-th moment bound.
    bool bound_regime() const;
    bool bound_regime(double moment) const;
    /// a l^2 < 3k/7: tail estimate and invariant measure.
    bool invariant_regime() const;

    int steps() const;

    /// Throws std::invalid_argument on any violated precondition.
    void validate() const;
};

/// Parses `key=value` lines with `#` comments. Unknown keys, duplicate keys,
/// malformed values and a missing `seed` are errors.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const SimConfig& cfg);

/// Non-fatal diagnostics about the configured regime.
std::vector<std::string> regime_warnings(const SimConfig& cfg);

}  // namespace sburgers
