#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/ensemble.hpp"
#include "sburgers/grid.hpp"

namespace sburgers {

inline constexpr std::size_t kObservableDim = 12;

/// (||u||^2, ||u_x||^2, tail_mass(L/4), tail_mass(L/2), c_1 .. c_8) with c_j
/// the sine coefficients.
using ObservableVector = std::array<double, kObservableDim>;

/// Component names, in order, as used in CSV headers.
const std::array<std::string, kObservableDim>& observable_names();

ObservableVector observe(const Field& f);

/// Same projection read from a diagnostics row; the row's radii must include
/// L/4 and L/2.
ObservableVector observe(const DiagnosticsRow& row, const std::vector<double>& radii,
                         double half_width);

/// Equal-weight sample of observables: the time average
/// (1/s) int_1^{s+1} p(t, u0, .) dt sampled on a uniform time grid.
/// `states[i]`, when present, is the field behind samples[i].
struct EmpiricalMeasure {
    std::vector<ObservableVector> samples;
    std::vector<Field> states;
    double window_start = 1.0;
    double window_end = 1.0;
    std::string source;

    int size() const { return static_cast<int>(samples.size()); }
    bool has_states() const { return !states.empty() && states.size() == samples.size(); }
    double weight() const { return samples.empty() ? 0.0 : 1.0 / samples.size(); }
};

/// Sample times 1, 1 + spacing, ..., 1 + s. spacing must be a multiple of the
/// row spacing cfg.dt * snapshot_stride; spacing <= 0 means every row.
std::vector<double> kb_times(const SimConfig& cfg, int s, double spacing);

/// mu_s from one trajectory or pooled over an ensemble. States are attached
/// when every sampled time has a retained state. A guard-stopped trajectory
/// contributes its stopped state at later times.
EmpiricalMeasure kb_average(const Trajectory& traj, const SimConfig& cfg, int s,
                            double spacing = 0.0);
EmpiricalMeasure kb_average(const Ensemble& ensemble, int s, double spacing = 0.0);

using Scale = std::array<double, kObservableDim>;

/// Per-component population standard deviation of the pooled samples; zero
/// spreads are replaced by 1.
Scale pooled_scale(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Energy distance 2 E|X - Y| - E|X - X'| - E|Y - Y'| with |.| the Euclidean
/// norm after dividing component c by scale[c]; exact over all pairs.
double energy_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const Scale& scale);

/// energy_distance with the pooled scale of a and b; symmetric in its
/// arguments and exactly 0 for identical samples.
double measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

struct InvarianceOptions {
    int threads = 0;
    int replicates = 20;
};

struct InvarianceResult {
    double distance = 0.0;            // d(mu, p_Delta^* mu)
    double baseline = 0.0;            // mean of replicate distances
    std::vector<double> replicates;   // d(mu, size-M subsample of mu)
    int draws = 0;
    bool pass = false;                // distance <= 2 baseline
};

/// Draws M retained states from mu (stream (resample, 0)), evolves each by
/// Delta with fresh noise (stream (pushforward, q)) and compares the
/// push-forward sample with mu. The baseline is the mean distance between mu
/// and size-M subsamples of itself (streams (resample, r)); replicate 0 is the
/// draw set that was pushed forward, i.e. the Delta = 0 case.
InvarianceResult invariance_check(const EmpiricalMeasure& mu, const SimConfig& cfg, double delta,
                                  int M, const InvarianceOptions& opts = {});

/// d(mu_s, mu_{2s}) for each s.
std::vector<double> cesaro_distances(const Ensemble& ensemble, const std::vector<int>& s_list,
                                     double spacing);

/// Constant c2 with ||(1 - theta_n) u||_{H^1}^2 <= c2 ||u||_{H^1}^2 for n >= 1.
double tightness_c2();

struct TightnessRow {
    int m = 0;
    std::optional<double> N_star;  // radius with sup tail < eps / 2^{4m}
    double n_m = 0.0;              // 2 N_star
    double core_threshold = 0.0;   // 2^{2m} 3 c1 c2 / eps
    double cut_threshold = 0.0;    // 2^{-2m}
    double p_core = 0.0;           // P(||(1 - theta_{n_m}) u||_{H^1}^2 > core_threshold)
    double p_cut = 0.0;            // P(||theta_{n_m} u||^2 > cut_threshold)
    double estimate = 0.0;         // p_core + p_cut
    double se = 0.0;
    double markov_bound = 0.0;     // eps/2^{2m} + eps/(2^{2m} 3 c1) mean ||u||_{H^1}^2
    bool markov_ok = false;        // estimate <= markov_bound + 3 se
};

struct TightnessReport {
    double eps = 0.0;
    int s = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    double h1_average = 0.0;  // (1/s) int_1^{s+1} mean ||u||_{H^1}^2 dt
    bool c1_ok = false;       // h1_average <= 3 c1
    std::vector<TightnessRow> rows;
    double total = 0.0;
    bool pass = false;
    std::string message;
};

/// Estimates P(u(t) not in Z_m) for each m over the mu_s window samples.
TightnessReport tightness_report(const Ensemble& ensemble, const EnsembleStats& stats, int s,
                                 double eps, const std::vector<int>& m_list, double spacing);

std::string render_report(const TightnessReport& report);

/// CSV of observable rows with a header naming each component.
std::string measure_csv(const EmpiricalMeasure& mu);

}  // namespace sburgers
