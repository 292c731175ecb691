#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/grid.hpp"
#include "sburgers/heat.hpp"
#include "sburgers/noise.hpp"
#include "sburgers/random.hpp"

namespace sburgers {

/// Raised when a step produces NaN or Inf.
class NumericalBlowup : public std::runtime_error {
public:
    NumericalBlowup(double t, const std::string& what)
        : std::runtime_error(what), time_(t) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Skew-symmetric discretization of -(1/2) d_x(u^2):
///   C(f) = -(1/3) [ f * Df + D(f * f) ]
/// with D the centered difference. Because D is skew, <f, C(f)> = 0 exactly
/// in exact arithmetic.
Field convection(const Field& f);
void convection(std::span<const double> f, double dx, std::span<double> out,
                std::span<double> scratch);

struct StepOptions {
    bool convection = true;
};

/// Exponential Euler-Maruyama step
///   u+ = S_k(dt) [ u + dt C(u) + sigma(u) * dW ]
/// with the linear part applied exactly in the sine basis.
///
/// Holds its own scratch buffers: use one Stepper per thread.
class Stepper {
public:
    explicit Stepper(const SimConfig& cfg, StepOptions opts = {});

    const Grid& grid() const { return heat_.grid(); }
    const HeatOperator& heat() const { return heat_; }
    const NoiseModel& noise() const { return noise_; }
    double dt() const { return dt_; }

    /// Samples the increment for the stream's current step into dW.
    void draw(RandomStream& stream, std::span<double> dW);

    /// One step in place. dW may be empty for a noise-free step.
    void advance(std::span<double> u, std::span<const double> dW);

private:
    HeatOperator heat_;
    NoiseModel noise_;
    SigmaSpec sigma_;
    StepOptions opts_;
    double dt_;
    std::vector<double> mult_;
    std::vector<double> bracket_, coeffs_, conv_, scratch_, draws_, noise_coeffs_;
};

/// Single step on value types. Requires inc.dt == cfg.dt.
Field step(const Field& u, const SimConfig& cfg, const NoiseIncrement& inc, StepOptions opts = {});

/// Tail radii used for trajectory diagnostics: a fixed ladder below L/2
/// merged with L/4 and L/2.
std::vector<double> default_tail_radii(double half_width);

/// Per-snapshot diagnostics.
struct DiagnosticsRow {
    double t = 0.0;
    double l2sq = 0.0;   // ||u||_2^2
    double lpp = 0.0;    // ||u||_2^p
    double h1sq = 0.0;   // ||u_x||_2^2
    // Running time integrals of ||u_x||_2^2 (trapezoid over every step):
    double dissipation = 0.0;           // int_0^t ||u_x||^2 ds
    double weighted_dissipation = 0.0;  // int_0^t e^{(2k - a l^2)(s - t)} ||u_x||^2 ds
    std::vector<double> tails;       // tail_mass(u, R) per radius
    std::array<double, 8> coeffs{};  // first eight sine coefficients
    // Split used by the tightness argument with n = 2R:
    std::vector<double> core_h1sq;  // ||(1 - theta_{2R}) u||_{H^1}^2
    std::vector<double> cut_l2sq;   // ||theta_{2R} u||_2^2
};

/// Computes DiagnosticsRow values for fields on one grid.
class RowProbe {
public:
    RowProbe(const Grid& grid, double moment, std::vector<double> radii);

    const std::vector<double>& radii() const { return radii_; }
    std::size_t radius_index(double radius) const;

    DiagnosticsRow operator()(double t, std::span<const double> u) const;

private:
    Grid grid_;
    SineTransform transform_;
    double moment_;
    std::vector<double> radii_;
    std::vector<Field> thetas_;  // theta_{2R}
};

enum class TrajectoryStatus { completed, guard_triggered };

struct Trajectory {
    std::vector<double> tail_radii;
    std::vector<DiagnosticsRow> rows;
    std::vector<Field> states;          // retained snapshots
    std::vector<double> state_times;    // time of each retained snapshot
    std::vector<Field> noise;           // dW summed between consecutive rows, when recorded
    std::optional<Field> final_state;
    TrajectoryStatus status = TrajectoryStatus::completed;
    double stop_time = 0.0;             // guard time when guard_triggered

    std::vector<double> times() const;
};

struct SimOptions {
    StepOptions step;
    bool record_noise = false;
    std::optional<bool> retain_states;  // overrides cfg.retain_states
    std::function<bool(double)> retain_at;  // when set, keeps only row times it accepts
    std::vector<double> tail_radii;     // empty: default_tail_radii(L)
    double horizon = -1.0;              // overrides cfg.T when > 0
};

/// Iterates `step` from t = 0 to T, recording a row every snapshot_stride
/// steps. If ||u||_2 >= N_max the run stops with status guard_triggered and
/// a final row at the guard time. NaN/Inf throws NumericalBlowup.
/// Noise sums in `noise` cover the interval ending at each row after the
/// first, so noise[r] belongs to (rows[r].t, rows[r + 1].t].
Trajectory simulate(const SimConfig& cfg, const Field& u0, RandomStream stream,
                    const SimOptions& opts = {});

/// Evolves u for `steps` steps without recording; stops early at the guard.
/// Returns the number of steps taken.
int evolve(Stepper& stepper, std::span<double> u, int steps, RandomStream& stream,
           double guard_radius);

/// Default initial datum exp(-x^2).
Field gaussian_initial(const Grid& grid, double amplitude = 1.0, double width = 1.0,
                       double center = 0.0);

}  // namespace sburgers
