#include "sburgers/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sburgers {

void convection(std::span<const double> f, double dx, std::span<double> out,
                std::span<double> scratch) {
    const std::size_t n = f.size();
    auto sq = scratch.first(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = f[i] * f[i];
    const double c = -1.0 / (6.0 * dx);
    // zero Dirichlet values outside the grid
    out[0] = c * (f[0] * f[1] + sq[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = c * (f[i] * (f[i + 1] - f[i - 1]) + (sq[i + 1] - sq[i - 1]));
    }
    out[n - 1] = c * (-f[n - 1] * f[n - 2] - sq[n - 2]);
}

Field convection(const Field& f) {
    Field out(f.grid());
    std::vector<double> scratch(static_cast<std::size_t>(f.size()));
    convection(f.values(), f.grid().dx(), out.values(), scratch);
    return out;
}

Stepper::Stepper(const SimConfig& cfg, StepOptions opts)
    : heat_(cfg.grid(), cfg.k),
      noise_(cfg.noise_model()),
      sigma_(cfg.sigma()),
      opts_(opts),
      dt_(cfg.dt),
      mult_(heat_.multipliers(cfg.dt)) {
    const auto n = static_cast<std::size_t>(cfg.n);
    bracket_.resize(n);
    coeffs_.resize(n);
    conv_.resize(n);
    scratch_.resize(n);
    noise_coeffs_.resize(n);
    draws_.resize(static_cast<std::size_t>(noise_.modes()));
}

void Stepper::draw(RandomStream& stream, std::span<double> dW) {
    sample_increment_into(noise_, dt_, stream, draws_, noise_coeffs_, dW);
}

void Stepper::advance(std::span<double> u, std::span<const double> dW) {
    const std::size_t n = u.size();
    if (opts_.convection) {
        convection(u, grid().dx(), conv_, scratch_);
    } else {
        std::fill(conv_.begin(), conv_.end(), 0.0);
    }
    if (dW.empty()) {
        for (std::size_t i = 0; i < n; ++i) bracket_[i] = u[i] + dt_ * conv_[i];
    } else if (sigma_.kind == SigmaKind::linear) {
        const double g = sigma_.growth;
        for (std::size_t i = 0; i < n; ++i) {
            bracket_[i] = u[i] + dt_ * conv_[i] + g * u[i] * dW[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            bracket_[i] = u[i] + dt_ * conv_[i] + sigma_(u[i]) * dW[i];
        }
    }
    heat_.transform().forward(bracket_, coeffs_);
    for (std::size_t j = 0; j < n; ++j) coeffs_[j] *= mult_[j];
    heat_.transform().inverse(coeffs_, u);
}

Field step(const Field& u, const SimConfig& cfg, const NoiseIncrement& inc, StepOptions opts) {
    if (inc.dt != cfg.dt) throw std::invalid_argument("step: increment dt differs from cfg.dt");
    require_same_grid(u, inc.dW);
    Stepper stepper(cfg, opts);
    Field out = u;
    stepper.advance(out.values(), inc.dW.values());
    if (!out.is_finite()) throw NumericalBlowup(cfg.dt, "step produced a non-finite value");
    return out;
}

std::vector<double> default_tail_radii(double half_width) {
    static constexpr double ladder[] = {0.5, 1, 1.5, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32};
    std::vector<double> r;
    for (double v : ladder) {
        if (v < 0.5 * half_width) r.push_back(v);
    }
    r.push_back(0.25 * half_width);
    r.push_back(0.5 * half_width);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

RowProbe::RowProbe(const Grid& grid, double moment, std::vector<double> radii)
    : grid_(grid), transform_(grid), moment_(moment), radii_(std::move(radii)) {
    std::sort(radii_.begin(), radii_.end());
    thetas_.reserve(radii_.size());
    for (double r : radii_) {
        if (!(r > 0.0)) throw std::invalid_argument("tail radii must be positive");
        thetas_.push_back(cutoff_theta(2.0 * r, grid_));
    }
}

std::size_t RowProbe::radius_index(double radius) const {
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (std::abs(radii_[i] - radius) <= 1e-12 * std::max(1.0, radius)) return i;
    }
    throw std::invalid_argument("radius " + std::to_string(radius) + " is not probed");
}

DiagnosticsRow RowProbe::operator()(double t, std::span<const double> u) const {
    const double dx = grid_.dx();
    const std::size_t n = u.size();
    DiagnosticsRow row;
    row.t = t;
    double s = 0.0;
    for (double v : u) s += v * v;
    row.l2sq = s * dx;
    row.lpp = std::pow(row.l2sq, 0.5 * moment_);
    row.h1sq = h1_seminorm_sq(u, dx);

    std::vector<double> c(n);
    transform_.forward(u, c);
    for (std::size_t j = 0; j < row.coeffs.size() && j < n; ++j) row.coeffs[j] = c[j];

    row.tails.reserve(radii_.size());
    row.core_h1sq.reserve(radii_.size());
    row.cut_l2sq.reserve(radii_.size());
    std::vector<double> core(n);
    for (std::size_t k = 0; k < radii_.size(); ++k) {
        row.tails.push_back(tail_mass(u, grid_, radii_[k]));
        const auto theta = thetas_[k].values();
        double cut = 0.0, core_l2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double hi = theta[i] * u[i];
            core[i] = u[i] - hi;
            cut += hi * hi;
            core_l2 += core[i] * core[i];
        }
        row.cut_l2sq.push_back(cut * dx);
        row.core_h1sq.push_back(core_l2 * dx + h1_seminorm_sq(core, dx));
    }
    return row;
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(rows.size());
    for (const auto& r : rows) t.push_back(r.t);
    return t;
}

Trajectory simulate(const SimConfig& cfg, const Field& u0, RandomStream stream,
                    const SimOptions& opts) {
    cfg.validate();
    const Grid grid = cfg.grid();
    if (!(u0.grid() == grid)) throw std::invalid_argument("simulate: u0 grid differs from config");
    if (!u0.is_finite()) throw std::invalid_argument("simulate: u0 has non-finite entries");
    if (!(lp_norm(u0, 2.0) < cfg.N_max)) {
        throw std::invalid_argument("simulate: ||u0||_2 must be below the guard radius N_max");
    }

    const bool retain = opts.retain_states.value_or(cfg.retain_states);
    const double horizon = opts.horizon > 0.0 ? opts.horizon : cfg.T;
    const int steps = static_cast<int>(std::llround(horizon / cfg.dt));
    const auto n = static_cast<std::size_t>(cfg.n);
    const bool noisy = cfg.noise_model().trace() > 0.0;

    Stepper stepper(cfg, opts.step);
    RowProbe probe(grid, cfg.p,
                   opts.tail_radii.empty() ? default_tail_radii(cfg.L) : opts.tail_radii);

    Trajectory traj;
    traj.tail_radii = probe.radii();
    Field u = u0;
    std::vector<double> dW(n, 0.0), dW_sum(n, 0.0);

    // running dissipation integrals
    const double rate = 2.0 * cfg.k - cfg.noise_strength();
    const double decay = std::exp(-rate * cfg.dt);
    double h1_prev = h1_seminorm_sq(u.values(), grid.dx());
    double diss = 0.0, wdiss = 0.0;

    auto record = [&](double t) {
        DiagnosticsRow row = probe(t, u.values());
        row.dissipation = diss;
        row.weighted_dissipation = wdiss;
        traj.rows.push_back(std::move(row));
        if (retain && (!opts.retain_at || opts.retain_at(t))) {
            traj.states.push_back(u);
            traj.state_times.push_back(t);
        }
        if (opts.record_noise && traj.rows.size() > 1) {
            traj.noise.emplace_back(grid, dW_sum);
            std::fill(dW_sum.begin(), dW_sum.end(), 0.0);
        }
    };

    record(0.0);
    const double guard_sq = cfg.N_max * cfg.N_max;
    for (int s = 1; s <= steps; ++s) {
        const double t = s * cfg.dt;
        if (noisy) {
            stepper.draw(stream, dW);
            stepper.advance(u.values(), dW);
            if (opts.record_noise) {
                for (std::size_t i = 0; i < n; ++i) dW_sum[i] += dW[i];
            }
        } else {
            stepper.advance(u.values(), {});
        }
        const double h1 = h1_seminorm_sq(u.values(), grid.dx());
        diss += 0.5 * cfg.dt * (h1_prev + h1);
        wdiss = decay * (wdiss + 0.5 * cfg.dt * h1_prev) + 0.5 * cfg.dt * h1;
        h1_prev = h1;
        double l2sq = 0.0;
        for (double v : u.values()) l2sq += v * v;
        l2sq *= grid.dx();
        if (!std::isfinite(l2sq)) {
            throw NumericalBlowup(t, "non-finite state at t = " + std::to_string(t));
        }
        if (l2sq >= guard_sq) {
            record(t);
            traj.status = TrajectoryStatus::guard_triggered;
            traj.stop_time = t;
            break;
        }
        if (s % cfg.snapshot_stride == 0 || s == steps) record(t);
    }
    traj.final_state = u;
    return traj;
}

int evolve(Stepper& stepper, std::span<double> u, int steps, RandomStream& stream,
           double guard_radius) {
    const double dx = stepper.grid().dx();
    const bool noisy = stepper.noise().trace() > 0.0;
    std::vector<double> dW(u.size());
    const double guard_sq = guard_radius * guard_radius;
    for (int s = 1; s <= steps; ++s) {
        if (noisy) {
            stepper.draw(stream, dW);
            stepper.advance(u, dW);
        } else {
            stepper.advance(u, {});
        }
        double l2sq = 0.0;
        for (double v : u) l2sq += v * v;
        l2sq *= dx;
        if (!std::isfinite(l2sq)) throw NumericalBlowup(s * stepper.dt(), "non-finite state");
        if (l2sq >= guard_sq) return s;
    }
    return steps;
}

Field gaussian_initial(const Grid& grid, double amplitude, double width, double center) {
    return Field::sample(grid, [=](double x) {
        const double z = (x - center) / width;
        return amplitude * std::exp(-z * z);
    });
}

}  // namespace sburgers
