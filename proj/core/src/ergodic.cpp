#include "sburgers/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "sburgers/diagnostics.hpp"
#include "sburgers/sine_transform.hpp"

namespace sburgers {

const std::array<std::string, kObservableDim>& observable_names() {
    static const std::array<std::string, kObservableDim> names = {
        "l2sq", "h1sq", "tail_L4", "tail_L2", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"};
    return names;
}

ObservableVector observe(const Field& f) {
    ObservableVector v{};
    const Grid& g = f.grid();
    const double l2 = lp_norm(f, 2.0);
    v[0] = l2 * l2;
    v[1] = h1_seminorm_sq(f.values(), g.dx());
    v[2] = tail_mass(f, 0.25 * g.half_width());
    v[3] = tail_mass(f, 0.5 * g.half_width());
    std::vector<double> c(static_cast<std::size_t>(g.size()));
    SineTransform(g).forward(f.values(), c);
    for (std::size_t j = 0; j < 8 && j < c.size(); ++j) v[4 + j] = c[j];
    return v;
}

namespace {

std::size_t find_radius(const std::vector<double>& radii, double r) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (std::abs(radii[i] - r) <= 1e-12 * std::max(1.0, r)) return i;
    }
    throw std::invalid_argument("observe: diagnostics rows lack tail radius " + std::to_string(r));
}

}  // namespace

ObservableVector observe(const DiagnosticsRow& row, const std::vector<double>& radii,
                         double half_width) {
    ObservableVector v{};
    v[0] = row.l2sq;
    v[1] = row.h1sq;
    v[2] = row.tails.at(find_radius(radii, 0.25 * half_width));
    v[3] = row.tails.at(find_radius(radii, 0.5 * half_width));
    for (std::size_t j = 0; j < 8; ++j) v[4 + j] = row.coeffs[j];
    return v;
}

std::vector<double> kb_times(const SimConfig& cfg, int s, double spacing) {
    if (s < 1) throw std::invalid_argument("kb_average: s must be >= 1");
    if (cfg.T < s + 1.0 - 1e-9) {
        throw std::invalid_argument("kb_average: horizon T = " + std::to_string(cfg.T) +
                                    " is shorter than s + 1 = " + std::to_string(s + 1));
    }
    const double row_dt = cfg.dt * cfg.snapshot_stride;
    const double h = spacing > 0.0 ? spacing : row_dt;
    const double ratio = h / row_dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
        throw std::invalid_argument("kb_average: spacing must be a multiple of the row spacing");
    }
    const double start_rows = 1.0 / row_dt;
    if (std::abs(start_rows - std::round(start_rows)) > 1e-9 * start_rows) {
        throw std::invalid_argument("kb_average: t = 1 is not a row time");
    }
    const long count = std::lround(s / h);
    if (std::abs(s / h - static_cast<double>(count)) > 1e-9 * (s / h)) {
        throw std::invalid_argument("kb_average: s must be a multiple of the spacing");
    }
    const long step_rows = std::lround(ratio);
    const long first = std::lround(start_rows);
    std::vector<double> t;
    for (long q = 0; q <= count; ++q) t.push_back(static_cast<double>((first + q * step_rows) * cfg.snapshot_stride) * cfg.dt);
    return t;
}

namespace {

void append_window(EmpiricalMeasure& mu, bool& states_ok, const Trajectory& traj,
                   const SimConfig& cfg, const std::vector<double>& times) {
    const auto rows = aligned_rows(traj, times);
    for (const DiagnosticsRow* r : rows) mu.samples.push_back(observe(*r, traj.tail_radii, cfg.L));
    if (!states_ok) return;
    std::size_t k = 0;
    for (std::size_t q = 0; q < times.size(); ++q) {
        const double t = rows[q]->t;
        while (k < traj.state_times.size() &&
               traj.state_times[k] < t - 1e-9 * std::max(1.0, t)) {
            ++k;
        }
        if (k < traj.state_times.size() && std::abs(traj.state_times[k] - t) <= 1e-9 * std::max(1.0, t)) {
            mu.states.push_back(traj.states[k]);
        } else {
            states_ok = false;
            mu.states.clear();
            return;
        }
    }
}

}  // namespace

EmpiricalMeasure kb_average(const Trajectory& traj, const SimConfig& cfg, int s, double spacing) {
    const auto times = kb_times(cfg, s, spacing);
    EmpiricalMeasure mu;
    mu.window_start = 1.0;
    mu.window_end = s + 1.0;
    mu.source = "trajectory";
    bool states_ok = true;
    append_window(mu, states_ok, traj, cfg, times);
    return mu;
}

EmpiricalMeasure kb_average(const Ensemble& ensemble, int s, double spacing) {
    const auto times = kb_times(ensemble.cfg, s, spacing);
    EmpiricalMeasure mu;
    mu.window_start = 1.0;
    mu.window_end = s + 1.0;
    mu.source = "ensemble of " + std::to_string(ensemble.size());
    bool states_ok = true;
    for (const Trajectory& tr : ensemble.trajectories) {
        append_window(mu, states_ok, tr, ensemble.cfg, times);
    }
    return mu;
}

Scale pooled_scale(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    Scale sc{};
    const double count = static_cast<double>(a.samples.size() + b.samples.size());
    if (count == 0.0) throw std::invalid_argument("pooled_scale: empty measures");
    for (std::size_t c = 0; c < kObservableDim; ++c) {
        double sum = 0.0;
        for (const auto& x : a.samples) sum += x[c];
        for (const auto& x : b.samples) sum += x[c];
        const double mean = sum / count;
        double ss = 0.0;
        for (const auto& x : a.samples) ss += (x[c] - mean) * (x[c] - mean);
        for (const auto& x : b.samples) ss += (x[c] - mean) * (x[c] - mean);
        const double sd = std::sqrt(ss / count);
        sc[c] = sd > 0.0 ? sd : 1.0;
    }
    return sc;
}

namespace {

using Matrix = std::vector<ObservableVector>;

Matrix scaled(const EmpiricalMeasure& m, const Scale& scale) {
    Matrix out = m.samples;
    for (auto& x : out) {
        for (std::size_t c = 0; c < kObservableDim; ++c) x[c] /= scale[c];
    }
    return out;
}

double mean_pair_distance(const Matrix& a, const Matrix& b) {
    double total = 0.0;
    for (const auto& x : a) {
        double row = 0.0;
        for (const auto& y : b) {
            double s = 0.0;
            for (std::size_t c = 0; c < kObservableDim; ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
            row += std::sqrt(s);
        }
        total += row;
    }
    return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

// E|X - X'| over all ordered pairs including i == j, using symmetry.
double mean_self_distance(const Matrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < kObservableDim; ++c) {
                s += (a[i][c] - a[j][c]) * (a[i][c] - a[j][c]);
            }
            row += std::sqrt(s);
        }
        total += row;
    }
    const double n = static_cast<double>(a.size());
    return 2.0 * total / (n * n);
}

}  // namespace

double energy_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b, const Scale& scale) {
    if (a.samples.empty() || b.samples.empty()) {
        throw std::invalid_argument("measure_distance: empty measure");
    }
    const Matrix x = scaled(a, scale), y = scaled(b, scale);
    const double d = 2.0 * mean_pair_distance(x, y) - mean_self_distance(x) - mean_self_distance(y);
    return std::max(d, 0.0);
}

double measure_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.samples == b.samples) {
        if (a.samples.empty()) throw std::invalid_argument("measure_distance: empty measure");
        return 0.0;
    }
    // fixed argument order so that d(a, b) == d(b, a) bit for bit
    const bool swap = b.samples.size() < a.samples.size() ||
                      (b.samples.size() == a.samples.size() && b.samples < a.samples);
    const EmpiricalMeasure& x = swap ? b : a;
    const EmpiricalMeasure& y = swap ? a : b;
    return energy_distance(x, y, pooled_scale(x, y));
}

namespace {

std::vector<std::size_t> draw_indices(const SimConfig& cfg, std::uint64_t replicate, int M,
                                      std::size_t population) {
    const RandomStream rs(cfg.seed, stream_id(StreamPurpose::resample, replicate));
    std::vector<std::size_t> idx(static_cast<std::size_t>(M));
    for (int q = 0; q < M; ++q) {
        const double u = rs.uniform(static_cast<std::uint64_t>(q));
        idx[static_cast<std::size_t>(q)] =
            std::min(population - 1, static_cast<std::size_t>(u * static_cast<double>(population)));
    }
    return idx;
}

EmpiricalMeasure subsample(const EmpiricalMeasure& mu, const std::vector<std::size_t>& idx) {
    EmpiricalMeasure out;
    out.window_start = mu.window_start;
    out.window_end = mu.window_end;
    out.source = "subsample";
    for (std::size_t i : idx) out.samples.push_back(mu.samples[i]);
    return out;
}

}  // namespace

InvarianceResult invariance_check(const EmpiricalMeasure& mu, const SimConfig& cfg, double delta,
                                  int M, const InvarianceOptions& opts) {
    if (!mu.has_states()) {
        throw std::invalid_argument(
            "invariance_check: the measure carries no states (run with retain_states=true)");
    }
    if (M < 1) throw std::invalid_argument("invariance_check: M must be >= 1");
    if (!(delta >= 0.0)) throw std::invalid_argument("invariance_check: delta must be nonnegative");
    if (opts.replicates < 1) throw std::invalid_argument("invariance_check: need >= 1 replicate");
    cfg.validate();

    const std::size_t pop = mu.samples.size();
    const auto idx = draw_indices(cfg, 0, M, pop);
    const int steps = static_cast<int>(std::llround(delta / cfg.dt));

    EmpiricalMeasure pushed;
    pushed.window_start = mu.window_start + delta;
    pushed.window_end = mu.window_end + delta;
    pushed.source = "push-forward";
    pushed.samples.resize(static_cast<std::size_t>(M));
    parallel_for(M, opts.threads, [&](int q) {
        const std::size_t i = idx[static_cast<std::size_t>(q)];
        if (steps == 0) {
            pushed.samples[static_cast<std::size_t>(q)] = mu.samples[i];
            return;
        }
        Stepper stepper(cfg);
        RandomStream stream(cfg.seed,
                            stream_id(StreamPurpose::pushforward, static_cast<std::uint64_t>(q)));
        Field u = mu.states[i];
        evolve(stepper, u.values(), steps, stream, cfg.N_max);
        pushed.samples[static_cast<std::size_t>(q)] = observe(u);
    });

    InvarianceResult res;
    res.draws = M;
    res.distance = measure_distance(mu, pushed);
    for (int r = 0; r < opts.replicates; ++r) {
        const auto sub = r == 0 ? idx : draw_indices(cfg, static_cast<std::uint64_t>(r), M, pop);
        res.replicates.push_back(measure_distance(mu, subsample(mu, sub)));
    }
    double sum = 0.0;
    for (double d : res.replicates) sum += d;
    res.baseline = sum / res.replicates.size();
    res.pass = res.distance <= 2.0 * res.baseline;
    return res;
}

std::vector<double> cesaro_distances(const Ensemble& ensemble, const std::vector<int>& s_list,
                                     double spacing) {
    std::vector<double> out;
    for (int s : s_list) {
        const EmpiricalMeasure a = kb_average(ensemble, s, spacing);
        const EmpiricalMeasure b = kb_average(ensemble, 2 * s, spacing);
        out.push_back(measure_distance(a, b));
    }
    return out;
}

double tightness_c2() {
    // ||(1-theta_n)u||^2 + ||((1-theta_n)u)'||^2
    //   <= ||u||^2 + 2||u'||^2 + 2 (C/n)^2 ||u||^2 <= (1 + 2 C^2) ||u||_{H^1}^2
    return 1.0 + 2.0 * kCutoffSlopeBound * kCutoffSlopeBound;
}

TightnessReport tightness_report(const Ensemble& ensemble, const EnsembleStats& stats, int s,
                                 double eps, const std::vector<int>& m_list, double spacing) {
    if (!(eps > 0.0)) throw std::invalid_argument("tightness_report: eps must be positive");
    TightnessReport rep;
    rep.eps = eps;
    rep.s = s;
    rep.c1 = stats.u0_l2sq;
    rep.c2 = tightness_c2();

    const auto times = kb_times(ensemble.cfg, s, spacing);
    std::vector<std::vector<const DiagnosticsRow*>> rows;
    for (const Trajectory& tr : ensemble.trajectories) rows.push_back(aligned_rows(tr, times));
    const double count = static_cast<double>(rows.size() * times.size());

    double h1 = 0.0;
    for (const auto& traj_rows : rows) {
        for (const DiagnosticsRow* r : traj_rows) h1 += r->l2sq + r->h1sq;
    }
    rep.h1_average = h1 / count;
    rep.c1_ok = rep.h1_average <= 3.0 * rep.c1;

    const auto& radii = ensemble.tail_radii();
    bool all_markov = true;
    rep.pass = true;
    for (int m : m_list) {
        if (m < 1) throw std::invalid_argument("tightness_report: m must be >= 1");
        TightnessRow row;
        row.m = m;
        const double four_m = std::pow(2.0, 2 * m);
        const TailReport tail = tail_report(stats, eps / (four_m * four_m));
        row.N_star = tail.N_star;
        row.core_threshold = four_m * 3.0 * rep.c1 * rep.c2 / eps;
        row.cut_threshold = 1.0 / four_m;
        row.markov_bound = eps / four_m;
        if (rep.h1_average > 0.0) row.markov_bound += eps / (four_m * 3.0 * rep.c1) * rep.h1_average;
        if (!tail.N_star) {
            rep.pass = false;
            char buf[128];
            std::snprintf(buf, sizeof buf, "m=%d: no probed radius reaches tail %.3g (best %.3g); ", m,
                          eps / (four_m * four_m), tail.achieved_min);
            rep.message += buf;
            rep.rows.push_back(row);
            continue;
        }
        row.n_m = 2.0 * *row.N_star;
        const std::size_t k = find_radius(radii, *row.N_star);
        double core = 0.0, cut = 0.0;
        for (const auto& traj_rows : rows) {
            for (const DiagnosticsRow* r : traj_rows) {
                if (r->core_h1sq[k] > row.core_threshold) core += 1.0;
                if (r->cut_l2sq[k] > row.cut_threshold) cut += 1.0;
            }
        }
        row.p_core = core / count;
        row.p_cut = cut / count;
        row.estimate = row.p_core + row.p_cut;
        row.se = std::sqrt((row.p_core * (1.0 - row.p_core) + row.p_cut * (1.0 - row.p_cut)) / count);
        row.markov_ok = row.estimate <= row.markov_bound + 3.0 * row.se;
        all_markov = all_markov && row.markov_ok;
        rep.total += row.estimate;
        rep.rows.push_back(row);
    }
    if (!all_markov) rep.message += "Markov cross-check failed; ";
    if (!rep.c1_ok) rep.message += "time-averaged H^1 bound exceeds 3 c1; ";
    rep.pass = rep.pass && all_markov && rep.c1_ok && rep.total < eps;
    return rep;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_report(const TightnessReport& rep) {
    std::ostringstream o;
    o << "tightness: sum_m P(u(t) not in Z_m) < eps = " << fmt(rep.eps) << " over mu_" << rep.s
      << '\n'
      << "  c1 = " << fmt(rep.c1) << " c2 = " << fmt(rep.c2)
      << " time-averaged E||u||_{H^1}^2 = " << fmt(rep.h1_average) << " (<= 3 c1: "
      << (rep.c1_ok ? "yes" : "no") << ")\n";
    for (const auto& r : rep.rows) {
        o << "tightness m=" << r.m << " N_star="
          << (r.N_star ? fmt(*r.N_star) : std::string("none")) << " p_core=" << fmt(r.p_core)
          << " p_cut=" << fmt(r.p_cut) << " estimate=" << fmt(r.estimate) << " se=" << fmt(r.se)
          << " markov=" << fmt(r.markov_bound) << (r.markov_ok ? " ok" : " FAIL") << '\n';
    }
    o << "tightness total=" << fmt(rep.total) << ' ' << (rep.pass ? "PASS" : "FAIL");
    if (!rep.message.empty()) o << " (" << rep.message << ")";
    o << '\n';
    return o.str();
}

std::string measure_csv(const EmpiricalMeasure& mu) {
    std::ostringstream o;
    const auto& names = observable_names();
    for (std::size_t c = 0; c < kObservableDim; ++c) o << (c ? "," : "") << names[c];
    o << '\n';
    char buf[32];
    for (const auto& x : mu.samples) {
        for (std::size_t c = 0; c < kObservableDim; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", x[c]);
            o << (c ? "," : "") << buf;
        }
        o << '\n';
    }
    return o.str();
}

}  // namespace sburgers
