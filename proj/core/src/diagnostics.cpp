#include "sburgers/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sburgers {

void finalize(BoundReport& report) {
    double worst = -INFINITY;
    bool all = true;
    for (auto& r : report.rows) {
        r.margin = r.mean - r.bound;
        r.pass = r.margin <= r.tolerance;
        all = all && r.pass;
        worst = std::max(worst, r.margin - r.tolerance);
    }
    report.worst_excess = report.rows.empty() ? 0.0 : worst;
    report.pass = report.regime_ok && all;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::vector<BoundReport> moment_report(const EnsembleStats& stats, double p,
                                       const ReportOptions& opts) {
    const SimConfig& c = stats.cfg;
    const double al2 = c.noise_strength();
    const double u0p = std::pow(stats.u0_l2sq, 0.5 * p);
    if (p != c.p && p != 2.0) {
        throw std::invalid_argument("moment_report: ensemble recorded ||u||^p only for p = " +
                                    fmt(c.p) + " and p = 2");
    }
    const auto& series = (p == 2.0) ? stats.l2sq : stats.lpp;

    std::vector<BoundReport> out;
    BoundReport m;
    m.id = "moment";
    m.statement = "E||u(t)||_2^p <= ||u0||_2^p, p = " + fmt(p);
    m.regime = "a l^2 = " + fmt(al2) + " < k/(p-1) = " + fmt(c.k / (p - 1.0));
    m.regime_ok = c.bound_regime(p) && c.k > 0.0;
    m.tolerance = "3 se + " + fmt(opts.slack) + " ||u0||^p";
    for (std::size_t i = 0; i < stats.times.size(); ++i) {
        BoundRow r;
        r.t = stats.times[i];
        r.mean = series[i].mean;
        r.se = series[i].se;
        r.bound = u0p;
        r.tolerance = 3.0 * r.se + opts.slack * u0p;
        m.rows.push_back(r);
    }
    finalize(m);
    out.push_back(std::move(m));

    if (p == 2.0) {
        BoundReport d;
        d.id = "decay";
        d.statement = "E||u(t)||_2^2 <= exp(-(2k - a l^2) t) ||u0||_2^2";
        d.regime = "a l^2 = " + fmt(al2) + " < k = " + fmt(c.k);
        d.regime_ok = al2 < c.k && c.k > 0.0;
        d.tolerance = "3 se";
        const double rate = 2.0 * c.k - al2;
        for (std::size_t i = 0; i < stats.times.size(); ++i) {
            BoundRow r;
            r.t = stats.times[i];
            r.mean = stats.l2sq[i].mean;
            r.se = stats.l2sq[i].se;
            r.bound = std::exp(-rate * r.t) * stats.u0_l2sq;
            r.tolerance = 3.0 * r.se;
            d.rows.push_back(r);
        }
        finalize(d);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<BoundReport> dissipation_report(const EnsembleStats& stats,
                                            const ReportOptions& opts) {
    const SimConfig& c = stats.cfg;
    const double al2 = c.noise_strength();
    const double u0 = stats.u0_l2sq;
    const std::string regime = "a l^2 = " + fmt(al2) + " < k = " + fmt(c.k);
    const bool ok = al2 < c.k && c.k > 0.0;

    auto build = [&](std::string id, std::string statement, const std::vector<Moments>& series) {
        BoundReport rep;
        rep.id = std::move(id);
        rep.statement = std::move(statement);
        rep.regime = regime;
        rep.regime_ok = ok;
        rep.tolerance = "3 se + " + fmt(opts.slack) + " ||u0||^2";
        for (std::size_t i = 0; i < stats.times.size(); ++i) {
            BoundRow r;
            r.t = stats.times[i];
            r.mean = series[i].mean;
            r.se = series[i].se;
            r.bound = u0;
            r.tolerance = 3.0 * r.se + opts.slack * u0;
            rep.rows.push_back(r);
        }
        finalize(rep);
        return rep;
    };
    std::vector<BoundReport> out;
    out.push_back(build("dissipation", "int_0^t E||u_x||_2^2 ds <= ||u0||_2^2", stats.dissipation));
    out.push_back(build("weighted_energy",
                        "E||u(t)||^2 + 2 int_0^t e^{(2k-al^2)(s-t)} E||u_x||^2 ds <= ||u0||^2",
                        stats.energy));
    return out;
}

TailReport tail_report(const EnsembleStats& stats, double eps, double t_from) {
    if (!(eps > 0.0)) throw std::invalid_argument("tail_report: eps must be positive");
    TailReport rep;
    rep.eps = eps;
    rep.regime_ok = stats.cfg.invariant_regime() && stats.cfg.k > 0.0;
    rep.radii = stats.tail_radii;
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        double sup = 0.0, sup_mean = 0.0, when = 0.0;
        for (std::size_t i = 0; i < stats.times.size(); ++i) {
            if (stats.times[i] < t_from - 1e-12) continue;
            const Moments& m = stats.tails[k][i];
            const double v = m.mean + 3.0 * m.se;
            if (v > sup) {
                sup = v;
                when = stats.times[i];
            }
            sup_mean = std::max(sup_mean, m.mean);
        }
        rep.sup_tail.push_back(sup);
        rep.sup_mean.push_back(sup_mean);
        rep.sup_time.push_back(when);
    }
    rep.monotone = true;
    for (std::size_t k = 1; k < rep.sup_mean.size(); ++k) {
        if (rep.sup_mean[k] > rep.sup_mean[k - 1]) rep.monotone = false;
    }
    rep.achieved_min = rep.sup_tail.empty()
                           ? 0.0
                           : *std::min_element(rep.sup_tail.begin(), rep.sup_tail.end());
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        if (rep.sup_tail[k] < eps) {
            rep.N_star = rep.radii[k];
            break;
        }
    }
    rep.pass = rep.regime_ok && rep.monotone && rep.N_star.has_value();
    return rep;
}

std::vector<FellerResult> feller_sweep(const Field& u01, const std::vector<Field>& perturbations,
                                       const SimConfig& cfg, double delta, int pairs, int threads,
                                       StepOptions step) {
    cfg.validate();
    if (pairs < 1) throw std::invalid_argument("feller: need at least one pair");
    if (!(delta >= 0.0)) throw std::invalid_argument("feller: delta must be nonnegative");
    const Grid grid = cfg.grid();
    const std::size_t C = perturbations.size();
    std::vector<double> norm0(C);
    for (std::size_t c = 0; c < C; ++c) {
        require_same_grid(u01, perturbations[c]);
        norm0[c] = std::pow(lp_norm(perturbations[c], 2.0), 2);
        if (norm0[c] == 0.0) throw std::invalid_argument("feller: u01 and u02 coincide");
    }
    const int steps = static_cast<int>(std::llround(delta / cfg.dt));
    const auto n = static_cast<std::size_t>(grid.size());
    const double dx = grid.dx();
    const double guard_sq = cfg.N_max * cfg.N_max;
    const bool noisy = cfg.noise_model().trace() > 0.0;

    // ratio[i][c] and stopped-by-guard flags
    std::vector<std::vector<double>> ratio(static_cast<std::size_t>(pairs), std::vector<double>(C));
    std::vector<int> stops(static_cast<std::size_t>(pairs), 0);

    parallel_for(pairs, threads, [&](int i) {
        Stepper stepper(cfg, step);
        RandomStream stream(cfg.seed, stream_id(StreamPurpose::feller, static_cast<std::uint64_t>(i)));
        std::vector<double> base(u01.values().begin(), u01.values().end());
        std::vector<std::vector<double>> pert(C);
        for (std::size_t c = 0; c < C; ++c) {
            pert[c].assign(base.begin(), base.end());
            const auto d = perturbations[c].values();
            for (std::size_t k = 0; k < n; ++k) pert[c][k] += d[k];
        }
        std::vector<char> active(C, 1);
        std::vector<double> dW(n);
        auto l2sq = [&](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return s * dx;
        };
        auto diff_sq = [&](std::size_t c) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += (pert[c][k] - base[k]) * (pert[c][k] - base[k]);
            return s * dx;
        };
        int stopped = 0;
        for (int s = 0; s < steps; ++s) {
            if (noisy) stepper.draw(stream, dW);
            const std::span<const double> noise = noisy ? std::span<const double>(dW)
                                                        : std::span<const double>();
            stepper.advance(base, noise);
            const double b = l2sq(base);
            if (!std::isfinite(b)) throw NumericalBlowup(s * cfg.dt, "feller: non-finite state");
            const bool base_out = b >= guard_sq;
            for (std::size_t c = 0; c < C; ++c) {
                if (!active[c]) continue;
                stepper.advance(pert[c], noise);
                const double q = l2sq(pert[c]);
                if (!std::isfinite(q)) throw NumericalBlowup(s * cfg.dt, "feller: non-finite state");
                if (base_out || q >= guard_sq) {
                    ratio[static_cast<std::size_t>(i)][c] = diff_sq(c) / norm0[c];
                    active[c] = 0;
                    ++stopped;
                }
            }
            if (base_out) break;
        }
        for (std::size_t c = 0; c < C; ++c) {
            if (active[c]) ratio[static_cast<std::size_t>(i)][c] = diff_sq(c) / norm0[c];
        }
        stops[static_cast<std::size_t>(i)] = stopped;
    });

    std::vector<FellerResult> out(C);
    std::vector<double> buf(static_cast<std::size_t>(pairs));
    int total_stops = 0;
    for (int s : stops) total_stops += s;
    for (std::size_t c = 0; c < C; ++c) {
        for (int i = 0; i < pairs; ++i) buf[static_cast<std::size_t>(i)] = ratio[static_cast<std::size_t>(i)][c];
        const Moments m = moments(buf);
        out[c] = {m.mean, m.se, pairs, total_stops};
    }
    return out;
}

FellerResult feller_probe(const Field& u01, const Field& u02, const SimConfig& cfg, double delta,
                          int pairs, int threads, StepOptions step) {
    return feller_sweep(u01, {u02 - u01}, cfg, delta, pairs, threads, step).front();
}

double ratio_variation(const std::vector<FellerResult>& sweep) {
    if (sweep.empty()) throw std::invalid_argument("ratio_variation: empty sweep");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const FellerResult& r : sweep) {
        if (!std::isfinite(r.ratio) || !(r.ratio > 0.0)) return std::numeric_limits<double>::infinity();
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    return hi / lo - 1.0;
}

double weak_form_residual(const Trajectory& traj, const SimConfig& cfg, const Field& phi,
                          StepOptions step) {
    const Grid grid = phi.grid();
    const int n = grid.size();
    if (n < 5) throw std::invalid_argument("weak_form_residual: grid too small");
    for (int i : {0, 1, n - 2, n - 1}) {
        if (phi[i] != 0.0) throw std::invalid_argument("weak_form_residual: phi must vanish near the boundary");
    }
    if (traj.states.size() != traj.rows.size() || traj.states.empty()) {
        throw std::invalid_argument("weak_form_residual: trajectory must retain every row's state");
    }
    const bool noisy = cfg.noise_model().trace() > 0.0;
    if (noisy && traj.noise.size() + 1 != traj.rows.size()) {
        throw std::invalid_argument("weak_form_residual: trajectory must record noise");
    }
    for (std::size_t r = 1; r < traj.rows.size(); ++r) {
        const double h = traj.rows[r].t - traj.rows[r - 1].t;
        if (std::abs(h - cfg.dt) > 1e-6 * cfg.dt) {
            throw std::invalid_argument("weak_form_residual: needs one row per step");
        }
    }
    const Field d1 = centered_difference(phi);
    const Field d2 = second_difference(phi);
    const SigmaSpec sigma = cfg.sigma();
    const double dx = grid.dx();
    const double flux = step.convection ? 0.5 : 0.0;

    auto drift = [&](const Field& u) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            s += u[i] * d2[i] - cfg.k * u[i] * phi[i] + flux * u[i] * u[i] * d1[i];
        }
        return s * dx;
    };
    const Field& u0 = traj.states.front();
    const double base = inner(u0, phi);
    double drift_int = 0.0, noise_int = 0.0, worst = 0.0;
    double prev = drift(u0);
    for (std::size_t r = 1; r < traj.states.size(); ++r) {
        const double h = traj.rows[r].t - traj.rows[r - 1].t;
        const double cur = drift(traj.states[r]);
        drift_int += 0.5 * h * (prev + cur);
        prev = cur;
        if (noisy) {
            const Field& u = traj.states[r - 1];
            const Field& dW = traj.noise[r - 1];
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += sigma(u[i]) * phi[i] * dW[i];
            noise_int += s * dx;
        }
        const double res = inner(traj.states[r], phi) - base - drift_int - noise_int;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

Field cole_hopf_reference(const Field& u0, double t, double nu) {
    if (!(t >= 0.0)) throw std::invalid_argument("cole_hopf_reference: t must be nonnegative");
    if (!(nu > 0.0)) throw std::invalid_argument("cole_hopf_reference: nu must be positive");
    if (t == 0.0) return u0;
    const Grid& grid = u0.grid();
    const int n = grid.size();
    const double dx = grid.dx();

    // U(x_i) = int_{-L}^{x_i} u0: trapezoid from the boundary zero plus the
    // Euler-Maclaurin end correction -dx^2/12 (u0'(x_i) - u0'(-L)).
    auto val = [&](int i) { return (i < 0 || i >= n) ? 0.0 : u0[i]; };
    auto slope = [&](int i) {  // fourth-order centered difference, i in [-1, n]
        return (val(i - 2) - 8.0 * val(i - 1) + 8.0 * val(i + 1) - val(i + 2)) / (12.0 * dx);
    };
    std::vector<double> U(static_cast<std::size_t>(n));
    double acc = 0.0;
    const double left_slope = slope(-1);
    for (int i = 0; i < n; ++i) {
        acc += 0.5 * dx * (val(i - 1) + val(i));
        U[static_cast<std::size_t>(i)] = acc - dx * dx / 12.0 * (slope(i) - left_slope);
    }
    const double right_total = acc + 0.5 * dx * val(n - 1) - dx * dx / 12.0 * (slope(n) - left_slope);

    // log phi0 on an index range extended past both ends
    const double c = -0.5 / nu;
    const double width = std::sqrt(4.0 * nu * t);
    const int ext = static_cast<int>(std::ceil(40.0 * width / dx));
    auto log_phi = [&](int i) {
        if (i < 0) return 0.0;
        if (i >= n) return c * right_total;
        return c * U[static_cast<std::size_t>(i)];
    };
    // shift by the largest exponent for range safety
    double shift = 0.0;
    for (int i = 0; i < n; ++i) shift = std::max(shift, log_phi(i));
    shift = std::max(shift, log_phi(n));

    // pair nodes at distance d on both sides so the odd weight (x - y)/t is
    // applied to a difference, which vanishes exactly for symmetric phi0
    const double inv4 = 1.0 / (4.0 * nu * t);
    Field out(grid);
    for (int i = 0; i < n; ++i) {
        double num = 0.0;
        double den = std::exp(log_phi(i) - shift);
        for (int d = 1; d <= ext; ++d) {
            const double z = d * dx;
            const double g = -z * z * inv4 - shift;
            const double left = std::exp(g + log_phi(i - d));
            const double right = std::exp(g + log_phi(i + d));
            num += z / t * (left - right);
            den += left + right;
        }
        out[i] = num / den;
    }
    return out;
}

std::string render_report(const BoundReport& rep) {
    std::ostringstream o;
    o << rep.id << ": " << rep.statement << '\n'
      << "  regime " << rep.regime << (rep.regime_ok ? " (holds)" : " (VIOLATED)") << '\n'
      << "  tolerance " << rep.tolerance << '\n';
    for (const auto& r : rep.rows) {
        o << rep.id << " t=" << fmt(r.t) << " mean=" << fmt(r.mean) << " se=" << fmt(r.se)
          << " bound=" << fmt(r.bound) << " margin=" << fmt(r.margin) << " tol=" << fmt(r.tolerance)
          << (r.pass ? " ok" : " FAIL") << '\n';
    }
    o << rep.id << " worst_excess=" << fmt(rep.worst_excess) << ' '
      << (rep.pass ? "PASS" : (rep.regime_ok ? "FAIL" : "OUT-OF-REGIME")) << '\n';
    return o.str();
}

std::string render_report(const TailReport& rep) {
    std::ostringstream o;
    o << "tail: sup_t E int_{|x|>=N} u^2 dx < eps = " << fmt(rep.eps) << '\n'
      << "  regime a l^2 < 3k/7" << (rep.regime_ok ? " (holds)" : " (VIOLATED)")
      << "; 3/7 comes from p = 10/3 in the moment bound, the power left by Agmon's inequality\n";
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        o << "tail N=" << fmt(rep.radii[k]) << " sup_mean=" << fmt(rep.sup_mean[k])
          << " sup_mean+3se=" << fmt(rep.sup_tail[k]) << " at t=" << fmt(rep.sup_time[k]) << '\n';
    }
    o << "tail monotone=" << (rep.monotone ? "yes" : "no") << " N_star="
      << (rep.N_star ? fmt(*rep.N_star) : std::string("none")) << " achieved_min="
      << fmt(rep.achieved_min) << ' ' << (rep.pass ? "PASS" : "FAIL") << '\n';
    return o.str();
}

std::string report_csv(const BoundReport& rep) {
    std::ostringstream o;
    o << "t,mean,stderr,bound,margin,pass\n";
    char buf[160];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.t, r.mean, r.se,
                      r.bound, r.margin, r.pass ? 1 : 0);
        o << buf;
    }
    return o.str();
}

}  // namespace sburgers
