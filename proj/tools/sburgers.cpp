// sburgers: command-line driver for the damped stochastic Burgers experiments.
//
// Exit codes: 0 ok, 1 a report failed, 2 usage or configuration error,
// 3 runtime error (numerical blow-up, I/O).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/diagnostics.hpp"
#include "sburgers/ensemble.hpp"
#include "sburgers/ergodic.hpp"
#include "sburgers/heat.hpp"
#include "sburgers/integrator.hpp"
#include "sburgers/io.hpp"
#include "sburgers/picard.hpp"

namespace fs = std::filesystem;
using namespace sburgers;

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kRuntime = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Common {
    std::string config;
    std::string out = "runs";
    int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("config", c.config, "key=value configuration file")->required();
    cmd->add_option("--out", c.out, "parent directory for run directories")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (0: hardware concurrency)")
        ->capture_default_str();
}

SimConfig load(const Common& c) {
    try {
        SimConfig cfg = load_config(c.config);
        for (const auto& w : regime_warnings(cfg)) std::cerr << "warning: " << w << '\n';
        return cfg;
    } catch (const std::exception& e) {
        throw UsageError(c.config + ": " + e.what());
    }
}

void print_constants(const SimConfig& cfg) {
    const DerivedConstants d = derived_constants(cfg);
    std::cout << "a = " << short_num(d.a) << ", a l^2 = " << short_num(d.al2) << '\n'
              << "moment regime a l^2 < k/(p-1) = " << short_num(d.moment_limit) << ": "
              << (d.bound_regime ? "holds" : "violated") << '\n'
              << "invariant regime a l^2 < 3k/7 = " << short_num(d.invariant_limit) << ": "
              << (d.invariant_regime ? "holds" : "violated") << '\n';
}

// One directory per run, named by the manifest key. The manifest is written
// last, so a directory without one is an incomplete run.
class RunDir {
public:
    RunDir(std::string command, std::map<std::string, std::string> args, const SimConfig& cfg,
           const std::string& parent) {
        manifest_.command = std::move(command);
        manifest_.args = std::move(args);
        manifest_.cfg = cfg;
        manifest_.version = library_version();
        root_ = fs::path(parent) / (manifest_.command + "-" + manifest_.key());
        fs::create_directories(root_);
        fs::remove(root_ / "manifest.json");
    }

    const fs::path& root() const { return root_; }

    void text(const std::string& rel, const std::string& body) {
        write_text(root_ / rel, body);
        manifest_.outputs.push_back(rel);
    }

    void snapshot(const std::string& rel, const Field& u, double t) {
        fs::create_directories((root_ / rel).parent_path());
        write_snapshot(root_ / rel, u, t);
        manifest_.outputs.push_back(rel);
    }

    void commit() {
        write_text(root_ / "manifest.json", manifest_.to_json());
        std::cout << "run directory: " << root_.string() << '\n';
    }

private:
    RunManifest manifest_;
    fs::path root_;
};

std::string indexed(const char* prefix, int i, const char* suffix) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%04d%s", prefix, i, suffix);
    return buf;
}

Ensemble ensemble_for(const SimConfig& cfg, int threads, SimOptions sim = {}) {
    EnsembleOptions opts;
    opts.threads = threads;
    opts.sim = std::move(sim);
    return run_ensemble(cfg, gaussian_initial(cfg.grid()), opts);
}

std::string summary_csv(const EnsembleStats& st) {
    std::ostringstream o;
    o << "t,l2sq,l2sq_se,h1sq,h1sq_se,dissipation,dissipation_se,energy,energy_se\n";
    for (std::size_t i = 0; i < st.times.size(); ++i) {
        o << num(st.times[i]) << ',' << num(st.l2sq[i].mean) << ',' << num(st.l2sq[i].se) << ','
          << num(st.h1sq[i].mean) << ',' << num(st.h1sq[i].se) << ','
          << num(st.dissipation[i].mean) << ',' << num(st.dissipation[i].se) << ','
          << num(st.energy[i].mean) << ',' << num(st.energy[i].se) << '\n';
    }
    return o.str();
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const Common& c) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    RunDir run("simulate", {}, cfg, c.out);
    const Ensemble e = ensemble_for(cfg, c.threads);
    for (int i = 0; i < e.size(); ++i) {
        const Trajectory& tr = e.trajectories[static_cast<std::size_t>(i)];
        run.text(indexed("trajectories/traj_", i, ".csv"), timeseries_csv(tr, cfg.L));
        run.snapshot(indexed("snapshots/final_", i, ".bin"), *tr.final_state, tr.rows.back().t);
        for (std::size_t s = 0; s < tr.states.size(); ++s) {
            run.snapshot(indexed("snapshots/traj_", i, "/") + indexed("row_", static_cast<int>(s), ".bin"),
                         tr.states[s], tr.state_times[s]);
        }
    }
    const EnsembleStats st = ensemble_stats(e);
    run.text("summary.csv", summary_csv(st));
    std::cout << "trajectories " << st.M << ", guard stops " << st.guard_stops << '\n';
    run.commit();
    return kOk;
}

// ---- bounds ----------------------------------------------------------------

int verdict(bool pass, bool regime_ok) {
    return pass || !regime_ok ? kOk : kFailed;
}

int cmd_bounds(const Common& c) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    RunDir run("bounds", {}, cfg, c.out);
    const EnsembleStats st = ensemble_stats(ensemble_for(cfg, c.threads));
    std::vector<BoundReport> reports = moment_report(st, cfg.p);
    if (cfg.p != 2.0) {
        for (auto& r : moment_report(st, 2.0)) reports.push_back(std::move(r));
    }
    for (auto& r : dissipation_report(st)) reports.push_back(std::move(r));

    std::string text;
    int code = kOk;
    for (const BoundReport& r : reports) {
        text += render_report(r);
        run.text(r.id + ".csv", report_csv(r));
        code = std::max(code, verdict(r.pass, r.regime_ok));
    }
    std::cout << text;
    run.text("bounds.txt", text);
    run.text("summary.csv", summary_csv(st));
    run.commit();
    return code;
}

// ---- tail ------------------------------------------------------------------

int cmd_tail(const Common& c, double eps) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    RunDir run("tail", {{"eps", num(eps)}}, cfg, c.out);
    const EnsembleStats st = ensemble_stats(ensemble_for(cfg, c.threads));
    const TailReport rep = tail_report(st, eps);
    std::ostringstream csv;
    csv << "radius,sup_mean,sup_mean_3se,sup_time\n";
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        csv << num(rep.radii[k]) << ',' << num(rep.sup_mean[k]) << ',' << num(rep.sup_tail[k]) << ','
            << num(rep.sup_time[k]) << '\n';
    }
    std::string text = render_report(rep);
    if (!rep.regime_ok) text += "tail OUT-OF-REGIME: a l^2 >= 3k/7, no tail estimate is claimed\n";
    std::cout << text;
    run.text("tail.txt", text);
    run.text("tail.csv", csv.str());
    run.commit();
    return verdict(rep.pass, rep.regime_ok);
}

// ---- picard ----------------------------------------------------------------

struct PicardArgs {
    double N = 5.0;
    double lambda = 1e3;
    int iters = 8;
    int pairs = 50;
    double horizon = kPicardHorizon;
    double amplitude = 1.0;
};

std::string residual_lines(const char* label, const std::vector<double>& r) {
    std::ostringstream o;
    for (std::size_t m = 0; m < r.size(); ++m) o << label << ',' << m << ',' << num(r[m]) << '\n';
    return o.str();
}

int cmd_picard(const Common& c, const PicardArgs& a) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    RunDir run("picard",
               {{"N", num(a.N)}, {"lambda", num(a.lambda)}, {"iters", std::to_string(a.iters)},
                {"pairs", std::to_string(a.pairs)}, {"horizon", num(a.horizon)},
                {"amplitude", num(a.amplitude)}},
               cfg, c.out);
    const Grid grid = cfg.grid();
    const Field u0 = gaussian_initial(grid);
    const int K = static_cast<int>(std::lround(a.horizon / cfg.dt));

    // deterministic: noise off, compared with the integrator
    SimConfig det = cfg;
    det.a0 = 0.0;
    const PicardResult dres = picard_solve(u0, det, a.N, a.iters, a.lambda, {}, a.horizon);
    SimOptions sim;
    sim.horizon = a.horizon;
    const Trajectory ref = simulate(det, u0, RandomStream(cfg.seed, stream_id(StreamPurpose::picard, 0)), sim);
    const Field& last = dres.solution.values.back();
    const double mismatch = lp_norm(last - *ref.final_state, 2.0) / lp_norm(*ref.final_state, 2.0);

    // stochastic: one noise path shared by the iteration and the pair probes
    RandomStream noise(cfg.seed, stream_id(StreamPurpose::picard, 0));
    const std::vector<Field> dW = noise_path(cfg, K, noise);
    const PicardResult sres = picard_solve(u0, cfg, a.N, a.iters, a.lambda, dW, a.horizon);

    std::vector<double> factors(static_cast<std::size_t>(a.pairs));
    parallel_for(a.pairs, c.threads, [&](int q) {
        RandomStream sa(cfg.seed, stream_id(StreamPurpose::picard, 1 + 2 * static_cast<std::uint64_t>(q)));
        RandomStream sb(cfg.seed, stream_id(StreamPurpose::picard, 2 + 2 * static_cast<std::uint64_t>(q)));
        const PathFunction u = random_path(u0, cfg, a.horizon, dW, sa, a.amplitude);
        const PathFunction v = random_path(u0, cfg, a.horizon, dW, sb, a.amplitude);
        factors[static_cast<std::size_t>(q)] = contraction_factor(u, v, cfg, a.N, a.lambda);
    });
    int below = 0;
    for (double f : factors) below += f < 1.0;
    const double fraction = static_cast<double>(below) / a.pairs;
    const double det_ratio = max_residual_ratio(dres.residuals);
    const double sto_ratio = max_residual_ratio(sres.residuals);

    const bool contraction_ok = fraction >= 0.95;
    const bool geometric_ok = !dres.diverged && !sres.diverged && det_ratio < 1.0 && sto_ratio < 1.0;
    const bool match_ok = mismatch <= 1e-3;
    std::ostringstream o;
    o << "picard: N=" << short_num(a.N) << " lambda=" << short_num(a.lambda)
      << " horizon=" << short_num(a.horizon) << " iters=" << a.iters << '\n'
      << "picard contraction factor < 1 on " << below << "/" << a.pairs << " pairs "
      << (contraction_ok ? "ok" : "FAIL") << " (need 95%)\n"
      << "picard residual ratio max deterministic=" << short_num(det_ratio)
      << " stochastic=" << short_num(sto_ratio) << ' ' << (geometric_ok ? "ok" : "FAIL") << '\n'
      << "picard terminal iterate vs integrator rel L2=" << short_num(mismatch) << ' '
      << (match_ok ? "ok" : "FAIL") << " (tol 1e-3)\n";
    const bool pass = contraction_ok && geometric_ok && match_ok;
    o << "picard " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << o.str();

    std::ostringstream fcsv;
    fcsv << "pair,factor\n";
    for (std::size_t q = 0; q < factors.size(); ++q) fcsv << q << ',' << num(factors[q]) << '\n';
    run.text("picard.txt", o.str());
    run.text("residuals.csv", "path,iteration,residual\n" + residual_lines("deterministic", dres.residuals) +
                                  residual_lines("stochastic", sres.residuals));
    run.text("contraction.csv", fcsv.str());
    run.commit();
    return pass ? kOk : kFailed;
}

// ---- feller ----------------------------------------------------------------

struct FellerArgs {
    double delta = 1.0;
    int pairs = 0;  // 0: cfg.M
    int levels = 10;
    double scale = 0.1;
};

// Odd bump x exp(-x^2) normalized to unit L2 norm.
Field perturbation_direction(const Grid& grid) {
    Field d(grid);
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        d[i] = x * std::exp(-x * x);
    }
    return (1.0 / lp_norm(d, 2.0)) * d;
}

int cmd_feller(const Common& c, const FellerArgs& a) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    if (a.levels < 2) throw UsageError("feller: --levels must be at least 2");
    const int pairs = a.pairs > 0 ? a.pairs : cfg.M;
    RunDir run("feller",
               {{"delta", num(a.delta)}, {"pairs", std::to_string(pairs)},
                {"levels", std::to_string(a.levels)}, {"scale", num(a.scale)}},
               cfg, c.out);
    const Grid grid = cfg.grid();
    const Field u01 = gaussian_initial(grid);
    const Field dir = perturbation_direction(grid);
    std::vector<Field> pert;
    std::vector<double> sizes;
    for (int lv = 0; lv < a.levels; ++lv) {
        sizes.push_back(std::ldexp(a.scale, -lv));
        pert.push_back(sizes.back() * dir);
    }
    const auto res = feller_sweep(u01, pert, cfg, a.delta, pairs, c.threads);
    const double variation = ratio_variation(res);
    const bool pass = variation < 0.5;

    std::ostringstream o, csv;
    csv << "perturbation,ratio,stderr,pairs,guard_stops\n";
    o << "feller: Delta=" << short_num(a.delta) << " pairs=" << pairs << '\n';
    for (std::size_t i = 0; i < res.size(); ++i) {
        o << "feller |u01-u02|=" << short_num(sizes[i]) << " R=" << short_num(res[i].ratio)
          << " se=" << short_num(res[i].se) << " guard_stops=" << res[i].guard_stops << '\n';
        csv << num(sizes[i]) << ',' << num(res[i].ratio) << ',' << num(res[i].se) << ','
            << res[i].pairs << ',' << res[i].guard_stops << '\n';
    }
    o << "feller variation max/min-1=" << short_num(variation) << " (limit 0.5) "
      << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << o.str();
    run.text("feller.txt", o.str());
    run.text("feller.csv", csv.str());
    run.commit();
    return pass ? kOk : kFailed;
}

// ---- invariant -------------------------------------------------------------

struct InvariantArgs {
    int s = 16;
    double eps = 0.1;
    double spacing = 0.5;
    double delta = 1.0;
    int draws = 0;  // 0: cfg.M
    int m_max = 6;
};

int cmd_invariant(const Common& c, const InvariantArgs& a) {
    const SimConfig cfg = load(c);
    print_constants(cfg);
    if (!cfg.invariant_regime()) {
        const DerivedConstants d = derived_constants(cfg);
        throw UsageError("invariant: a l^2 = " + short_num(d.al2) + " is not below 3k/7 = " +
                         short_num(d.invariant_limit) +
                         "; the existence of an invariant measure is only established for a l^2 < 3k/7");
    }
    if (a.s < 4 || a.s % 4 != 0) throw UsageError("invariant: --s must be a positive multiple of 4");
    if (cfg.T < 2.0 * a.s + 1.0) {
        throw UsageError("invariant: T must be at least 2s + 1 = " + short_num(2.0 * a.s + 1.0));
    }
    if (a.m_max < 1) throw UsageError("invariant: --m-max must be >= 1");
    const int draws = a.draws > 0 ? a.draws : cfg.M;
    RunDir run("invariant",
               {{"s", std::to_string(a.s)}, {"eps", num(a.eps)}, {"spacing", num(a.spacing)},
                {"delta", num(a.delta)}, {"draws", std::to_string(draws)},
                {"m_max", std::to_string(a.m_max)}},
               cfg, c.out);

    // retain only the states behind mu_s
    const auto window = kb_times(cfg, a.s, a.spacing);
    SimOptions sim;
    sim.retain_states = true;
    sim.retain_at = [&window](double t) {
        for (double w : window) {
            if (std::abs(t - w) <= 1e-9 * std::max(1.0, w)) return true;
        }
        return false;
    };
    const Ensemble e = ensemble_for(cfg, c.threads, sim);
    const EnsembleStats st = ensemble_stats(e);

    const std::vector<int> s_list{a.s / 4, a.s / 2, a.s};
    const std::vector<double> dist = cesaro_distances(e, s_list, a.spacing);
    bool decreasing = true;
    for (std::size_t i = 1; i < dist.size(); ++i) decreasing = decreasing && dist[i] < dist[i - 1];

    const EmpiricalMeasure mu = kb_average(e, a.s, a.spacing);
    InvarianceOptions iopts;
    iopts.threads = c.threads;
    const InvarianceResult inv = invariance_check(mu, cfg, a.delta, draws, iopts);

    std::vector<int> m_list;
    for (int m = 1; m <= a.m_max; ++m) m_list.push_back(m);
    const TightnessReport tight = tightness_report(e, st, a.s, a.eps, m_list, a.spacing);

    std::ostringstream o, ccsv, icsv;
    ccsv << "s,distance_s_2s\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        o << "cesaro d(mu_" << s_list[i] << ", mu_" << 2 * s_list[i] << ")=" << short_num(dist[i]) << '\n';
        ccsv << s_list[i] << ',' << num(dist[i]) << '\n';
    }
    o << "cesaro strictly decreasing " << (decreasing ? "ok" : "FAIL") << '\n'
      << "invariance Delta=" << short_num(a.delta) << " draws=" << inv.draws
      << " distance=" << short_num(inv.distance) << " baseline=" << short_num(inv.baseline)
      << " (limit 2x) " << (inv.pass ? "ok" : "FAIL") << '\n'
      << render_report(tight);
    icsv << "replicate,distance\n";
    for (std::size_t r = 0; r < inv.replicates.size(); ++r) icsv << r << ',' << num(inv.replicates[r]) << '\n';
    icsv << "pushforward," << num(inv.distance) << '\n';
    const bool pass = decreasing && inv.pass && tight.pass;
    o << "invariant " << (pass ? "PASS" : "FAIL") << '\n';
    std::cout << o.str();

    run.text("invariant.txt", o.str());
    run.text("cesaro.csv", ccsv.str());
    run.text("invariance.csv", icsv.str());
    run.text("mu_s.csv", measure_csv(mu));
    run.commit();
    return pass ? kOk : kFailed;
}

// ---- kernel-check ----------------------------------------------------------

int cmd_kernel_check(double L, int n, const std::vector<double>& times) {
    const Grid grid = Grid::make(L, n);
    std::printf("%-8s %-22s %-22s %-22s %-22s\n", "t", "mass", "l2sq", "(8 pi t)^-1/2", "(2 pi t)^-1/2");
    for (double t : times) {
        const KernelCheck kc = kernel_checks(grid, t);
        std::printf("%-8.4g %-22.15g %-22.15g %-22.15g %-22.15g\n", t, kc.mass, kc.l2sq,
                    1.0 / std::sqrt(8.0 * std::numbers::pi * t), 1.0 / std::sqrt(2.0 * std::numbers::pi * t));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped stochastic Burgers equation on a truncated line: simulation and checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    Common common;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the ensemble and write time series and snapshots");
    add_common(simulate_cmd, common);

    auto* bounds_cmd = app.add_subcommand("bounds", "moment and dissipation bounds");
    add_common(bounds_cmd, common);

    double tail_eps = 1e-3;
    auto* tail_cmd = app.add_subcommand("tail", "uniform tail estimate");
    add_common(tail_cmd, common);
    tail_cmd->add_option("--eps", tail_eps, "tail mass threshold")->capture_default_str();

    PicardArgs pa;
    auto* picard_cmd = app.add_subcommand("picard", "truncated Picard iteration and contraction factors");
    add_common(picard_cmd, common);
    picard_cmd->add_option("--N", pa.N, "truncation radius")->capture_default_str();
    picard_cmd->add_option("--lambda", pa.lambda, "weight of the exponential norm")->capture_default_str();
    picard_cmd->add_option("--iters", pa.iters, "Picard iterations")->capture_default_str();
    picard_cmd->add_option("--pairs", pa.pairs, "random path pairs")->capture_default_str();
    picard_cmd->add_option("--horizon", pa.horizon, "local time horizon")->capture_default_str();
    picard_cmd->add_option("--amplitude", pa.amplitude, "random path amplitude")->capture_default_str();

    FellerArgs fa;
    auto* feller_cmd = app.add_subcommand("feller", "coupled-pair continuity probe");
    add_common(feller_cmd, common);
    feller_cmd->add_option("--delta", fa.delta, "evolution time")->capture_default_str();
    feller_cmd->add_option("--pairs", fa.pairs, "coupled pairs (default M)");
    feller_cmd->add_option("--levels", fa.levels, "number of halvings of the perturbation")->capture_default_str();
    feller_cmd->add_option("--scale", fa.scale, "L2 size of the largest perturbation")->capture_default_str();

    InvariantArgs ia;
    auto* invariant_cmd = app.add_subcommand("invariant", "time averages, invariance and tightness");
    add_common(invariant_cmd, common);
    invariant_cmd->add_option("--s", ia.s, "averaging length")->capture_default_str();
    invariant_cmd->add_option("--eps", ia.eps, "tightness level")->capture_default_str();
    invariant_cmd->add_option("--spacing", ia.spacing, "sample spacing in time")->capture_default_str();
    invariant_cmd->add_option("--delta", ia.delta, "push-forward time")->capture_default_str();
    invariant_cmd->add_option("--draws", ia.draws, "push-forward sample size (default M)");
    invariant_cmd->add_option("--m-max", ia.m_max, "largest tightness level m")->capture_default_str();

    double kc_L = 32.0;
    int kc_n = 2047;
    std::vector<double> kc_t{0.1, 1.0, 4.0};
    auto* kernel_cmd = app.add_subcommand("kernel-check", "heat kernel mass and L2 identities");
    kernel_cmd->add_option("--L", kc_L, "half width")->capture_default_str();
    kernel_cmd->add_option("--n", kc_n, "interior nodes")->capture_default_str();
    kernel_cmd->add_option("--t", kc_t, "times")->delimiter(',')->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate_cmd) return cmd_simulate(common);
        if (*bounds_cmd) return cmd_bounds(common);
        if (*tail_cmd) return cmd_tail(common, tail_eps);
        if (*picard_cmd) return cmd_picard(common, pa);
        if (*feller_cmd) return cmd_feller(common, fa);
        if (*invariant_cmd) return cmd_invariant(common, ia);
        if (*kernel_cmd) return cmd_kernel_check(kc_L, kc_n, kc_t);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalBlowup& e) {
        std::cerr << "numerical blow-up at t = " << e.time() << ": " << e.what() << '\n';
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
