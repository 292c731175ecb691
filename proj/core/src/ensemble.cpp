#include "sburgers/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sburgers {

int resolve_threads(int requested, int tasks) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, std::max(1, tasks));
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (count <= 0) return;
    const int workers = resolve_threads(threads, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            if (stop.load()) return;
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                stop = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

const std::vector<double>& Ensemble::tail_radii() const {
    if (trajectories.empty()) throw std::logic_error("empty ensemble");
    return trajectories.front().tail_radii;
}

Ensemble run_ensemble(const SimConfig& cfg, const Field& u0, const EnsembleOptions& opts) {
    cfg.validate();
    Ensemble e{cfg, u0, std::vector<Trajectory>(static_cast<std::size_t>(cfg.M))};
    parallel_for(cfg.M, opts.threads, [&](int i) {
        RandomStream stream(cfg.seed, stream_id(opts.purpose, static_cast<std::uint64_t>(i)));
        e.trajectories[static_cast<std::size_t>(i)] = simulate(cfg, u0, stream, opts.sim);
    });
    return e;
}

Moments moments(std::vector<double> values) {
    Moments m;
    if (values.empty()) return m;
    // summing in sorted order makes the result independent of trajectory order
    std::sort(values.begin(), values.end());
    const double count = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - m.mean) * (v - m.mean);
        m.se = std::sqrt(ss / (count - 1.0) / count);
    }
    return m;
}

namespace {

std::vector<double> nominal_times(const SimConfig& cfg) {
    std::vector<double> t;
    const int steps = cfg.steps();
    for (int s = 0; s <= steps; s += cfg.snapshot_stride) t.push_back(s * cfg.dt);
    if (steps % cfg.snapshot_stride != 0) t.push_back(steps * cfg.dt);
    return t;
}

}  // namespace

std::vector<const DiagnosticsRow*> aligned_rows(const Trajectory& traj,
                                               const std::vector<double>& times) {
    if (traj.rows.empty()) throw std::invalid_argument("trajectory has no rows");
    std::vector<const DiagnosticsRow*> out;
    out.reserve(times.size());
    std::size_t r = 0;
    for (double t : times) {
        const double tol = 1e-9 * std::max(1.0, std::abs(t));
        while (r + 1 < traj.rows.size() && traj.rows[r].t < t - tol) ++r;
        const DiagnosticsRow& row = traj.rows[r];
        if (std::abs(row.t - t) <= tol) {
            out.push_back(&row);
        } else if (traj.status == TrajectoryStatus::guard_triggered && r + 1 == traj.rows.size() &&
                   row.t < t) {
            out.push_back(&row);
        } else {
            throw std::invalid_argument("trajectory has no row at t = " + std::to_string(t));
        }
    }
    return out;
}

EnsembleStats ensemble_stats(const Ensemble& ensemble) {
    if (ensemble.trajectories.empty()) throw std::invalid_argument("ensemble_stats: empty ensemble");
    EnsembleStats st;
    st.cfg = ensemble.cfg;
    st.M = ensemble.size();
    st.u0_l2sq = std::pow(lp_norm(ensemble.u0, 2.0), 2);
    st.times = nominal_times(ensemble.cfg);
    st.tail_radii = ensemble.tail_radii();

    std::vector<std::vector<const DiagnosticsRow*>> rows;
    rows.reserve(ensemble.trajectories.size());
    for (const Trajectory& tr : ensemble.trajectories) {
        if (tr.tail_radii != st.tail_radii) {
            throw std::invalid_argument("ensemble_stats: trajectories use different tail radii");
        }
        if (tr.status == TrajectoryStatus::guard_triggered) ++st.guard_stops;
        rows.push_back(aligned_rows(tr, st.times));
    }

    const std::size_t M = rows.size();
    std::vector<double> buf(M);
    auto collect = [&](std::size_t ti, auto&& get) {
        for (std::size_t i = 0; i < M; ++i) buf[i] = get(*rows[i][ti]);
        return moments(buf);
    };
    st.tails.assign(st.tail_radii.size(), {});
    for (std::size_t ti = 0; ti < st.times.size(); ++ti) {
        st.l2sq.push_back(collect(ti, [](const DiagnosticsRow& r) { return r.l2sq; }));
        st.lpp.push_back(collect(ti, [](const DiagnosticsRow& r) { return r.lpp; }));
        st.h1sq.push_back(collect(ti, [](const DiagnosticsRow& r) { return r.h1sq; }));
        st.dissipation.push_back(collect(ti, [](const DiagnosticsRow& r) { return r.dissipation; }));
        st.energy.push_back(collect(ti, [](const DiagnosticsRow& r) {
            return r.l2sq + 2.0 * r.weighted_dissipation;
        }));
        for (std::size_t k = 0; k < st.tail_radii.size(); ++k) {
            st.tails[k].push_back(collect(ti, [k](const DiagnosticsRow& r) { return r.tails[k]; }));
        }
    }
    return st;
}

}  // namespace sburgers
