#pragma once

#include <functional>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/integrator.hpp"

namespace sburgers {

/// Worker count for `requested` (0 means hardware concurrency), never more
/// than `tasks` and never less than 1.
int resolve_threads(int requested, int tasks);

/// Runs body(i) for i in [0, count) on `threads` workers. Indices are handed
/// out dynamically, so bodies must write only to slot i of their outputs.
/// The first exception thrown by any body is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

struct EnsembleOptions {
    int threads = 0;
    SimOptions sim;
    StreamPurpose purpose = StreamPurpose::ensemble;
};

/// M independent trajectories from the same u0. Trajectory i uses stream
/// (purpose, i) under cfg.seed, so the result is independent of `threads`.
struct Ensemble {
    SimConfig cfg;
    Field u0;
    std::vector<Trajectory> trajectories;

    int size() const { return static_cast<int>(trajectories.size()); }
    const std::vector<double>& tail_radii() const;
};

Ensemble run_ensemble(const SimConfig& cfg, const Field& u0, const EnsembleOptions& opts = {});

/// Mean and standard error of one quantity across trajectories.
struct Moments {
    double mean = 0.0;
    double se = 0.0;  // standard error
};

/// Sample mean and standard error (sample sd / sqrt(M)); stderr is 0 for a
/// single value. Values are summed in sorted order, so the result does not
/// depend on their order.
Moments moments(std::vector<double> values);

/// Per-time cross-trajectory statistics. A trajectory stopped by the guard
/// contributes its last row at every later time (the stopped process).
struct EnsembleStats {
    SimConfig cfg;
    int M = 0;
    double u0_l2sq = 0.0;
    std::vector<double> times;
    std::vector<double> tail_radii;
    std::vector<Moments> l2sq, lpp, h1sq;
    std::vector<Moments> dissipation;  // int_0^t ||u_x||^2
    std::vector<Moments> energy;       // ||u||^2 + 2 int_0^t e^{(2k-al^2)(s-t)} ||u_x||^2
    std::vector<std::vector<Moments>> tails;  // [radius][time]
    int guard_stops = 0;
};

/// Rows of trajectory `traj` aligned to `times`, padding a guard-stopped
/// trajectory with its final row.
std::vector<const DiagnosticsRow*> aligned_rows(const Trajectory& traj,
                                               const std::vector<double>& times);

EnsembleStats ensemble_stats(const Ensemble& ensemble);

}  // namespace sburgers
