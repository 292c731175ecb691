#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sburgers/config.hpp"
#include "sburgers/ensemble.hpp"
#include "sburgers/grid.hpp"
#include "sburgers/integrator.hpp"

namespace sburgers {

/// One sampled time of an inequality check: pass iff margin <= tolerance,
/// where margin = mean - bound.
struct BoundRow {
    double t = 0.0;
    double mean = 0.0;
    double se = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct BoundReport {
    std::string id;          // short name of the inequality
    std::string statement;   // the inequality being checked
    std::string regime;      // its hypothesis, e.g. "a l^2 < k/(p-1)"
    bool regime_ok = false;
    std::string tolerance;   // how tolerances were formed
    std::vector<BoundRow> rows;
    double worst_excess = 0.0;  // max over rows of margin - tolerance
    bool pass = false;          // never true when !regime_ok
};

/// Fills worst_excess and pass from rows and regime_ok.
void finalize(BoundReport& report);

struct ReportOptions {
    double slack = 1e-2;  // discretization slack, relative to the initial-data scale
};

/// Uniform moment bound mean ||u(t)||^p <= ||u0||^p, and for p = 2 also the
/// exponential decay mean ||u(t)||^2 <= e^{-(2k - a l^2) t} ||u0||^2.
std::vector<BoundReport> moment_report(const EnsembleStats& stats, double p,
                                       const ReportOptions& opts = {});

/// int_0^t mean ||u_x||^2 ds <= ||u0||^2 and the weighted energy
/// mean[ ||u(t)||^2 + 2 int_0^t e^{(2k - a l^2)(s - t)} ||u_x(s)||^2 ds ] <= ||u0||^2.
std::vector<BoundReport> dissipation_report(const EnsembleStats& stats,
                                            const ReportOptions& opts = {});

struct TailReport {
    double eps = 0.0;
    bool regime_ok = false;                 // a l^2 < 3k/7
    std::vector<double> radii;
    std::vector<double> sup_mean;           // sup_t mean tail per radius
    std::vector<double> sup_tail;           // sup_t (mean + 3 se) per radius
    std::vector<double> sup_time;           // time attaining the sup
    std::optional<double> N_star;           // smallest radius with sup_tail < eps
    double achieved_min = 0.0;
    bool monotone = false;                  // sup_mean nonincreasing in N
    bool pass = false;
};

/// Smallest probed radius whose worst-time tail mass (mean + 3 se) is below
/// eps. Times before t_from are ignored.
TailReport tail_report(const EnsembleStats& stats, double eps, double t_from = 0.0);

struct FellerResult {
    double ratio = 0.0;  // mean ||u1(D) - u2(D)||^2 / ||u01 - u02||^2
    double se = 0.0;
    int pairs = 0;
    int guard_stops = 0;
};

/// Coupled pairs driven by the same noise (stream (feller, i)), each stopped
/// when either member reaches the guard radius cfg.N_max.
FellerResult feller_probe(const Field& u01, const Field& u02, const SimConfig& cfg, double delta,
                          int pairs, int threads = 0, StepOptions step = {});

/// Several perturbations of one base datum sharing noise per pair index:
/// ratios[c] for u02 = u01 + perturbations[c]. Equivalent to calling
/// feller_probe per perturbation but evolves the base only once per pair.
std::vector<FellerResult> feller_sweep(const Field& u01, const std::vector<Field>& perturbations,
                                       const SimConfig& cfg, double delta, int pairs,
                                       int threads = 0, StepOptions step = {});

/// max ratio / min ratio - 1 over a sweep; infinity if some ratio is 0 or
/// not finite.
double ratio_variation(const std::vector<FellerResult>& sweep);

/// Largest absolute residual over recorded times of the weak identity
///   <u(t), phi> - <u0, phi> - int_0^t [ <u, phi''> - k <u, phi> + (1/2) <u^2, phi'> ] ds
///     - int_0^t <sigma(u), phi> dW(s)
/// using the retained states (trapezoid in time) and the recorded noise sums
/// (left endpoint). Requires one row per step, retained states and recorded
/// noise. phi'' and phi' are centered differences of phi. With
/// step.convection off the flux term is dropped, matching a run made with
/// the same options.
double weak_form_residual(const Trajectory& traj, const SimConfig& cfg, const Field& phi,
                          StepOptions step = {});

/// Cole-Hopf solution of u_t = nu u_xx - u u_x (free space, k = 0, no noise):
///   u(t, x) = int (x - y)/t G phi0 dy / int G phi0 dy,
///   phi0(y) = exp(-(1/(2 nu)) int_{-inf}^y u0),  G = exp(-(x - y)^2 / (4 nu t)),
/// by rectangle quadrature on the grid nodes, with phi0 extended by its
/// boundary values outside [-L, L]. t = 0 returns u0.
Field cole_hopf_reference(const Field& u0, double t, double nu = 1.0);

/// Text rendering, one line per (inequality, time).
std::string render_report(const BoundReport& report);
std::string render_report(const TailReport& report);
/// CSV with columns t,mean,stderr,bound,margin,pass.
std::string report_csv(const BoundReport& report);

}  // namespace sburgers
