#include "sburgers/picard.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sburgers/integrator.hpp"
#include "sburgers/noise.hpp"

namespace sburgers {

Field pi_n(const Field& f, double N, double p) {
    if (!(N > 0.0)) throw std::invalid_argument("pi_n: N must be positive");
    const double norm = lp_norm(f, p);
    if (norm <= N) return f;
    // nudge the factor down until the rounded result lies in the ball, so a
    // second projection is the identity
    double c = N / norm;
    Field out = c * f;
    while (lp_norm(out, p) > N) {
        c = std::nextafter(c, 0.0);
        out = c * f;
    }
    return out;
}

std::vector<Field> noise_path(const SimConfig& cfg, int steps, RandomStream& stream) {
    const NoiseModel model = cfg.noise_model();
    std::vector<Field> dW;
    dW.reserve(static_cast<std::size_t>(steps));
    for (int m = 0; m < steps; ++m) dW.push_back(sample_increment(model, cfg.dt, stream).dW);
    return dW;
}

namespace {

int partition_steps(const SimConfig& cfg, double horizon) {
    const double r = horizon / cfg.dt;
    const long K = std::lround(r);
    if (K < 1 || std::abs(r - static_cast<double>(K)) > 1e-9 * r) {
        throw std::invalid_argument("horizon must be a positive multiple of dt");
    }
    return static_cast<int>(K);
}

void check_noise(const std::vector<Field>& dW, int steps, const Grid& grid) {
    if (dW.empty()) return;
    if (dW.size() < static_cast<std::size_t>(steps)) {
        throw std::invalid_argument("noise path is shorter than the partition");
    }
    for (const Field& d : dW) {
        if (!(d.grid() == grid)) throw std::invalid_argument("noise path grid mismatch");
    }
}

}  // namespace

PathFunction heat_flow_path(const Field& u0, const SimConfig& cfg, double horizon,
                            std::vector<Field> dW) {
    const int K = partition_steps(cfg, horizon);
    check_noise(dW, K, u0.grid());
    const HeatOperator op(u0.grid(), 0.0);
    PathFunction path{u0, cfg.dt, {}, std::move(dW)};
    path.values.reserve(static_cast<std::size_t>(K) + 1);
    path.values.push_back(u0);
    for (int m = 1; m <= K; ++m) path.values.push_back(heat_apply(op, u0, m * cfg.dt));
    return path;
}

PathFunction apply_A(const PathFunction& u, const SimConfig& cfg, double N) {
    const Grid& grid = u.grid();
    const int K = u.size() - 1;
    if (K < 1) throw std::invalid_argument("apply_A: path needs at least two points");
    if (!(u.step > 0.0)) throw std::invalid_argument("apply_A: partition step must be positive");
    check_noise(u.dW, K, grid);
    for (const Field& f : u.values) {
        if (!(f.grid() == grid)) throw std::invalid_argument("apply_A: path grid mismatch");
    }

    const HeatOperator op(grid, 0.0);
    const SineTransform& tr = op.transform();
    const std::vector<double> mult = op.multipliers(u.step);
    const SigmaSpec sigma = cfg.sigma();
    const auto n = static_cast<std::size_t>(grid.size());
    const double h = u.step;

    // total_m holds the coefficients of A(u)(s_m):
    //   total_{m+1} = S(h) (total_m + coeffs of g_m),  total_0 = coeffs of u0,
    // with g_m = h C(pi u_m) - k h pi u_m + sigma(pi u_m) dW_m.
    std::vector<double> total(n), coeffs(n), g(n), conv(n), scratch(n);
    tr.forward(u.u0.values(), total);

    PathFunction out{u.u0, u.step, {}, u.dW};
    out.values.reserve(u.values.size());
    out.values.push_back(u.u0);
    for (int m = 0; m < K; ++m) {
        const Field pu = pi_n(u.values[static_cast<std::size_t>(m)], N, cfg.p);
        const auto v = pu.values();
        convection(v, grid.dx(), conv, scratch);
        for (std::size_t i = 0; i < n; ++i) g[i] = h * conv[i] - cfg.k * h * v[i];
        if (!u.dW.empty()) {
            const auto d = u.dW[static_cast<std::size_t>(m)].values();
            for (std::size_t i = 0; i < n; ++i) g[i] += sigma(v[i]) * d[i];
        }
        tr.forward(g, coeffs);
        for (std::size_t j = 0; j < n; ++j) total[j] = mult[j] * (total[j] + coeffs[j]);
        Field next(grid);
        tr.inverse(total, next.values());
        out.values.push_back(std::move(next));
    }
    return out;
}

double weighted_norm(const PathFunction& u, double lambda, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weighted_norm: lambda must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_norm: p must be >= 1");
    if (u.size() < 2) return 0.0;
    const double h = u.step;
    const double x = lambda * h;
    const double e = std::exp(-x);
    const double full = -std::expm1(-x) / lambda;             // int_0^h e^{-lambda tau}
    const double w1 = (-std::expm1(-x) - x * e) / (lambda * x);  // ... * tau / h
    const double w0 = full - w1;
    double sum = 0.0;
    double prev = std::pow(lp_norm(u.values[0], p), p);
    for (int m = 0; m + 1 < u.size(); ++m) {
        const double next = std::pow(lp_norm(u.values[static_cast<std::size_t>(m) + 1], p), p);
        sum += std::exp(-lambda * m * h) * (w0 * prev + w1 * next);
        prev = next;
    }
    return std::pow(sum, 1.0 / p);
}

PathFunction path_difference(const PathFunction& a, const PathFunction& b) {
    if (a.size() != b.size() || a.step != b.step || !(a.grid() == b.grid())) {
        throw std::invalid_argument("path_difference: partition mismatch");
    }
    PathFunction d{a.u0 - b.u0, a.step, {}, a.dW};
    d.values.reserve(a.values.size());
    for (int m = 0; m < a.size(); ++m) {
        d.values.push_back(a.values[static_cast<std::size_t>(m)] -
                           b.values[static_cast<std::size_t>(m)]);
    }
    return d;
}

PicardResult picard_solve(const Field& u0, const SimConfig& cfg, double N, int iters,
                          double lambda, std::vector<Field> dW, double horizon) {
    if (iters < 1) throw std::invalid_argument("picard_solve: iters must be >= 1");
    PathFunction cur = heat_flow_path(u0, cfg, horizon, std::move(dW));
    std::vector<double> residuals;
    bool diverged = false;
    int growth = 0, done = 0;
    for (int it = 0; it < iters; ++it) {
        PathFunction next = apply_A(cur, cfg, N);
        const double r = weighted_norm(path_difference(next, cur), lambda, cfg.p);
        growth = (!residuals.empty() && r > residuals.back()) ? growth + 1 : 0;
        residuals.push_back(r);
        cur = std::move(next);
        done = it + 1;
        if (growth >= 3) {
            diverged = true;
            break;
        }
        if (r == 0.0) break;
    }
    return {std::move(cur), std::move(residuals), diverged, done};
}

double max_residual_ratio(const std::vector<double>& residuals, double floor) {
    double worst = 0.0;
    if (residuals.empty()) return worst;
    const double cut = floor * residuals.front();
    for (std::size_t m = 0; m + 1 < residuals.size(); ++m) {
        if (!(residuals[m] > cut)) break;
        worst = std::max(worst, residuals[m + 1] / residuals[m]);
    }
    return worst;
}

double contraction_factor(const PathFunction& u, const PathFunction& v, const SimConfig& cfg,
                          double N, double lambda) {
    if (u.size() != v.size() || u.step != v.step || !(u.grid() == v.grid())) {
        throw std::invalid_argument("contraction_factor: partition mismatch");
    }
    if (u.dW != v.dW) throw std::invalid_argument("contraction_factor: paths carry different noise");
    if (!(u.u0 == v.u0)) throw std::invalid_argument("contraction_factor: different initial data");
    const double den = weighted_norm(path_difference(u, v), lambda, cfg.p);
    if (den == 0.0) throw std::invalid_argument("contraction_factor: u and v coincide");
    const double num = weighted_norm(path_difference(apply_A(u, cfg, N), apply_A(v, cfg, N)),
                                     lambda, cfg.p);
    return num / den;
}

PathFunction random_path(const Field& u0, const SimConfig& cfg, double horizon,
                         std::vector<Field> dW, RandomStream& stream, double amplitude) {
    const int K = partition_steps(cfg, horizon);
    check_noise(dW, K, u0.grid());
    const Grid& grid = u0.grid();
    const int modes = std::min(16, grid.size());
    std::vector<Field> basis;
    for (int j = 1; j <= modes; ++j) basis.push_back(basis_eval(j, grid));

    PathFunction path{u0, cfg.dt, {}, std::move(dW)};
    path.values.push_back(u0);
    std::vector<double> walk(static_cast<std::size_t>(modes), 0.0), xi(walk.size());
    const double sdt = std::sqrt(cfg.dt);
    for (int m = 1; m <= K; ++m) {
        stream.next_normals(xi);
        Field f = u0;
        for (int j = 0; j < modes; ++j) {
            walk[static_cast<std::size_t>(j)] += amplitude / (j + 1) * sdt * xi[static_cast<std::size_t>(j)];
            f += walk[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(j)];
        }
        path.values.push_back(std::move(f));
    }
    return path;
}

}  // namespace sburgers
