#include "sburgers/heat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sburgers {

HeatOperator::HeatOperator(const Grid& grid, double damping)
    : transform_(grid), damping_(damping) {
    if (!(damping >= 0.0)) throw std::invalid_argument("damping k must be nonnegative");
}

double HeatOperator::eigenvalue(int j) const {
    const double w = transform_.wavenumber(j);
    return w * w;
}

double HeatOperator::multiplier(int j, double t) const {
    return std::exp(-(eigenvalue(j) + damping_) * t);
}

std::vector<double> HeatOperator::multipliers(double t) const {
    std::vector<double> m(static_cast<std::size_t>(grid().size()));
    for (int j = 1; j <= grid().size(); ++j) m[j - 1] = multiplier(j, t);
    return m;
}

Field heat_apply(const HeatOperator& op, const Field& f, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_apply: negative time");
    if (!(f.grid() == op.grid())) throw std::invalid_argument("heat_apply: grid mismatch");
    if (t == 0.0) return f;
    const auto n = static_cast<std::size_t>(f.size());
    std::vector<double> c(n);
    op.transform().forward(f.values(), c);
    for (std::size_t j = 0; j < n; ++j) c[j] *= op.multiplier(static_cast<int>(j) + 1, t);
    Field out(f.grid());
    op.transform().inverse(c, out.values());
    return out;
}

double heat_kernel(double t, double x) {
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

KernelCheck kernel_checks(const Grid& grid, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_checks: t must be positive");
    if (4.0 * std::sqrt(t) > grid.half_width()) {
        throw std::invalid_argument("kernel_checks: 4 sqrt(t) exceeds the half-width; the kernel "
                                    "is not contained in the domain");
    }
    KernelCheck out;
    for (int i = 0; i < grid.size(); ++i) {
        const double g = heat_kernel(t, grid.node(i));
        out.mass += g;
        out.l2sq += g * g;
    }
    out.mass *= grid.dx();
    out.l2sq *= grid.dx();
    return out;
}

int partition_index(const FieldPath& path, double t) {
    if (path.size() == 0) throw std::invalid_argument("empty path");
    if (!(path.step > 0.0)) throw std::invalid_argument("path step must be positive");
    const double r = t / path.step;
    const long m = std::lround(r);
    if (std::abs(r - static_cast<double>(m)) > 1e-9 * std::max(1.0, r) || m < 0 ||
        m >= path.size()) {
        throw std::invalid_argument("time is not a partition point of the path");
    }
    return static_cast<int>(m);
}

namespace {

void check_path(const FieldPath& path, const HeatOperator& op) {
    if (path.size() == 0) throw std::invalid_argument("empty path");
    for (const Field& f : path.values) {
        if (!(f.grid() == op.grid())) throw std::invalid_argument("path grid mismatch");
    }
}

// Runs acc_{m+1} = S(step) (acc_m + step * g_m) in coefficient space and
// hands each acc_m to `emit`.
template <class Source, class Emit>
void accumulate(const HeatOperator& op, int count, double step, Source&& source, Emit&& emit) {
    const auto n = static_cast<std::size_t>(op.grid().size());
    const std::vector<double> mult = op.multipliers(step);
    std::vector<double> acc(n, 0.0), coeffs(n), values(n);
    emit(0, acc);
    for (int m = 0; m + 1 < count; ++m) {
        source(m, values);
        op.transform().forward(values, coeffs);
        for (std::size_t j = 0; j < n; ++j) acc[j] = mult[j] * (acc[j] + coeffs[j]);
        emit(m + 1, acc);
    }
}

}  // namespace

std::vector<Field> j1_path(const FieldPath& v, const HeatOperator& op) {
    check_path(v, op);
    std::vector<Field> out(static_cast<std::size_t>(v.size()), Field(op.grid()));
    accumulate(
        op, v.size(), v.step,
        [&](int m, std::vector<double>& buf) {
            const auto src = v.values[m].values();
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = v.step * src[i];
        },
        [&](int m, const std::vector<double>& acc) { op.transform().inverse(acc, out[m].values()); });
    return out;
}

Field j1_apply(const FieldPath& v, const HeatOperator& op, double t) {
    const int m = partition_index(v, t);
    FieldPath head{v.step, {v.values.begin(), v.values.begin() + m + 1}};
    return j1_path(head, op).back();
}

std::vector<Field> j2_path(const FieldPath& w, const HeatOperator& op) {
    check_path(w, op);
    const auto n = static_cast<std::size_t>(op.grid().size());
    std::vector<double> scratch(2 * (n + 2));
    std::vector<Field> out(static_cast<std::size_t>(w.size()), Field(op.grid()));
    accumulate(
        op, w.size(), w.step,
        [&](int m, std::vector<double>& buf) {
            const auto src = w.values[m].values();
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = w.step * src[i];
        },
        [&](int m, const std::vector<double>& acc) {
            auto dst = out[m].values();
            op.transform().derivative(acc, dst, scratch);
            for (double& x : dst) x = -x;
        });
    return out;
}

Field j2_apply(const FieldPath& w, const HeatOperator& op, double t) {
    const int m = partition_index(w, t);
    FieldPath head{w.step, {w.values.begin(), w.values.begin() + m + 1}};
    return j2_path(head, op).back();
}

std::vector<Field> stoch_conv_path(const FieldPath& phi, std::span<const Field> dW,
                                   const HeatOperator& op) {
    check_path(phi, op);
    if (dW.size() + 1 < static_cast<std::size_t>(phi.size())) {
        throw std::invalid_argument("stoch_conv: noise path shorter than the integrand partition");
    }
    std::vector<Field> out(static_cast<std::size_t>(phi.size()), Field(op.grid()));
    accumulate(
        op, phi.size(), phi.step,
        [&](int m, std::vector<double>& buf) {
            require_same_grid(phi.values[m], dW[m]);
            const auto a = phi.values[m].values();
            const auto b = dW[m].values();
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = a[i] * b[i];
        },
        [&](int m, const std::vector<double>& acc) { op.transform().inverse(acc, out[m].values()); });
    return out;
}

Field stoch_conv(const FieldPath& phi, std::span<const Field> dW, const HeatOperator& op,
                 double t) {
    const int m = partition_index(phi, t);
    FieldPath head{phi.step, {phi.values.begin(), phi.values.begin() + m + 1}};
    return stoch_conv_path(head, dW.first(static_cast<std::size_t>(m)), op).back();
}

}  // namespace sburgers
