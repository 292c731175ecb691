#include "sburgers/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sburgers {

struct SineTransform::Plans {
    // DST-I of length n through a real FFT of its odd extension (length
    // 2(n+1)); FFTW's own RODFT00 is about twice as slow at these sizes.
    fftw_plan odd = nullptr;
    fftw_plan dct = nullptr;  // REDFT00, length n + 2

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (odd) fftw_destroy_plan(odd);
        if (dct) fftw_destroy_plan(dct);
    }

    // The FFTW planner is not reentrant.
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }
};

namespace {

// fftw_malloc'd storage, so every buffer has the alignment the plans assume.
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n) { resize(n); }
    AlignedBuffer(const AlignedBuffer&) = delete;
    AlignedBuffer& operator=(const AlignedBuffer&) = delete;
    ~AlignedBuffer() { fftw_free(data_); }

    void resize(std::size_t n) {
        if (n <= size_) return;
        fftw_free(data_);
        data_ = fftw_alloc_real(n);
        if (!data_) throw std::bad_alloc();
        size_ = n;
    }
    double* data() { return data_; }

private:
    double* data_ = nullptr;
    std::size_t size_ = 0;
};

std::shared_ptr<const SineTransform::Plans> plans_for(int n);

}  // namespace

SineTransform::SineTransform(const Grid& grid)
    : grid_(grid),
      forward_scale_(grid.dx() / (2.0 * std::sqrt(grid.half_width()))),
      inverse_scale_(1.0 / (2.0 * std::sqrt(grid.half_width()))) {
    plans_ = plans_for(grid.size());
}

namespace {

std::shared_ptr<const SineTransform::Plans> plans_for(int n) {
    static std::mutex cache_mutex;
    static std::map<int, std::weak_ptr<const SineTransform::Plans>> cache;

    std::lock_guard cache_lock(cache_mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        if (auto p = it->second.lock()) return p;
    }

    auto plans = std::make_shared<SineTransform::Plans>();
    {
        std::lock_guard lock(SineTransform::Plans::planner_mutex());
        const int m = 2 * (n + 1);
        AlignedBuffer ext(static_cast<std::size_t>(m)), spec(static_cast<std::size_t>(m) + 2);
        plans->odd = fftw_plan_dft_r2c_1d(m, ext.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                          FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
        std::vector<double> a(static_cast<std::size_t>(n) + 2), b(static_cast<std::size_t>(n) + 2);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT;
        plans->dct = fftw_plan_r2r_1d(n + 2, a.data(), b.data(), FFTW_REDFT00, flags);
    }
    if (!plans->odd || !plans->dct) throw std::runtime_error("FFTW planning failed");
    cache[n] = plans;
    return plans;
}

}  // namespace

void SineTransform::dst(const double* in, double* out, double scale) const {
    // For y = (0, x_1..x_n, 0, -x_n..-x_1), Im FFT(y)_k = -2 sum_j x_j sin(pi j k/(n+1)).
    const std::size_t n = static_cast<std::size_t>(size());
    const std::size_t m = 2 * (n + 1);
    thread_local AlignedBuffer ext_buf, spec_buf;
    ext_buf.resize(m);
    spec_buf.resize(m + 2);
    double* ext = ext_buf.data();
    double* spec = spec_buf.data();
    ext[0] = 0.0;
    ext[n + 1] = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        ext[j + 1] = in[j];
        ext[m - 1 - j] = -in[j];
    }
    fftw_execute_dft_r2c(plans_->odd, ext, reinterpret_cast<fftw_complex*>(spec));
    const double s = -scale;
    for (std::size_t k = 0; k < n; ++k) out[k] = s * spec[2 * (k + 1) + 1];
}

void SineTransform::forward(std::span<const double> values, std::span<double> coeffs) const {
    dst(values.data(), coeffs.data(), forward_scale_);
}

void SineTransform::inverse(std::span<const double> coeffs, std::span<double> values) const {
    dst(coeffs.data(), values.data(), inverse_scale_);
}

void SineTransform::derivative(std::span<const double> coeffs, std::span<double> values,
                               std::span<double> scratch) const {
    const int n = size();
    // REDFT00: Y_k = X_0 + (-1)^k X_{n+1} + 2 sum_{j=1}^{n} X_j cos(pi j k / (n+1)).
    scratch[0] = 0.0;
    for (int j = 1; j <= n; ++j) scratch[j] = coeffs[j - 1] * wavenumber(j);
    scratch[n + 1] = 0.0;
    double* out = scratch.data() + n + 2;
    fftw_execute_r2r(plans_->dct, scratch.data(), out);
    for (int i = 0; i < n; ++i) values[i] = out[i + 1] * inverse_scale_;
}

double SineTransform::wavenumber(int j) const {
    return j * std::numbers::pi / (2.0 * grid_.half_width());
}

}  // namespace sburgers
