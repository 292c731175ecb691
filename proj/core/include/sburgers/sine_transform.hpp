#pragma once

#include <memory>
#include <span>

#include "sburgers/grid.hpp"

namespace sburgers {

/// Orthonormal Dirichlet sine transform on a Grid.
///
/// Basis: e_j(x) = L^{-1/2} sin(j pi (x + L) / (2L)), j = 1..n, which at the
/// interior nodes is L^{-1/2} sin(j pi i / (n + 1)). With the rectangle-rule
/// inner product these vectors are exactly orthonormal, so
///   coefficients c_j = sum_i f_i e_j(x_i) dx,   f_i = sum_j c_j e_j(x_i).
///
/// Backed by FFTW: the DST-I runs as a real FFT of the odd extension, the
/// DCT-I (for derivatives) as REDFT00. Plans are created
/// once per size with FFTW_ESTIMATE so results do not depend on timing, and
/// executing a transform is safe from any number of threads.
class SineTransform {
public:
    explicit SineTransform(const Grid& grid);

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.size(); }

    /// Grid values -> coefficients. in/out must not alias.
    void forward(std::span<const double> values, std::span<double> coeffs) const;

    /// Coefficients -> grid values. in/out must not alias.
    void inverse(std::span<const double> coeffs, std::span<double> values) const;

    /// Coefficients of f -> nodal values of f' (spectral derivative).
    /// `scratch` needs 2 * (size() + 2) entries.
    void derivative(std::span<const double> coeffs, std::span<double> values,
                    std::span<double> scratch) const;

    /// Wavenumber j pi / (2L) of mode j (1-based).
    double wavenumber(int j) const;

    struct Plans;

private:
    // out[k] = scale * 2 sum_j in[j] sin(pi (j+1)(k+1)/(n+1)), i.e. scale times
    // FFTW's RODFT00.
    void dst(const double* in, double* out, double scale) const;

    Grid grid_;
    std::shared_ptr<const Plans> plans_;
    double forward_scale_;
    double inverse_scale_;
};

}  // namespace sburgers
