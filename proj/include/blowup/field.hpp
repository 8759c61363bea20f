#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "blowup/fft.hpp"
#include "blowup/grid.hpp"

namespace blowup {

using Complex = std::complex<double>;
using RealFn = std::function<double(double, double)>; // y argument ignored in 1-D

// Real scalar field on a uniform periodic grid together with its discrete
// Fourier coefficients. Values and coefficients are kept consistent at
// construction; instances are treated as immutable afterwards.
class SpectralField {
public:
    SpectralField(Grid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("SpectralField: value array does not match grid");
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("SpectralField: non-finite value");
        std::vector<Complex> tmp(values_.begin(), values_.end());
        coeffs_ = fft::forward(tmp, grid_.n, grid_.dim == 2 ? grid_.n : 0);
    }

    static SpectralField from_function(const Grid& grid, const RealFn& f) {
        std::vector<double> vals(grid.size());
        if (grid.dim == 1) {
            for (int i = 0; i < grid.n; ++i) vals[i] = f(grid.x(i), 0.0);
        } else {
            for (int i = 0; i < grid.n; ++i)
                for (int j = 0; j < grid.n; ++j)
                    vals[std::size_t(i) * grid.n + j] = f(grid.x(i), grid.x(j));
        }
        return SpectralField(grid, std::move(vals));
    }

    // Build from coefficients; verifies the inverse transform is real to
    // within `imag_tol` (relative to the field magnitude) before the
    // imaginary residue is discarded.
    static SpectralField from_coefficients(const Grid& grid, const std::vector<Complex>& coeffs,
                                           double imag_tol = 1e-12) {
        auto total = fft::inverse(coeffs, grid.n, grid.dim == 2 ? grid.n : 0);
        double max_abs = 0.0, max_imag = 0.0;
        for (const auto& c : total) {
            max_abs = std::max(max_abs, std::abs(c));
            max_imag = std::max(max_imag, std::abs(c.imag()));
        }
        if (max_imag > imag_tol * std::max(1.0, max_abs))
            throw std::runtime_error("SpectralField: inverse transform not real (residue " +
                                     std::to_string(max_imag) + ")");
        std::vector<double> vals(total.size());
        for (std::size_t i = 0; i < total.size(); ++i) vals[i] = total[i].real();
        return SpectralField(grid, std::move(vals));
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<Complex>& coefficients() const { return coeffs_; }

    double operator()(std::size_t i) const { return values_[i]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double mean() const { return coeffs_[0].real(); }

    // Values re-sampled half a cell off the grid (midpoints), evaluated
    // spectrally via a phase shift. Used by midpoint quadrature that must
    // avoid landing exactly on grid-node zeros.
    std::vector<double> shifted_values() const {
        std::vector<Complex> shifted(coeffs_.size());
        const double h2 = grid_.spacing() / 2.0;
        if (grid_.dim == 1) {
            for (int k = 0; k < grid_.n; ++k)
                shifted[k] = coeffs_[k] * std::polar(1.0, grid_.freq(k) * h2);
        } else {
            for (int k0 = 0; k0 < grid_.n; ++k0)
                for (int k1 = 0; k1 < grid_.n; ++k1)
                    shifted[std::size_t(k0) * grid_.n + k1] =
                        coeffs_[std::size_t(k0) * grid_.n + k1] *
                        std::polar(1.0, (grid_.freq(k0) + grid_.freq(k1)) * h2);
        }
        auto total = fft::inverse(shifted, grid_.n, grid_.dim == 2 ? grid_.n : 0);
        std::vector<double> out(total.size());
        for (std::size_t i = 0; i < total.size(); ++i) out[i] = total[i].real();
        return out;
    }

    // Fraction of spectral energy carried by frequencies |k|_inf above
    // `band_lo` (in integer index units). The blow-up detector uses this as
    // a resolution-loss monitor.
    double tail_energy_fraction(double band_lo) const {
        double tail = 0.0, total = 0.0;
        if (grid_.dim == 1) {
            for (int k = 0; k < grid_.n; ++k) {
                double e = std::norm(coeffs_[k]);
                total += e;
                if (std::abs(grid_.signed_index(k)) > band_lo) tail += e;
            }
        } else {
            for (int k0 = 0; k0 < grid_.n; ++k0)
                for (int k1 = 0; k1 < grid_.n; ++k1) {
                    double e = std::norm(coeffs_[std::size_t(k0) * grid_.n + k1]);
                    total += e;
                    int kk = std::max(std::abs(grid_.signed_index(k0)),
                                      std::abs(grid_.signed_index(k1)));
                    if (kk > band_lo) tail += e;
                }
        }
        return total > 0.0 ? tail / total : 0.0;
    }

private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<Complex> coeffs_;
};

// Discrete L^2 pairing: uniform-node quadrature of f*g over the domain
// (exact trapezoid on a periodic grid).
inline double inner_product(const SpectralField& f, const SpectralField& g) {
    if (!f.grid().same_shape(g.grid()))
        throw std::invalid_argument("inner_product: grid mismatch");
    const double w = std::pow(f.grid().spacing(), f.grid().dim);
    double s = 0.0;
    const auto& a = f.values();
    const auto& b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * w;
}

inline double l2_norm_sq(const SpectralField& f) { return inner_product(f, f); }

inline double l1_norm(const SpectralField& f) {
    const double w = std::pow(f.grid().spacing(), f.grid().dim);
    double s = 0.0;
    for (double v : f.values()) s += std::abs(v);
    return s * w;
}

} // namespace blowup
