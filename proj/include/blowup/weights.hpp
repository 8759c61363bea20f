#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/multiplier.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

// Test-function pair (W2, W1) with W1 the formal adjoint of the stretching
// operator applied to W2. Either both come in closed form or W1 is computed
// spectrally from the sampled W2 (provenance "numeric").
struct WeightPair {
    std::string name;          // catalog name, or "numeric"
    std::string operator_name; // the R whose adjoint produced W1
    Grid grid;
    std::string provenance;    // "closed_form" | "numeric"
    RealFn w2;                 // unnormalized
    RealFn w1;                 // empty when provenance == "numeric"
    std::optional<SpectralField> w1_field; // spectral W1 (always filled for numeric)
    double normalization = 0.0; // integral of W2 used for unit-mass rescaling
    double mass_deficit = 0.0;  // |box quadrature - exact mass| for truncated domains
    std::vector<double> w1_zeros; // interior zeros of W1, quadrature split points

    bool has_closed_form() const { return provenance == "closed_form"; }

    SpectralField sample_w2() const { return SpectralField::from_function(grid, w2); }
    SpectralField sample_w1() const {
        if (w1_field) return *w1_field;
        return SpectralField::from_function(grid, w1);
    }
};

// W1 = adjoint(op) applied to the sampled W2; normalization by box quadrature.
inline WeightPair numeric_weight(const MultiplierOp& op, const RealFn& w2_fn, const Grid& grid) {
    SpectralField w2s = SpectralField::from_function(grid, w2_fn);
    for (double v : w2s.values())
        if (v < 0.0) throw std::invalid_argument("numeric_weight: W2 negative at a node");
    WeightPair pair;
    pair.name = "numeric";
    pair.operator_name = op.name;
    pair.grid = grid;
    pair.provenance = "numeric";
    pair.w2 = w2_fn;
    pair.w1_field = apply_multiplier(w2s, adjoint(op));
    pair.normalization = w2s.mean() * std::pow(grid.period, grid.dim); // = h^d * sum
    return pair;
}

namespace detail {

inline Grid default_weight_grid(const std::string& name) {
    if (name == "clm_torus") return Grid::torus_1d(1024);
    if (name == "riesz12_torus") return Grid::torus_2d(256);
    if (name == "riesz12_plane") return Grid::line_2d(512, 32.0);
    return Grid::line_1d(4096, 32.0); // burgers_line, clm_line
}

inline double box_quadrature(const Grid& grid, const RealFn& f) {
    SpectralField s = SpectralField::from_function(grid, f);
    return s.mean() * std::pow(grid.period, grid.dim);
}

} // namespace detail

// Closed-form catalog. Line-domain pairs are truncated to the periodic box
// of the supplied grid; their normalization is box quadrature and the
// deficit against the exact whole-line mass is recorded.
inline WeightPair catalog_pair(const std::string& name, const Grid& grid) {
    constexpr double pi = std::numbers::pi;
    WeightPair pair;
    pair.name = name;
    pair.grid = grid;
    pair.provenance = "closed_form";
    pair.mass_deficit = 0.0;

    if (name == "burgers_line") {
        if (grid.dim != 1 || grid.domain != DomainKind::line_box)
            throw std::invalid_argument("burgers_line needs a 1-D line grid");
        pair.operator_name = "d_dx";
        pair.w2 = [](double x, double) { double q = 1.0 + x * x; return 1.0 / (q * q); };
        pair.w1 = [](double x, double) { double q = 1.0 + x * x; return 4.0 * x / (q * q * q); };
        pair.normalization = detail::box_quadrature(grid, pair.w2);
        pair.mass_deficit = std::abs(pi / 2.0 - pair.normalization);
        pair.w1_zeros = {0.0};
    } else if (name == "clm_line") {
        if (grid.dim != 1 || grid.domain != DomainKind::line_box)
            throw std::invalid_argument("clm_line needs a 1-D line grid");
        pair.operator_name = "hilbert";
        pair.w2 = [](double x, double) { return 1.0 / (1.0 + x * x); };
        pair.w1 = [](double x, double) { return -x / (1.0 + x * x); };
        pair.normalization = detail::box_quadrature(grid, pair.w2);
        pair.mass_deficit = std::abs(pi - pair.normalization);
        pair.w1_zeros = {0.0};
    } else if (name == "clm_torus") {
        if (grid.dim != 1 || grid.domain != DomainKind::torus)
            throw std::invalid_argument("clm_torus needs a 1-D torus grid");
        pair.operator_name = "hilbert";
        pair.w2 = [](double x, double) { return 1.0 + std::cos(x); };
        pair.w1 = [](double x, double) { return -std::sin(x); };
        pair.normalization = 2.0 * pi; // exact
        pair.w1_zeros = {0.0, pi};
    } else if (name == "riesz12_torus") {
        if (grid.dim != 2 || grid.domain != DomainKind::torus)
            throw std::invalid_argument("riesz12_torus needs a 2-D torus grid");
        pair.operator_name = "riesz12";
        pair.w2 = [](double x, double y) { return 1.0 + std::cos(x) * std::cos(y); };
        pair.w1 = [](double x, double y) { return 0.5 * std::sin(x) * std::sin(y); };
        pair.normalization = 4.0 * pi * pi; // exact
    } else if (name == "riesz12_plane") {
        if (grid.dim != 2 || grid.domain != DomainKind::line_box)
            throw std::invalid_argument("riesz12_plane needs a 2-D line grid");
        // No closed form for R1R2 of this W2; computed spectrally.
        auto w2 = [](double x, double y) {
            double q = 1.0 + x * x + y * y;
            return 1.0 / (q * q * q);
        };
        pair = numeric_weight(ops::riesz12(), w2, grid);
        pair.name = name;
        pair.mass_deficit = std::abs(pi / 2.0 - pair.normalization);
    } else {
        throw std::invalid_argument("catalog_pair: unknown name " + name);
    }
    return pair;
}

inline WeightPair catalog_pair(const std::string& name) {
    return catalog_pair(name, detail::default_weight_grid(name));
}

// Max relative error of the numerically computed W1 against the closed form,
// over interior nodes (|x|_inf <= interior_bound; whole grid for the torus).
// On the torus and for local operators the numeric route is the spectral
// adjoint. For the Hilbert kernel on a truncated line box the periodic
// spectrum carries an O(x / L^2) image-charge error, so there the adjoint is
// evaluated independently as a principal-value convolution instead.
inline double w1_cross_check_error(const WeightPair& pair, double interior_bound) {
    if (!pair.has_closed_form())
        throw std::invalid_argument("w1_cross_check_error: pair has no closed form");
    const Grid& grid = pair.grid;
    if (grid.domain == DomainKind::line_box && pair.operator_name == "hilbert") {
        // H* f(x) = (1/pi) p.v. int f(y)/(y - x) dy; the kernel tail beyond
        // the integration window decays at least like y^-3 and is negligible.
        const double window = 1e6;
        quad::Fn w2_line = [&](double y) { return pair.w2(y, 0.0); };
        double scale = 0.0;
        for (int i = 0; i < grid.n; ++i)
            scale = std::max(scale, std::abs(pair.w1(grid.x(i), 0.0)));
        double worst = 0.0;
        const int stride = std::max(1, grid.n / 64);
        for (int i = 0; i < grid.n; i += stride) {
            double x = grid.x(i);
            if (std::abs(x) > interior_bound) continue;
            double pv = quad::integrate_cauchy(w2_line, -window, window, x) / std::numbers::pi;
            worst = std::max(worst, std::abs(pv - pair.w1(x, 0.0)) / scale);
        }
        return worst;
    }
    MultiplierOp op = ops::by_name(pair.operator_name, grid.dim);
    WeightPair num = numeric_weight(op, pair.w2, pair.grid);
    const Grid& g = pair.grid;
    SpectralField exact = pair.sample_w1();
    const auto& approx = num.w1_field->values();
    double scale = exact.max_abs();
    double worst = 0.0;
    auto interior = [&](double x, double y) {
        if (g.domain == DomainKind::torus) return true;
        return std::abs(x) <= interior_bound && std::abs(y) <= interior_bound;
    };
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i)
            if (interior(g.x(i), 0.0))
                worst = std::max(worst, std::abs(approx[i] - exact(i)) / scale);
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (interior(g.x(i), g.x(j))) {
                    std::size_t idx = std::size_t(i) * g.n + j;
                    worst = std::max(worst, std::abs(approx[idx] - exact(idx)) / scale);
                }
    }
    return worst;
}

} // namespace blowup
