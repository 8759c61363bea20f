#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/weights.hpp"

namespace blowup {

// Point evaluation of the trigonometric interpolant of a 1-D field.
inline double eval_spectral_1d(const SpectralField& f, double x) {
    const Grid& g = f.grid();
    const auto& c = f.coefficients();
    double s = 0.0;
    for (int k = 0; k < g.n; ++k) {
        // coefficients carry phases relative to the first node, not to x = 0
        double phase = g.freq(k) * (x - g.origin);
        if (g.is_nyquist(k)) {
            s += c[k].real() * std::cos(phase);
        } else {
            s += c[k].real() * std::cos(phase) - c[k].imag() * std::sin(phase);
        }
    }
    return s;
}

// Zero-pad a field's coefficients onto a grid with twice the points per axis.
inline SpectralField upsample2(const SpectralField& f) {
    const Grid& g = f.grid();
    Grid g2 = g;
    g2.n = 2 * g.n;
    const auto& c = f.coefficients();
    std::vector<Complex> c2(g2.size(), Complex(0.0, 0.0));
    auto dest = [&](int ks) { return ks >= 0 ? ks : ks + g2.n; };
    if (g.dim == 1) {
        for (int k = 0; k < g.n; ++k) {
            int ks = g.signed_index(k);
            if (g.is_nyquist(k)) {
                // split the self-conjugate mode across +-N/2
                c2[dest(ks)] += c[k] * 0.5;
                c2[dest(-ks)] += c[k] * 0.5;
            } else {
                c2[dest(ks)] = c[k];
            }
        }
    } else {
        for (int k0 = 0; k0 < g.n; ++k0)
            for (int k1 = 0; k1 < g.n; ++k1) {
                Complex v = c[std::size_t(k0) * g.n + k1];
                int s0 = g.signed_index(k0), s1 = g.signed_index(k1);
                bool ny0 = g.is_nyquist(k0), ny1 = g.is_nyquist(k1);
                double w0 = ny0 ? 0.5 : 1.0, w1 = ny1 ? 0.5 : 1.0;
                for (int a = 0; a < (ny0 ? 2 : 1); ++a)
                    for (int b = 0; b < (ny1 ? 2 : 1); ++b) {
                        int d0 = dest(a == 0 ? s0 : -s0);
                        int d1 = dest(b == 0 ? s1 : -s1);
                        c2[std::size_t(d0) * g2.n + d1] += v * (w0 * w1);
                    }
            }
    }
    return SpectralField::from_coefficients(g2, c2);
}

struct HypothesisOptions {
    double sign_tol = 1e-12;       // relative tolerance on the node-wise sign check
    double clip_floor = -1e12;     // floor applied to the log integrand
    double clip_delta_tol = 1e-4;  // max J movement allowed under clip-floor variation
};

struct HypothesisReport {
    bool sign_ok = false;
    double min_product = 0.0;   // min over nodes of omega0*W1
    double product_scale = 0.0; // max |omega0*W1|
    double pairing = 0.0;       // integral of omega0*W1 with unit-mass W2
    double jensen_J = 0.0;      // integral of log(omega0*W1/W2)*W2, unit-mass W2
    double j_alt = 0.0;         // companion-method value of J
    double j_delta = 0.0;       // |J - j_alt|
    double clip_sensitivity = 0.0; // |J(floor) - J(2*floor)|; nonzero only if clipping fired
    long clip_count = 0;
    bool integrable = false;
    std::string method;         // "adaptive_1d" | "midpoint_richardson"
    double mass = 0.0;          // normalization of W2 used
    double mass_deficit = 0.0;
    std::vector<std::string> notes;
};

struct BlowupCertificate {
    double c_star = 0.0;
    double t_bound = 0.0;
    HypothesisReport report;
    std::string w1_provenance;
};

struct CertificateRefusal : std::runtime_error {
    std::string condition;
    CertificateRefusal(std::string cond, const std::string& detail)
        : std::runtime_error("certificate refused: " + cond + " (" + detail + ")"),
          condition(std::move(cond)) {}
};

namespace detail {

// J for 1-D pairs: adaptive quadrature over the box/period with split points
// at the zeros of the product omega0*W1 (where the log integrand is
// singular but integrable).
struct Adaptive1dResult {
    double j;
    long clips;
};

inline Adaptive1dResult jensen_adaptive_1d(const SpectralField& omega0, const WeightPair& pair,
                                           double mass, double floor) {
    const Grid& g = pair.grid;
    auto w1_at = [&](double x) {
        return pair.has_closed_form() ? pair.w1(x, 0.0) : eval_spectral_1d(*pair.w1_field, x);
    };
    long clips = 0;
    quad::Fn integrand = [&](double x) {
        double p = eval_spectral_1d(omega0, x) * w1_at(x);
        double w2 = pair.w2(x, 0.0);
        if (w2 <= 0.0) return 0.0;
        double lg;
        if (p > 0.0) {
            lg = std::log(p / w2);
            if (lg < floor) {
                lg = floor;
                ++clips;
            }
        } else {
            lg = floor;
            ++clips;
        }
        return lg * w2 / mass;
    };

    // split points: known W1 zeros plus sign changes / zeros of omega0 on the grid
    std::vector<double> splits(pair.w1_zeros);
    const auto& ov = omega0.values();
    double omax = omega0.max_abs();
    for (int i = 0; i < g.n; ++i) {
        double x0 = g.x(i), x1 = g.x(i) + g.spacing();
        double v0 = ov[i], v1 = ov[std::size_t((i + 1) % g.n)];
        if (std::abs(v0) <= 1e-12 * omax) {
            splits.push_back(x0);
        } else if (v0 * v1 < 0.0) {
            // bisect the interpolant for the crossing
            double a = x0, b = x1, fa = v0;
            for (int it = 0; it < 60; ++it) {
                double m = 0.5 * (a + b);
                double fm = eval_spectral_1d(omega0, m);
                if (fa * fm <= 0.0) b = m; else { a = m; fa = fm; }
            }
            splits.push_back(0.5 * (a + b));
        }
    }
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end(),
                             [&](double a, double b) { return std::abs(a - b) < 1e-9; }),
                 splits.end());
    double a = g.origin, b = g.origin + g.period;
    if (g.domain == DomainKind::line_box) {
        // Truncated-line data is periodized with a jump at the box seam; the
        // trigonometric interpolant oscillates at the jump scale inside the
        // two half-cells adjacent to the seam, where the true product is
        // merely tiny. Those half-cells form one full cell centered on the
        // seam node, where the interpolant is exact: evaluate that cell by
        // the midpoint rule at the node and integrate the rest adaptively.
        double h2 = 0.5 * g.spacing();
        double j = quad::integrate_with_splits(integrand, a + h2, b - h2, splits, 1e-13, 1e-11) +
                   g.spacing() * integrand(a);
        return {j, clips};
    }
    double j = quad::integrate_with_splits(integrand, a, b, splits, 1e-13, 1e-11);
    return {j, clips};
}

struct MidpointResult {
    double j;
    long clips;
};

// Single-level midpoint J: fields sampled half a cell off the grid so the
// integrand never lands exactly on a grid-node zero of the product.
inline MidpointResult jensen_midpoint(const SpectralField& omega0, const SpectralField& w1,
                                      const RealFn& w2, double mass, double floor) {
    const Grid& g = omega0.grid();
    auto ov = omega0.shifted_values();
    auto wv = w1.shifted_values();
    const double h2 = g.spacing() / 2.0;
    const double cell = std::pow(g.spacing(), g.dim);
    double j = 0.0;
    long clips = 0;
    auto term = [&](double p, double w2v) {
        if (w2v <= 0.0) return;
        double lg;
        if (p > 0.0) {
            lg = std::log(p / w2v);
            if (lg < floor) { lg = floor; ++clips; }
        } else {
            lg = floor;
            ++clips;
        }
        j += lg * w2v / mass * cell;
    };
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) term(ov[i] * wv[i], w2(g.x(i) + h2, 0.0));
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int k = 0; k < g.n; ++k)
                term(ov[std::size_t(i) * g.n + k] * wv[std::size_t(i) * g.n + k],
                     w2(g.x(i) + h2, g.x(k) + h2));
    }
    return {j, clips};
}

} // namespace detail

inline HypothesisReport check_hypothesis(const SpectralField& omega0, const WeightPair& pair,
                                         const HypothesisOptions& opt = {}) {
    if (!omega0.grid().same_shape(pair.grid))
        throw std::invalid_argument("check_hypothesis: omega0 and weight pair on different grids");
    HypothesisReport rep;
    rep.mass = pair.normalization;
    rep.mass_deficit = pair.mass_deficit;
    if (!(rep.mass > 0.0) || !std::isfinite(rep.mass))
        throw std::invalid_argument("check_hypothesis: weight normalization not positive");

    SpectralField w1 = pair.sample_w1();
    const auto& ov = omega0.values();
    const auto& wv = w1.values();
    rep.min_product = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ov.size(); ++i) {
        double p = ov[i] * wv[i];
        rep.min_product = std::min(rep.min_product, p);
        rep.product_scale = std::max(rep.product_scale, std::abs(p));
    }
    rep.sign_ok = rep.min_product >= -opt.sign_tol * rep.product_scale;
    rep.pairing = inner_product(omega0, w1) / rep.mass;

    const double f1 = opt.clip_floor, f2 = 2.0 * opt.clip_floor;
    if (pair.grid.dim == 1) {
        rep.method = "adaptive_1d";
        auto r1 = detail::jensen_adaptive_1d(omega0, pair, rep.mass, f1);
        rep.jensen_J = r1.j;
        rep.clip_count = r1.clips;
        if (r1.clips > 0) {
            auto r2 = detail::jensen_adaptive_1d(omega0, pair, rep.mass, f2);
            rep.clip_sensitivity = std::abs(r1.j - r2.j);
        }
        auto alt = detail::jensen_midpoint(omega0, w1, pair.w2, rep.mass, f1);
        rep.j_alt = alt.j;
    } else {
        rep.method = "midpoint_richardson";
        auto coarse = detail::jensen_midpoint(omega0, w1, pair.w2, rep.mass, f1);
        SpectralField omega_f = upsample2(omega0);
        SpectralField w1_f = pair.has_closed_form()
                                 ? SpectralField::from_function(omega_f.grid(), pair.w1)
                                 : *numeric_weight(ops::by_name(pair.operator_name, pair.grid.dim),
                                                   pair.w2, omega_f.grid())
                                        .w1_field;
        auto fine = detail::jensen_midpoint(omega_f, w1_f, pair.w2, rep.mass, f1);
        // midpoint error on log singularities is first order in h: extrapolate
        rep.jensen_J = 2.0 * fine.j - coarse.j;
        rep.j_alt = fine.j;
        rep.clip_count = coarse.clips + fine.clips;
        if (rep.clip_count > 0) {
            auto c2 = detail::jensen_midpoint(omega0, w1, pair.w2, rep.mass, f2);
            auto f2r = detail::jensen_midpoint(omega_f, w1_f, pair.w2, rep.mass, f2);
            rep.clip_sensitivity = std::abs((2.0 * f2r.j - c2.j) - rep.jensen_J);
        }
    }
    rep.j_delta = std::abs(rep.jensen_J - rep.j_alt);
    rep.integrable = std::isfinite(rep.jensen_J) && rep.jensen_J > -1e8 &&
                     rep.clip_sensitivity <= opt.clip_delta_tol;
    if (rep.clip_count > 0)
        rep.notes.push_back("clipped " + std::to_string(rep.clip_count) +
                            " integrand evaluations at floor " + std::to_string(opt.clip_floor));
    return rep;
}

inline BlowupCertificate issue_certificate(const HypothesisReport& report,
                                           const std::string& w1_provenance) {
    if (!report.sign_ok)
        throw CertificateRefusal("sign_condition",
                                 "min omega0*W1 = " + std::to_string(report.min_product));
    // degenerate data fails the pairing condition before anything is said
    // about the (then meaningless) log integral
    if (!(report.pairing > 0.0) || !std::isfinite(report.pairing))
        throw CertificateRefusal("pairing",
                                 "integral of omega0*W1 = " + std::to_string(report.pairing));
    if (!report.integrable)
        throw CertificateRefusal("jensen_integral",
                                 "J not established finite (J = " + std::to_string(report.jensen_J) +
                                     ", clip sensitivity = " +
                                     std::to_string(report.clip_sensitivity) + ")");
    BlowupCertificate cert;
    cert.report = report;
    cert.w1_provenance = w1_provenance;
    cert.c_star = std::exp(report.jensen_J);
    cert.t_bound = 1.0 / cert.c_star;
    return cert;
}

struct BoundViolation {
    double time = 0.0;
    double slack = 0.0;
};

struct BoundMonitor {
    std::vector<double> slack; // M(t)*(1 - c*t) - c* per sample
    std::vector<BoundViolation> violations;
    bool ok = true;
};

// Checks the certified trajectory bound M(t) >= c*/(1 - c* t).
inline BoundMonitor monitor_bound(const std::vector<double>& times,
                                  const std::vector<double>& m_series, double c_star,
                                  double rel_tol = 1e-3) {
    if (times.size() != m_series.size())
        throw std::invalid_argument("monitor_bound: length mismatch");
    BoundMonitor mon;
    mon.slack.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] * c_star >= 1.0)
            throw std::invalid_argument("monitor_bound: sample at or beyond T_bound");
        double s = m_series[i] * (1.0 - c_star * times[i]) - c_star;
        mon.slack.push_back(s);
        if (s < -rel_tol * std::abs(m_series[i])) {
            mon.violations.push_back({times[i], s});
            mon.ok = false;
        }
    }
    return mon;
}

} // namespace blowup
