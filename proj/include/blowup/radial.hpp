#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace blowup {

// f(r) ~ coeff * r^exponent, used to extend profiles analytically below
// r_min / above r_max when evaluating improper integrals.
struct PowerLaw {
    double coeff = 0.0;
    double exponent = 0.0;
};

// Finite sum of power-law terms; a single-term asymptote converts implicitly.
// Extra terms let profiles whose expansion is not a pure power (for example
// r^{a-1} / (1 + r^{2a})) keep their analytic continuation accurate.
struct PowerLawSum {
    std::vector<PowerLaw> terms;
    PowerLawSum() = default;
    PowerLawSum(PowerLaw t) : terms{t} {}
    PowerLawSum(std::initializer_list<PowerLaw> ts) : terms(ts) {}
};

// Log-spaced grid on [r_min, r_max]. Quadrature is trapezoid in u = log r:
// integral f dr = integral f(e^u) e^u du, so the node weight is du * r_i,
// halved at both ends.
struct RadialGrid {
    std::vector<double> r;
    std::vector<double> w; // shared quadrature weights
    double du = 0.0;

    static RadialGrid logspace(double r_min, double r_max, std::size_t n) {
        if (!(0.0 < r_min && r_min < r_max))
            throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
        if (n < 5) throw std::invalid_argument("RadialGrid: need at least 5 nodes");
        RadialGrid g;
        g.du = std::log(r_max / r_min) / double(n - 1);
        g.r.resize(n);
        g.w.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            g.r[i] = r_min * std::exp(g.du * double(i));
            g.w[i] = g.du * g.r[i];
        }
        g.r.back() = r_max; // kill accumulated exp roundoff at the endpoint
        g.w.front() *= 0.5;
        g.w.back() *= 0.5;
        return g;
    }

    std::size_t size() const { return r.size(); }
    bool same_as(const RadialGrid& o) const {
        return r.size() == o.r.size() && r.front() == o.r.front() && r.back() == o.r.back();
    }
};

struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;
    std::optional<PowerLawSum> head; // behavior on (0, r_min)
    std::optional<PowerLawSum> tail; // behavior on (r_max, inf)

    RadialProfile() = default;
    RadialProfile(RadialGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("RadialProfile: size mismatch");
    }

    template <class F>
    static RadialProfile from_function(const RadialGrid& g, F&& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.r[i]);
        return RadialProfile(g, std::move(v));
    }
};

inline double profile_inner(const RadialProfile& a, const RadialProfile& b) {
    if (!a.grid.same_as(b.grid)) throw std::invalid_argument("profile_inner: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += a.grid.w[i] * a.values[i] * b.values[i];
    return s;
}

inline double profile_integral(const RadialProfile& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.grid.w[i] * a.values[i];
    return s;
}

namespace radial {

// head[i] = integral_0^{r_i} s^m f(s) ds: shared-weight sum with a
// half-weight diagonal (so every kernel sum below is exactly the
// discrete adjoint of its partner under profile_inner), plus the
// analytic power-law contribution of (0, r_min).
inline std::vector<double> head_sums(const RadialProfile& f, double m) {
    const auto& g = f.grid;
    std::vector<double> out(g.size());
    double below = 0.0;
    if (f.head)
        for (const PowerLaw& t : f.head->terms) {
            double p = t.exponent + m;
            if (p <= -1.0)
                throw std::invalid_argument("head_sums: power-law head not integrable");
            below += t.coeff * std::pow(g.r.front(), p + 1.0) / (p + 1.0);
        }
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double c = g.w[i] * std::pow(g.r[i], m) * f.values[i];
        out[i] = below + acc + 0.5 * c;
        acc += c;
    }
    return out;
}

// tail[i] = integral_{r_i}^{inf} s^m f(s) ds, same conventions.
inline std::vector<double> tail_sums(const RadialProfile& f, double m) {
    const auto& g = f.grid;
    std::vector<double> out(g.size());
    double beyond = 0.0;
    if (f.tail)
        for (const PowerLaw& t : f.tail->terms) {
            double q = t.exponent + m;
            if (q >= -1.0)
                throw std::invalid_argument("tail_sums: power-law tail not integrable");
            beyond += -t.coeff * std::pow(g.r.back(), q + 1.0) / (q + 1.0);
        }
    double acc = 0.0;
    for (std::size_t i = g.size(); i-- > 0;) {
        double c = g.w[i] * std::pow(g.r[i], m) * f.values[i];
        out[i] = beyond + acc + 0.5 * c;
        acc += c;
    }
    return out;
}

} // namespace radial

// L(g)(r) = c * int_r^inf g/s ds - C * ( g(r) + (1/r) int_0^r g + r int_r^inf g/s^2 ).
inline RadialProfile L_apply(const RadialProfile& g, double c, double C) {
    auto t1 = radial::tail_sums(g, -1.0);
    auto h0 = radial::head_sums(g, 0.0);
    auto t2 = radial::tail_sums(g, -2.0);
    std::vector<double> out(g.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double r = g.grid.r[i];
        out[i] = c * t1[i] - C * (g.values[i] + h0[i] / r + r * t2[i]);
    }
    return RadialProfile(g.grid, std::move(out));
}

// Formal adjoint of L with respect to int_0^inf u v dr, generated term by
// term (adjoint pairs: tail_over_s <-> head-mean, identity <-> identity,
// r*tail_over_s^2 <-> head of s*g over r^2):
// L*(h)(r) = (c/r) int_0^r h - C * ( h(r) + int_r^inf h/s ds + (1/r^2) int_0^r s h ).
inline RadialProfile Lstar_apply(const RadialProfile& h, double c, double C) {
    auto h0 = radial::head_sums(h, 0.0);
    auto t1 = radial::tail_sums(h, -1.0);
    auto h1 = radial::head_sums(h, 1.0);
    std::vector<double> out(h.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double r = h.grid.r[i];
        out[i] = c * h0[i] / r - C * (h.values[i] + t1[i] + h1[i] / (r * r));
    }
    return RadialProfile(h.grid, std::move(out));
}

} // namespace blowup
