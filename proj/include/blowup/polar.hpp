#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/multiplier.hpp"
#include "blowup/quadrature.hpp"
#include "blowup/radial.hpp"
#include "blowup/simulator.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Angular cosine modes of even, pi-periodic functions: f(r,theta) =
// sum_k f_{2k}(r) cos(2k theta).
// ---------------------------------------------------------------------------

struct PolarModes {
    RadialGrid rgrid;
    std::vector<RadialProfile> modes; // modes[k] holds f_{2k}
    int k_max() const { return int(modes.size()) - 1; }
};

using PolarFn = std::function<double(double, double)>; // (r, theta)

// Extracts {f_{2k}} by angular quadrature per radial node. The input must be
// even in theta and pi-periodic; violations beyond `symmetry_tol` (relative
// to max |f|) are an error, not silently projected away.
inline PolarModes angular_modes(const RadialGrid& rgrid, const PolarFn& f, int k_max,
                                int n_theta = 512, double symmetry_tol = 1e-8) {
    if (k_max < 0) throw std::invalid_argument("angular_modes: k_max must be >= 0");
    if (n_theta < 4 * (k_max + 1))
        throw std::invalid_argument("angular_modes: too few angular samples for k_max");
    constexpr double pi = std::numbers::pi;
    const double dth = 2.0 * pi / n_theta;

    PolarModes pm;
    pm.rgrid = rgrid;
    pm.modes.assign(std::size_t(k_max) + 1, RadialProfile());
    std::vector<std::vector<double>> vals(std::size_t(k_max) + 1,
                                          std::vector<double>(rgrid.size(), 0.0));
    std::vector<double> row(n_theta);
    for (std::size_t i = 0; i < rgrid.size(); ++i) {
        double r = rgrid.r[i];
        double fmax = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            row[j] = f(r, j * dth);
            fmax = std::max(fmax, std::abs(row[j]));
        }
        // symmetry check: even (f(-th)=f(th)) and pi-periodic
        for (int j = 0; j < n_theta; ++j) {
            double even_def = std::abs(row[j] - row[(n_theta - j) % n_theta]);
            double per_def = std::abs(row[j] - row[(j + n_theta / 2) % n_theta]);
            if (std::max(even_def, per_def) > symmetry_tol * std::max(1e-300, fmax))
                throw std::invalid_argument(
                    "angular_modes: input not even/pi-periodic at r = " + std::to_string(r));
        }
        for (int k = 0; k <= k_max; ++k) {
            double s = 0.0;
            for (int j = 0; j < n_theta; ++j) s += row[j] * std::cos(2.0 * k * (j * dth));
            vals[k][i] = s * dth / (k == 0 ? 2.0 * pi : pi);
        }
    }
    for (int k = 0; k <= k_max; ++k) pm.modes[k] = RadialProfile(rgrid, std::move(vals[k]));
    return pm;
}

inline double modes_reconstruct(const PolarModes& pm, std::size_t node, double theta) {
    double s = 0.0;
    for (int k = 0; k <= pm.k_max(); ++k)
        s += pm.modes[k].values[node] * std::cos(2.0 * k * theta);
    return s;
}

// ---------------------------------------------------------------------------
// Stream-function modes of the Poisson problem: Delta psi = omega, solved
// mode-by-mode. For k >= 1 the decaying solution of
// psi'' + psi'/r - (2k)^2 psi / r^2 = omega_{2k} is
//   psi_m(r) = -(1/2m) [ r^{-m} int_0^r tau^{m+1} omega dtau
//                      + r^{m}  int_r^inf tau^{1-m} omega dtau ],  m = 2k.
// (Verified against the ODE residual oracle below; the tail must decay.)
// ---------------------------------------------------------------------------

namespace detail {

inline void require_decaying_tail(const RadialProfile& f, const char* what) {
    const auto& v = f.values;
    if (f.tail) return; // analytic tail supplied, convergence checked in tail_sums
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return;
    std::size_t n = v.size();
    if (std::abs(v[n - 1]) > 1e-10 * scale && std::abs(v[n - 1]) >= std::abs(v[n - 6]))
        throw std::runtime_error(std::string(what) + ": profile not decaying at r_max "
                                 "(tail integrals do not converge)");
}

} // namespace detail

inline PolarModes solve_stream_modes(const PolarModes& omega) {
    PolarModes psi;
    psi.rgrid = omega.rgrid;
    psi.modes.reserve(omega.modes.size());
    const auto& g = omega.rgrid;
    for (int k = 0; k <= omega.k_max(); ++k) {
        const RadialProfile& w = omega.modes[k];
        detail::require_decaying_tail(w, "solve_stream_modes");
        std::vector<double> out(g.size());
        if (k == 0) {
            // psi0(r) = int_0^r (1/s) int_0^s tau*w0(tau) dtau ds
            auto inner = radial::head_sums(w, 1.0); // int_0^{r_i} tau w dtau
            RadialProfile ip(g, std::move(inner));
            if (w.head) { // w ~ a r^p  =>  inner ~ a r^{p+2}/(p+2), term by term
                PowerLawSum hs;
                for (const PowerLaw& t : w.head->terms)
                    hs.terms.push_back({t.coeff / (t.exponent + 2.0), t.exponent + 2.0});
                ip.head = hs;
            }
            out = radial::head_sums(ip, -1.0);
        } else {
            const double m = 2.0 * k;
            auto head = radial::head_sums(w, m + 1.0);
            auto tail = radial::tail_sums(w, 1.0 - m);
            for (std::size_t i = 0; i < g.size(); ++i) {
                double r = g.r[i];
                out[i] = -(1.0 / (2.0 * m)) *
                         (std::pow(r, -m) * head[i] + std::pow(r, m) * tail[i]);
            }
        }
        psi.modes.emplace_back(g, std::move(out));
    }
    return psi;
}

// Residual of the k-th radial mode equation, psi'' + psi'/r - (2k)^2 psi/r^2
// - omega, by central differences in u = log r (where the operator becomes
// (psi_uu - (2k)^2 psi)/r^2). Endpoints carry no residual value.
inline RadialProfile mode_ode_residual(const RadialProfile& psi, const RadialProfile& omega,
                                       int k) {
    if (!psi.grid.same_as(omega.grid))
        throw std::invalid_argument("mode_ode_residual: grid mismatch");
    if (psi.grid.size() < 5) throw std::invalid_argument("mode_ode_residual: need >= 5 nodes");
    const auto& g = psi.grid;
    const double du = g.du, m2 = 4.0 * k * k;
    std::vector<double> res(g.size(), 0.0);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        double psi_uu = (psi.values[i + 1] - 2.0 * psi.values[i] + psi.values[i - 1]) / (du * du);
        res[i] = (psi_uu - m2 * psi.values[i]) / (g.r[i] * g.r[i]) - omega.values[i];
    }
    return RadialProfile(g, std::move(res));
}

// ---------------------------------------------------------------------------
// The most singular k = 1 contribution and its integration-by-parts identity:
//   S(r) = int_r^inf s^-5 int_0^s tau^3 w2(tau) dtau ds
//        = (1/4) int_r^inf w2(s)/s ds + (1/4) r^-4 int_0^r s^3 w2(s) ds.
// ---------------------------------------------------------------------------

struct SIntegralResult {
    double nested = 0.0;
    double by_parts = 0.0;
    double defect = 0.0; // relative difference
};

inline SIntegralResult s_integral(const std::function<double(double)>& w2, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("s_integral: r must be positive");
    quad::Fn inner_density = [&](double tau) { return tau * tau * tau * w2(tau); };
    quad::Fn outer = [&](double s) {
        // geometric split points keep the adaptive rule sampling every scale:
        // for huge s (probed by the improper outer quadrature) a plain [0, s]
        // rule would place all its nodes beyond unit-scale mass and miss it
        std::vector<double> pts;
        for (double p = s / 4.0; p > 1e-8 && pts.size() < 200; p /= 4.0) pts.push_back(p);
        double inner = quad::integrate_with_splits(inner_density, 0.0, s, pts, 1e-14, 1e-12);
        return inner / (s * s * s * s * s);
    };
    SIntegralResult res;
    res.nested = quad::integrate_to_inf(outer, r, 1e-13, 1e-10);
    quad::Fn over_s = [&](double s) { return w2(s) / s; };
    double t1 = quad::integrate_to_inf(over_s, r, 1e-14, 1e-12);
    double t2 = quad::integrate(inner_density, 0.0, r, 1e-14, 1e-12);
    res.by_parts = 0.25 * t1 + 0.25 * t2 / (r * r * r * r);
    double scale = std::max({std::abs(res.nested), std::abs(res.by_parts), 1e-300});
    res.defect = std::abs(res.nested - res.by_parts) / scale;
    return res;
}

// ---------------------------------------------------------------------------
// Cone inequality |cos(2k theta)| <= sqrt(2) |cos(2 theta)| on the sector.
// ---------------------------------------------------------------------------

inline double cone_inequality_min_slack(int k_max, const std::vector<double>& thetas) {
    double min_slack = std::numeric_limits<double>::infinity();
    for (double th : thetas) {
        double bound = std::numbers::sqrt2 * std::abs(std::cos(2.0 * th));
        for (int k = 1; k <= k_max; ++k)
            min_slack = std::min(min_slack, bound - std::abs(std::cos(2.0 * k * th)));
    }
    return min_slack;
}

inline std::vector<double> cone_theta_samples(std::size_t n) {
    constexpr double pi = std::numbers::pi;
    std::vector<double> th(n);
    for (std::size_t i = 0; i < n; ++i)
        th[i] = 3.0 * pi / 8.0 + (pi / 4.0) * double(i) / double(n - 1);
    return th;
}

// ---------------------------------------------------------------------------
// Angular profiles on the cone.
// ---------------------------------------------------------------------------

// Quintic bump on [center - width, center + width], peak value 1, vanishing
// with its first four derivatives at the boundary. The profile is read as an
// even, pi-periodic function of theta.
struct ConeAngularProfile {
    double center = std::numbers::pi / 2.0;
    double half_width = std::numbers::pi / 8.0;

    // fold theta to the canonical sector [0, pi/2] of even pi-periodic maps
    static double fold(double theta) {
        constexpr double pi = std::numbers::pi;
        double t = std::fmod(std::abs(theta), pi);
        return std::min(t, pi - t);
    }

    double gamma(double theta) const {
        double d = std::abs(fold(theta) - fold(center));
        if (d >= half_width) return 0.0;
        double q = (half_width - d) * (half_width + d); // = w^2 - d^2 >= 0
        double scale = std::pow(half_width * half_width, 5.0);
        return std::pow(q, 5.0) / scale;
    }

    // C^4 test weight on [3pi/8, 5pi/8] with unit integral:
    // ((th-a)(b-th))^5 / (L^11 / 2772), L = pi/4.
    static double test_weight(double theta) {
        constexpr double pi = std::numbers::pi;
        const double a = 3.0 * pi / 8.0, b = 5.0 * pi / 8.0, L = b - a;
        if (theta <= a || theta >= b) return 0.0;
        double norm = std::pow(L, 11.0) / 2772.0; // int_0^L (x(L-x))^5 dx
        return std::pow((theta - a) * (b - theta), 5.0) / norm;
    }
};

// ---------------------------------------------------------------------------
// Singular radial weight W2(r) = r^{alpha-1} / (1 + r^{2 alpha}) with the
// exact partial integral int_0^r W2 = arctan(r^alpha)/alpha.
// ---------------------------------------------------------------------------

struct SingularWeight {
    double alpha = 0.0;
    RadialProfile profile; // with analytic head/tail power laws attached

    double value(double r) const {
        return std::pow(r, alpha - 1.0) / (1.0 + std::pow(r, 2.0 * alpha));
    }
    double cumulative(double r) const { return std::atan(std::pow(r, alpha)) / alpha; }
};

inline SingularWeight singular_weight(double alpha, const RadialGrid& grid) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("singular_weight: alpha must lie in (0, 1/2)");
    SingularWeight w;
    w.alpha = alpha;
    w.profile = RadialProfile::from_function(
        grid, [alpha](double r) { return std::pow(r, alpha - 1.0) / (1.0 + std::pow(r, 2.0 * alpha)); });
    // Analytic continuations as geometric series in r^{+-2 alpha}:
    //   r -> 0:   W2 = sum_k (-1)^k r^{(2k+1) alpha - 1}
    //   r -> inf: W2 = sum_k (-1)^k r^{-(2k+1) alpha - 1}
    // truncated once the next term is negligible at the grid edge (the series
    // ratio there is r_min^{2 alpha}, resp. r_max^{-2 alpha}).
    PowerLawSum head, tail;
    double sign = 1.0;
    double head_ratio = std::pow(grid.r.front(), 2.0 * alpha);
    double tail_ratio = std::pow(grid.r.back(), -2.0 * alpha);
    double head_term = 1.0, tail_term = 1.0;
    for (int k = 0; k < 200; ++k) {
        if (head_term > 1e-14)
            head.terms.push_back({sign, (2.0 * k + 1.0) * alpha - 1.0});
        if (tail_term > 1e-14)
            tail.terms.push_back({sign, -(2.0 * k + 1.0) * alpha - 1.0});
        head_term *= head_ratio;
        tail_term *= tail_ratio;
        sign = -sign;
        if (head_term <= 1e-14 && tail_term <= 1e-14) break;
    }
    w.profile.head = head;
    w.profile.tail = tail;
    return w;
}

// ---------------------------------------------------------------------------
// Dominance check: W1 = L*(W2) must exceed half of its own leading term,
// i.e. margin(r) = W1(r) - c*arctan(r^alpha)/(2 alpha r) > 0 on the window.
// ---------------------------------------------------------------------------

struct DominanceResult {
    double alpha = 0.0, c = 0.0, C = 0.0;
    bool pass = false;
    double min_margin = 0.0;
    double argmin_r = 0.0;
    RadialProfile margin;
    RadialProfile w1;
};

inline DominanceResult dominance_check(double alpha, double c, double C, const RadialGrid& grid,
                                       double window_lo = 1e-6, double window_hi = 1e6) {
    SingularWeight w2 = singular_weight(alpha, grid);
    RadialProfile w1 = Lstar_apply(w2.profile, c, C);
    DominanceResult res;
    res.alpha = alpha;
    res.c = c;
    res.C = C;
    res.w1 = w1;
    std::vector<double> margin(grid.size());
    res.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double r = grid.r[i];
        margin[i] = w1.values[i] - c * w2.cumulative(r) / (2.0 * r);
        if (r >= window_lo && r <= window_hi && margin[i] < res.min_margin) {
            res.min_margin = margin[i];
            res.argmin_r = r;
        }
    }
    res.margin = RadialProfile(grid, std::move(margin));
    res.pass = res.min_margin > 0.0;
    return res;
}

struct DominanceScan {
    std::vector<DominanceResult> results;
    std::optional<double> passing_alpha; // first passing alpha in scan order
};

inline DominanceScan dominance_scan(const std::vector<double>& alphas, double c, double C,
                                    const RadialGrid& grid) {
    DominanceScan scan;
    for (double a : alphas) {
        DominanceResult r = dominance_check(a, c, C, grid);
        if (r.pass && !scan.passing_alpha) scan.passing_alpha = a;
        scan.results.push_back(std::move(r));
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Sign experiment: sample W~(x,y) = W2(r) Gamma(theta) on a Cartesian grid,
// apply R1^2 spectrally, and probe the minimum over the support inside an
// annulus kept away from the origin (resolution) and the box (periodization).
// ---------------------------------------------------------------------------

struct SignExperimentResult {
    double alpha = 0.0;
    double cone_center = 0.0;
    double min_on_support = 0.0;  // min of R1^2 W~ on supp W~ within the annulus
    double max_w = 0.0;           // max of W~
    double l1_mass = 0.0;
    double l2_mass = 0.0;         // L2 norm (not squared)
    double annulus_lo = 0.0, annulus_hi = 0.0;
    int n = 0;
    double box_half_width = 0.0;
};

inline SignExperimentResult ha_experiment(double alpha, const ConeAngularProfile& cone,
                                          const Grid& grid, double r_min = 1e-3,
                                          double r_max = 10.0, double annulus_lo = 0.05,
                                          double annulus_hi = 0.5) {
    if (grid.dim != 2 || grid.domain != DomainKind::line_box)
        throw std::invalid_argument("ha_experiment: 2-D line-box grid required");
    const double h = grid.spacing();
    if (annulus_lo < 3.0 * h)
        throw std::invalid_argument("ha_experiment: grid too coarse to resolve the probed "
                                    "annulus (need annulus_lo >= 3h)");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("ha_experiment: alpha must lie in (0, 1/2)");

    auto w2_val = [alpha](double r) {
        return std::pow(r, alpha - 1.0) / (1.0 + std::pow(r, 2.0 * alpha));
    };
    auto wt = [&](double x, double y) {
        double r = std::hypot(x, y);
        if (r < r_min || r > r_max) return 0.0;
        double g = cone.gamma(std::atan2(y, x));
        return g > 0.0 ? w2_val(r) * g : 0.0;
    };
    SpectralField w = SpectralField::from_function(grid, wt);
    SpectralField r11 = apply_multiplier(w, ops::riesz11());

    SignExperimentResult res;
    res.alpha = alpha;
    res.cone_center = cone.center;
    res.annulus_lo = annulus_lo;
    res.annulus_hi = annulus_hi;
    res.n = grid.n;
    res.box_half_width = grid.half_width();
    res.max_w = w.max_abs();
    res.l1_mass = l1_norm(w);
    res.l2_mass = std::sqrt(l2_norm_sq(w));
    res.min_on_support = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            double x = grid.x(i), y = grid.x(j);
            double r = std::hypot(x, y);
            if (r < annulus_lo || r > annulus_hi) continue;
            std::size_t idx = std::size_t(i) * grid.n + j;
            if (w(idx) <= 0.0) continue;
            res.min_on_support = std::min(res.min_on_support, r11(idx));
        }
    if (!std::isfinite(res.min_on_support))
        throw std::runtime_error("ha_experiment: annulus contains no support nodes");
    return res;
}

// ---------------------------------------------------------------------------
// Self-amplification monitor along a 2-D run: extract f = |omega_2(t,r)| from
// the trajectory states, form G(t) = int f W1 dr, and report the growth
// diagnostic D(t) = G(t) exp(-int_0^t G) together with a bounded-below flag.
// ---------------------------------------------------------------------------

struct KeyBoundReport {
    std::vector<double> times;
    std::vector<double> g;        // G(t)
    std::vector<double> growth;   // D(t) = G(t) * exp(-int_0^t G)
    bool degenerate = false;      // G identically ~0
    bool bounded_below = false;   // min D > 0.5 * D(0)
    double min_ratio = 0.0;       // min D / D(0)
};

namespace detail {

// bilinear interpolation of a 2-D periodic field
inline double bilinear(const SpectralField& f, double x, double y) {
    const Grid& g = f.grid();
    double h = g.spacing();
    double fx = (x - g.origin) / h, fy = (y - g.origin) / h;
    auto wrap = [&](long k) { long m = k % g.n; return int(m < 0 ? m + g.n : m); };
    long i0 = long(std::floor(fx)), j0 = long(std::floor(fy));
    double tx = fx - double(i0), ty = fy - double(j0);
    int i = wrap(i0), ip = wrap(i0 + 1), j = wrap(j0), jp = wrap(j0 + 1);
    auto at = [&](int a, int b) { return f(std::size_t(a) * g.n + b); };
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(ip, j) +
           (1 - tx) * ty * at(i, jp) + tx * ty * at(ip, jp);
}

} // namespace detail

inline KeyBoundReport key_bound_monitor(const Trajectory& traj, const RadialProfile& w1,
                                        int n_theta = 256) {
    if (traj.states.empty())
        throw std::invalid_argument("key_bound_monitor: trajectory has no stored states");
    if (traj.states.size() != traj.samples.size())
        throw std::invalid_argument("key_bound_monitor: states/samples mismatch");
    constexpr double pi = std::numbers::pi;
    const RadialGrid& rg = w1.grid;
    const double dth = 2.0 * pi / n_theta;

    KeyBoundReport rep;
    double gmax = 0.0;
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
        const SpectralField& state = traj.states[s];
        if (state.grid().dim != 2)
            throw std::invalid_argument("key_bound_monitor: 2-D states required");
        std::vector<double> f2(rg.size());
        for (std::size_t i = 0; i < rg.size(); ++i) {
            double r = rg.r[i], acc = 0.0;
            for (int j = 0; j < n_theta; ++j) {
                double th = j * dth;
                acc += detail::bilinear(state, r * std::cos(th), r * std::sin(th)) *
                       std::cos(2.0 * th);
            }
            f2[i] = std::abs(acc * dth / pi);
        }
        RadialProfile fp(rg, std::move(f2));
        double g = profile_inner(fp, w1);
        rep.times.push_back(traj.samples[s].t);
        rep.g.push_back(g);
        gmax = std::max(gmax, std::abs(g));
    }
    rep.degenerate = gmax < 1e-14;
    // D(t) = G exp(-int_0^t G), trapezoid accumulation of the exponent
    double acc = 0.0;
    rep.growth.resize(rep.g.size());
    rep.growth[0] = rep.g[0];
    for (std::size_t i = 1; i < rep.g.size(); ++i) {
        acc += 0.5 * (rep.g[i] + rep.g[i - 1]) * (rep.times[i] - rep.times[i - 1]);
        rep.growth[i] = rep.g[i] * std::exp(-acc);
    }
    if (!rep.degenerate && rep.growth[0] > 0.0) {
        double mn = rep.growth[0];
        for (double d : rep.growth) mn = std::min(mn, d);
        rep.min_ratio = mn / rep.growth[0];
        rep.bounded_below = rep.min_ratio > 0.0;
    }
    return rep;
}

} // namespace blowup
