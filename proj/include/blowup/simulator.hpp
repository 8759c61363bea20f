#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "blowup/field.hpp"
#include "blowup/multiplier.hpp"
#include "blowup/weights.hpp"

namespace blowup {

enum class Integrator { exponential_euler, rk4 };
enum class Termination { reached_t_end, blowup_detected, step_failure };

inline std::string to_string(Termination t) {
    switch (t) {
        case Termination::reached_t_end: return "reached_t_end";
        case Termination::blowup_detected: return "blowup_detected";
        default: return "step_failure";
    }
}

struct BlowupThresholds {
    double sup_factor = 1e6;     // sup-norm trigger relative to initial sup
    double tail_fraction = 1e-2; // spectral tail energy fraction trigger
    int max_halvings = 20;       // dt-halving cascade depth trigger
};

struct DiagnosticsSelection {
    bool m_functional = false; // needs a weight pair
    bool eq2_energy = false;   // L1/L2_R1/dissipation-flux family
    bool h1_log = false;       // needs strictly positive state
};

struct Scenario {
    Grid grid = Grid::torus_1d(256);
    MultiplierOp op;
    RealFn initial_data;
    std::optional<WeightPair> weight_pair;
    Integrator integrator = Integrator::exponential_euler;
    bool dealias = false; // 2/3 truncation of the quadratic product (rk4 path)
    double dt = 1e-3;
    double t_end = 1.0;
    double sample_interval = 1e-2;
    BlowupThresholds thresholds;
    DiagnosticsSelection diagnostics;
    bool keep_states = false;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("Scenario: dt must be positive");
        if (!(t_end > 0.0)) throw std::invalid_argument("Scenario: t_end must be positive");
        if (!(sample_interval > 0.0))
            throw std::invalid_argument("Scenario: sample_interval must be positive");
        if (!(thresholds.sup_factor > 0.0) || !(thresholds.tail_fraction > 0.0) ||
            thresholds.max_halvings <= 0)
            throw std::invalid_argument("Scenario: blow-up thresholds must be positive");
        if (diagnostics.m_functional && !weight_pair)
            throw std::invalid_argument("Scenario: M-functional diagnostic needs a weight pair");
        if (!initial_data) throw std::invalid_argument("Scenario: initial data missing");
        if (!op.symbol) throw std::invalid_argument("Scenario: operator missing");
    }
};

struct Sample {
    double t = 0.0;
    double sup = 0.0;
    double l1 = 0.0;
    double tail_fraction = 0.0;
    double m_functional = 0.0;
    double l2_r1 = 0.0;       // |R1 w|_L2^2
    double dissip_flux = 0.0; // integral of w * (R1^2 w)^2
    double h1_log = 0.0;      // |grad log w|_L2^2 (positive data only)
};

struct Trajectory {
    std::vector<Sample> samples;
    std::optional<SpectralField> final_state;
    std::vector<SpectralField> states; // populated when keep_states
    Termination termination = Termination::reached_t_end;
    double blowup_lo = 0.0, blowup_hi = 0.0; // bracket, lower end = last healthy time
    std::string detail; // trigger / failure description
};

struct StepFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One exponential-Euler step w <- w * exp(dt * R(w)). Node-wise sign and
// support of w are preserved exactly.
inline SpectralField step_exponential(const SpectralField& state, const MultiplierOp& op,
                                      double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_exponential: dt must be positive");
    SpectralField r = apply_multiplier(state, op);
    std::vector<double> out(state.values());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double e = std::exp(dt * r(i));
        out[i] *= e;
        if (!std::isfinite(out[i]))
            throw StepFailure("exponential step overflow: node value " + std::to_string(state(i)) +
                              ", exponent " + std::to_string(dt * r(i)));
    }
    return SpectralField(state.grid(), std::move(out));
}

namespace detail {

// 2/3-rule truncation of a field's coefficients.
inline SpectralField dealias_23(const SpectralField& f) {
    const Grid& g = f.grid();
    const int cut = g.n / 3;
    std::vector<Complex> c(f.coefficients());
    if (g.dim == 1) {
        for (int k = 0; k < g.n; ++k)
            if (std::abs(g.signed_index(k)) > cut) c[k] = 0.0;
    } else {
        for (int k0 = 0; k0 < g.n; ++k0)
            for (int k1 = 0; k1 < g.n; ++k1)
                if (std::abs(g.signed_index(k0)) > cut || std::abs(g.signed_index(k1)) > cut)
                    c[std::size_t(k0) * g.n + k1] = 0.0;
    }
    return SpectralField::from_coefficients(g, c);
}

inline SpectralField rhs(const SpectralField& w, const MultiplierOp& op, bool dealias) {
    SpectralField r = apply_multiplier(w, op);
    std::vector<double> prod(w.values());
    for (std::size_t i = 0; i < prod.size(); ++i) {
        prod[i] *= r(i);
        if (!std::isfinite(prod[i])) throw StepFailure("rhs overflow at a node");
    }
    SpectralField f(w.grid(), std::move(prod));
    return dealias ? dealias_23(f) : f;
}

inline SpectralField axpy(const SpectralField& a, double s, const SpectralField& b) {
    std::vector<double> v(a.values());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += s * b(i);
        if (!std::isfinite(v[i])) throw StepFailure("state overflow at a node");
    }
    return SpectralField(a.grid(), std::move(v));
}

} // namespace detail

inline SpectralField step_rk4(const SpectralField& state, const MultiplierOp& op, double dt,
                              bool dealias) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    SpectralField k1 = detail::rhs(state, op, dealias);
    SpectralField k2 = detail::rhs(detail::axpy(state, dt / 2.0, k1), op, dealias);
    SpectralField k3 = detail::rhs(detail::axpy(state, dt / 2.0, k2), op, dealias);
    SpectralField k4 = detail::rhs(detail::axpy(state, dt, k3), op, dealias);
    std::vector<double> v(state.values());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += dt / 6.0 * (k1(i) + 2.0 * k2(i) + 2.0 * k3(i) + k4(i));
        if (!std::isfinite(v[i])) throw StepFailure("rk4 step overflow at a node");
    }
    return SpectralField(state.grid(), std::move(v));
}

// Threshold decision over a sup-norm window. Returns the index of the first
// sample crossing the sup threshold, or -1.
inline long detect_blowup(const std::vector<double>& sup_series, double initial_sup,
                          const BlowupThresholds& thresholds) {
    for (std::size_t i = 0; i < sup_series.size(); ++i)
        if (sup_series[i] > thresholds.sup_factor * initial_sup) return long(i);
    return -1;
}

struct EnergyDiagnostics {
    double l1 = 0.0;
    double l2_r1 = 0.0;
    double dissip_flux = 0.0;
    std::optional<double> h1_log; // absent when min w <= 0
};

inline EnergyDiagnostics energy_diagnostics(const SpectralField& state) {
    if (state.grid().dim != 2)
        throw std::invalid_argument("energy_diagnostics: 2-D grid required");
    EnergyDiagnostics d;
    d.l1 = l1_norm(state);
    d.l2_r1 = l2_norm_sq(apply_multiplier(state, ops::riesz(1)));
    SpectralField r11 = apply_multiplier(state, ops::riesz11());
    const double cell = std::pow(state.grid().spacing(), 2);
    double flux = 0.0, minw = state(0);
    for (std::size_t i = 0; i < state.values().size(); ++i) {
        flux += state(i) * r11(i) * r11(i);
        minw = std::min(minw, state(i));
    }
    d.dissip_flux = flux * cell;
    if (minw > 0.0) {
        std::vector<double> lg(state.values().size());
        for (std::size_t i = 0; i < lg.size(); ++i) lg[i] = std::log(state(i));
        SpectralField lf(state.grid(), std::move(lg));
        // grad components via the 1-D derivative symbol along each axis
        MultiplierOp ddx{"ddx0", 2, [](double xi0, double) { return Complex(0.0, xi0); }, {}};
        MultiplierOp ddy{"ddx1", 2, [](double, double xi1) { return Complex(0.0, xi1); }, {}};
        d.h1_log = l2_norm_sq(apply_multiplier(lf, ddx)) + l2_norm_sq(apply_multiplier(lf, ddy));
    }
    return d;
}

namespace detail {

struct Trigger {
    bool fired = false;
    std::string reason;
};

inline Trigger check_triggers(const SpectralField& w, double initial_sup, double band_lo,
                              const BlowupThresholds& th) {
    double sup = w.max_abs();
    if (sup > th.sup_factor * initial_sup)
        return {true, "sup-norm " + std::to_string(sup) + " exceeded " +
                          std::to_string(th.sup_factor) + " x initial"};
    double tail = w.tail_energy_fraction(band_lo);
    if (tail > th.tail_fraction)
        return {true, "spectral tail fraction " + std::to_string(tail) + " exceeded " +
                          std::to_string(th.tail_fraction)};
    return {};
}

} // namespace detail

inline Trajectory run(const Scenario& sc) {
    sc.validate();
    Trajectory traj;
    SpectralField w = SpectralField::from_function(sc.grid, sc.initial_data);
    const double initial_sup = w.max_abs();
    if (initial_sup == 0.0) {
        // zero data: nothing evolves, record and return
    }
    // Tail band: top third of the retained modes (after 2/3 truncation when
    // de-aliasing is active).
    const double k_active = sc.dealias ? sc.grid.n / 3.0 : sc.grid.n / 2.0;
    const double band_lo = (2.0 / 3.0) * k_active;

    std::optional<SpectralField> w1_sampled;
    double mass = 1.0;
    if (sc.weight_pair) {
        w1_sampled = sc.weight_pair->sample_w1();
        mass = sc.weight_pair->normalization;
    }

    auto record = [&](double t, const SpectralField& f) {
        Sample s;
        s.t = t;
        s.sup = f.max_abs();
        s.l1 = l1_norm(f);
        s.tail_fraction = f.tail_energy_fraction(band_lo);
        if (sc.diagnostics.m_functional) s.m_functional = inner_product(f, *w1_sampled) / mass;
        if (sc.diagnostics.eq2_energy) {
            EnergyDiagnostics d = energy_diagnostics(f);
            s.l2_r1 = d.l2_r1;
            s.dissip_flux = d.dissip_flux;
            if (sc.diagnostics.h1_log) {
                if (!d.h1_log)
                    throw std::invalid_argument("run: H1-log diagnostic needs positive data");
                s.h1_log = *d.h1_log;
            }
        }
        traj.samples.push_back(s);
        if (sc.keep_states) traj.states.push_back(f);
    };

    auto advance = [&](const SpectralField& f, double dt) {
        return sc.integrator == Integrator::exponential_euler
                   ? step_exponential(f, sc.op, dt)
                   : step_rk4(f, sc.op, dt, sc.dealias);
    };

    record(0.0, w);
    const long steps_per_sample =
        std::max<long>(1, std::lround(sc.sample_interval / sc.dt));
    double t = 0.0;
    long step_index = 0;
    SpectralField prev = w; // state at the last healthy step
    double prev_t = 0.0;

    try {
        while (t < sc.t_end - 1e-12 * sc.t_end) {
            double dt = std::min(sc.dt, sc.t_end - t);
            prev = w;
            prev_t = t;
            int halvings = 0;
            for (;;) {
                try {
                    w = advance(prev, dt);
                    break;
                } catch (const StepFailure&) {
                    dt /= 2.0;
                    if (++halvings > sc.thresholds.max_halvings) {
                        traj.termination = Termination::blowup_detected;
                        traj.blowup_lo = prev_t;
                        traj.blowup_hi = prev_t + sc.dt;
                        traj.detail = "dt-halving cascade exceeded depth " +
                                      std::to_string(sc.thresholds.max_halvings);
                        traj.final_state = prev;
                        return traj;
                    }
                }
            }
            t += dt;
            ++step_index;

            auto trig = detail::check_triggers(w, initial_sup, band_lo, sc.thresholds);
            if (trig.fired) {
                // bisect the last step to tighten the bracket
                double lo = prev_t, hi = t;
                SpectralField lo_state = prev;
                for (int it = 0; it < 8 && hi - lo > 1e-12; ++it) {
                    double mid = 0.5 * (lo + hi);
                    SpectralField ms = advance(lo_state, mid - lo);
                    if (detail::check_triggers(ms, initial_sup, band_lo, sc.thresholds).fired) {
                        hi = mid;
                    } else {
                        lo = mid;
                        lo_state = ms;
                    }
                }
                traj.termination = Termination::blowup_detected;
                traj.blowup_lo = lo;
                traj.blowup_hi = hi;
                traj.detail = trig.reason;
                traj.final_state = w;
                record(t, w);
                return traj;
            }
            if (step_index % steps_per_sample == 0) record(t, w);
        }
    } catch (const StepFailure& e) {
        traj.termination = Termination::step_failure;
        traj.detail = e.what();
        traj.final_state = prev;
        return traj;
    }
    if (traj.samples.back().t < t - 1e-12) record(t, w);
    traj.termination = Termination::reached_t_end;
    traj.final_state = w;
    return traj;
}

} // namespace blowup
