#pragma once

#include <cmath>
#include <stdexcept>

#include "blowup/field.hpp"
#include "blowup/multiplier.hpp"

namespace blowup::oracles {

// Closed-form solution of the dt_omega = omega * H(omega) model for initial
// data whose Hilbert transform is known:
//   omega(x,t) = 4 w0 / ((2 - t*Hw0)^2 + t^2 w0^2)
// For w0 = -sin x (Hw0 = cos x) this blows up at t = 2.
inline double clm_exact(double w0, double hw0, double t) {
    double a = 2.0 - t * hw0;
    return 4.0 * w0 / (a * a + t * t * w0 * w0);
}

inline SpectralField clm_exact_field(const Grid& grid, double t) {
    return SpectralField::from_function(grid, [t](double x, double) {
        return clm_exact(-std::sin(x), std::cos(x), t);
    });
}

// Max-norm residual of dt_omega - omega*H(omega) for the closed form above,
// with dt_omega by a centered difference. Used to validate the oracle itself
// before it judges the simulator.
inline double clm_residual(const Grid& grid, double t, double eps = 1e-6) {
    SpectralField w = clm_exact_field(grid, t);
    SpectralField wp = clm_exact_field(grid, t + eps);
    SpectralField wm = clm_exact_field(grid, t - eps);
    SpectralField hw = apply_multiplier(w, ops::hilbert());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double dt_w = (wp(i) - wm(i)) / (2.0 * eps);
        worst = std::max(worst, std::abs(dt_w - w(i) * hw(i)));
    }
    return worst;
}

// Characteristics solution of dt_omega = omega * dx_omega: omega is constant
// along x(t) = x0 - t*w0(x0); valid until t = 1/max(w0'). The foot point is
// found by Newton iteration (the map is monotone pre-blow-up).
inline double burgers_exact(double x, double t, const std::function<double(double)>& w0,
                            const std::function<double(double)>& dw0) {
    double x0 = x;
    for (int it = 0; it < 100; ++it) {
        double f = x0 - t * w0(x0) - x;
        double fp = 1.0 - t * dw0(x0);
        if (!(fp > 0.0))
            throw std::runtime_error("burgers_exact: characteristic map degenerate (past blow-up?)");
        double step = f / fp;
        x0 -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x0))) return w0(x0);
    }
    throw std::runtime_error("burgers_exact: Newton iteration did not converge");
}

inline SpectralField burgers_exact_field(const Grid& grid, double t) {
    auto w0 = [](double x) { return std::sin(x); };
    auto dw0 = [](double x) { return std::cos(x); };
    return SpectralField::from_function(
        grid, [&](double x, double) { return burgers_exact(x, t, w0, dw0); });
}

// Residual of dt_omega - omega*dx_omega for the characteristics solution.
inline double burgers_residual(const Grid& grid, double t, double eps = 1e-6) {
    SpectralField w = burgers_exact_field(grid, t);
    SpectralField wp = burgers_exact_field(grid, t + eps);
    SpectralField wm = burgers_exact_field(grid, t - eps);
    SpectralField dx_w = apply_multiplier(w, ops::d_dx());
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double dt_w = (wp(i) - wm(i)) / (2.0 * eps);
        worst = std::max(worst, std::abs(dt_w - w(i) * dx_w(i)));
    }
    return worst;
}

} // namespace blowup::oracles
