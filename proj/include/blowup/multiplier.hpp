#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "blowup/field.hpp"

namespace blowup {

// A Fourier multiplier: acts diagonally on coefficients via a symbol
// xi -> m(xi). The value at xi = 0 is stored separately (operators like H
// and the Riesz transforms are defined modulo constants; we set them to 0
// there). Symbols of real-to-real operators satisfy m(-xi) = conj(m(xi)).
struct MultiplierOp {
    std::string name;
    int dim = 1;
    std::function<Complex(double, double)> symbol; // (xi0, xi1); xi1 ignored in 1-D
    Complex zero_mode{0.0, 0.0};

    Complex eval(double xi0, double xi1 = 0.0) const {
        if (xi0 == 0.0 && xi1 == 0.0) return zero_mode;
        return symbol(xi0, xi1);
    }
};

// Formal L^2 adjoint: symbol conjugation.
inline MultiplierOp adjoint(const MultiplierOp& op) {
    if (!op.symbol) throw std::invalid_argument("adjoint: operator has no symbol");
    MultiplierOp a = op;
    a.name = op.name + "*";
    a.zero_mode = std::conj(op.zero_mode);
    a.symbol = [sym = op.symbol](double xi0, double xi1) { return std::conj(sym(xi0, xi1)); };
    return a;
}

// c'(xi) = m(xi) c(xi). A Nyquist index aliases +N/2 and -N/2, so the symbol
// there acts with its average over the aliased frequencies of each Nyquist
// axis (for i*xi this is the usual "zero the Nyquist derivative" convention);
// anything else makes real fields complex under real symbols that are odd
// across a single axis.
inline SpectralField apply_multiplier(const SpectralField& field, const MultiplierOp& op) {
    const Grid& g = field.grid();
    if (op.dim != g.dim)
        throw std::invalid_argument("apply_multiplier: operator dimension " +
                                    std::to_string(op.dim) + " vs grid dimension " +
                                    std::to_string(g.dim));
    std::vector<Complex> out(field.coefficients());
    auto check = [&](Complex m, double xi0, double xi1) {
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
            throw std::runtime_error("apply_multiplier: symbol of " + op.name +
                                     " not finite at xi=(" + std::to_string(xi0) + "," +
                                     std::to_string(xi1) + ")");
        return m;
    };
    if (g.dim == 1) {
        for (int k = 0; k < g.n; ++k) {
            double xi = g.freq(k);
            Complex m = check(op.eval(xi), xi, 0.0);
            if (g.is_nyquist(k)) m = 0.5 * (m + check(op.eval(-xi), -xi, 0.0));
            out[k] *= m;
        }
    } else {
        for (int k0 = 0; k0 < g.n; ++k0)
            for (int k1 = 0; k1 < g.n; ++k1) {
                double xi0 = g.freq(k0), xi1 = g.freq(k1);
                bool ny0 = g.is_nyquist(k0), ny1 = g.is_nyquist(k1);
                Complex m = check(op.eval(xi0, xi1), xi0, xi1);
                if (ny0) m = 0.5 * (m + check(op.eval(-xi0, xi1), -xi0, xi1));
                if (ny1) {
                    Complex flipped = check(op.eval(xi0, -xi1), xi0, -xi1);
                    if (ny0)
                        flipped = 0.5 * (flipped + check(op.eval(-xi0, -xi1), -xi0, -xi1));
                    m = 0.5 * (m + flipped);
                }
                out[std::size_t(k0) * g.n + k1] *= m;
            }
    }
    return SpectralField::from_coefficients(g, out);
}

// Operator catalog.
namespace ops {

inline MultiplierOp d_dx() {
    return {"d_dx", 1, [](double xi, double) { return Complex(0.0, xi); }, Complex(0.0, 0.0)};
}

inline MultiplierOp hilbert() {
    // H f(x) = (1/pi) p.v. int f(y)/(x-y) dy, symbol -i sgn(xi); H(cos) = sin.
    return {"hilbert", 1,
            [](double xi, double) { return Complex(0.0, xi > 0 ? -1.0 : 1.0); },
            Complex(0.0, 0.0)};
}

inline MultiplierOp riesz(int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("riesz: component must be 1 or 2");
    return {"riesz" + std::to_string(j), 2,
            [j](double xi0, double xi1) {
                double mag = std::hypot(xi0, xi1);
                return Complex(0.0, -(j == 1 ? xi0 : xi1) / mag);
            },
            Complex(0.0, 0.0)};
}

inline MultiplierOp riesz12() {
    return {"riesz12", 2,
            [](double xi0, double xi1) {
                return Complex(-xi0 * xi1 / (xi0 * xi0 + xi1 * xi1), 0.0);
            },
            Complex(0.0, 0.0)};
}

inline MultiplierOp riesz11() {
    return {"riesz11", 2,
            [](double xi0, double xi1) {
                return Complex(-xi0 * xi0 / (xi0 * xi0 + xi1 * xi1), 0.0);
            },
            Complex(0.0, 0.0)};
}

inline MultiplierOp riesz22() {
    return {"riesz22", 2,
            [](double xi0, double xi1) {
                return Complex(-xi1 * xi1 / (xi0 * xi0 + xi1 * xi1), 0.0);
            },
            Complex(0.0, 0.0)};
}

inline MultiplierOp neg_id(int dim) {
    return {"neg_id", dim, [](double, double) { return Complex(-1.0, 0.0); }, Complex(-1.0, 0.0)};
}

inline MultiplierOp zero(int dim) {
    return {"zero", dim, [](double, double) { return Complex(0.0, 0.0); }, Complex(0.0, 0.0)};
}

inline MultiplierOp by_name(const std::string& name, int dim) {
    if (name == "d_dx") return d_dx();
    if (name == "hilbert") return hilbert();
    if (name == "riesz1") return riesz(1);
    if (name == "riesz2") return riesz(2);
    if (name == "riesz12") return riesz12();
    if (name == "riesz11") return riesz11();
    if (name == "riesz22") return riesz22();
    if (name == "neg_id") return neg_id(dim);
    if (name == "zero") return zero(dim);
    throw std::invalid_argument("unknown operator: " + name);
}

} // namespace ops

} // namespace blowup
