#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blowup {

enum class DomainKind { torus, line_box };

// Uniform periodic grid on [origin, origin + period)^dim with the same point
// count per axis. Line domains (R, R^2) are handled as a periodic box of
// half-width L, i.e. period 2L centered at the origin; the truncation error
// is the caller's responsibility and L is recorded in reports.
struct Grid {
    int dim = 1;
    int n = 0;             // points per axis, even, >= 4
    double period = 2.0 * std::numbers::pi;
    double origin = 0.0;
    DomainKind domain = DomainKind::torus;

    static Grid torus_1d(int n) { return validated({1, n}); }
    static Grid torus_2d(int n) { return validated({2, n}); }
    static Grid line_1d(int n, double half_width) {
        return validated({1, n, 2.0 * half_width, -half_width, DomainKind::line_box});
    }
    static Grid line_2d(int n, double half_width) {
        return validated({2, n, 2.0 * half_width, -half_width, DomainKind::line_box});
    }

    double spacing() const { return period / n; }
    double half_width() const { return period / 2.0; }
    std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * n; }

    double x(int i) const { return origin + spacing() * i; }

    // Signed integer frequency for storage index k in [0, n).
    int signed_index(int k) const { return k <= n / 2 ? k : k - n; }
    // Continuous frequency xi = 2*pi*k_signed / period.
    double freq(int k) const {
        return 2.0 * std::numbers::pi * signed_index(k) / period;
    }
    bool is_nyquist(int k) const { return 2 * k == n; }

    bool same_shape(const Grid& o) const {
        return dim == o.dim && n == o.n && period == o.period && origin == o.origin;
    }

private:
    static Grid validated(Grid g) {
        if (g.n < 4 || g.n % 2 != 0)
            throw std::invalid_argument("Grid: points_per_axis must be even and >= 4, got " +
                                        std::to_string(g.n));
        if (!(g.period > 0.0)) throw std::invalid_argument("Grid: period must be positive");
        if (g.dim != 1 && g.dim != 2) throw std::invalid_argument("Grid: dimension must be 1 or 2");
        return g;
    }
};

} // namespace blowup
