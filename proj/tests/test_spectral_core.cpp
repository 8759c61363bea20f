#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "blowup/certificate.hpp" // eval_spectral_1d, upsample2
#include "blowup/field.hpp"
#include "blowup/multiplier.hpp"

using namespace blowup;
constexpr double pi = std::numbers::pi;

namespace {

// random band-limited real field (top third of modes left empty so that
// multiplier compositions stay well resolved)
SpectralField random_field(const Grid& g, std::mt19937_64& rng, bool mean_zero = false) {
    std::normal_distribution<double> dist;
    int cut = g.n / 3;
    auto f = SpectralField::from_function(g, [](double, double) { return 0.0; });
    std::vector<Complex> c(f.coefficients());
    auto set_pair = [&](int k0, int k1, Complex v) {
        auto idx = [&](int a, int b) {
            a = (a % g.n + g.n) % g.n;
            b = (b % g.n + g.n) % g.n;
            return g.dim == 1 ? std::size_t(a) : std::size_t(a) * g.n + b;
        };
        c[idx(k0, k1)] = v;
        c[idx(-k0, -k1)] = std::conj(v);
    };
    if (g.dim == 1) {
        for (int k = 1; k <= cut; ++k) set_pair(k, 0, Complex(dist(rng), dist(rng)));
        if (!mean_zero) c[0] = dist(rng);
    } else {
        for (int k0 = -cut; k0 <= cut; ++k0)
            for (int k1 = 1; k1 <= cut; ++k1) set_pair(k0, k1, Complex(dist(rng), dist(rng)));
        for (int k0 = 1; k0 <= cut; ++k0) set_pair(k0, 0, Complex(dist(rng), dist(rng)));
        if (!mean_zero) c[0] = dist(rng);
    }
    return SpectralField::from_coefficients(g, c);
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a(i) - b(i)));
    return m;
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid::torus_1d(3), std::invalid_argument);
    CHECK_THROWS_AS(Grid::torus_1d(6 | 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid::line_1d(64, 0.0), std::invalid_argument);
    Grid g = Grid::line_1d(64, 32.0);
    CHECK(g.period == Catch::Approx(64.0));
    CHECK(g.x(0) == Catch::Approx(-32.0));
    CHECK(g.freq(1) == Catch::Approx(pi / 32.0));
    CHECK(g.signed_index(63) == -1);
    CHECK(g.is_nyquist(32));
}

TEST_CASE("round trip and conjugate symmetry") {
    std::mt19937_64 rng(2024);
    for (const Grid& g : {Grid::torus_1d(64), Grid::torus_2d(32)}) {
        SpectralField f = random_field(g, rng);
        SpectralField back = SpectralField::from_coefficients(g, f.coefficients());
        CHECK(max_diff(f, back) <= 1e-12 * f.max_abs());
        const auto& c = f.coefficients();
        if (g.dim == 1) {
            for (int k = 1; k < g.n; ++k) {
                Complex a = c[k], b = std::conj(c[g.n - k]);
                CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
            }
        }
    }
}

TEST_CASE("non-finite values rejected") {
    Grid g = Grid::torus_1d(8);
    std::vector<double> v(8, 1.0);
    v[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(SpectralField(g, v), std::invalid_argument);
}

TEST_CASE("derivative and Hilbert transform on single modes") {
    Grid g = Grid::torus_1d(128);
    auto sinx = SpectralField::from_function(g, [](double x, double) { return std::sin(x); });
    auto cosx = SpectralField::from_function(g, [](double x, double) { return std::cos(x); });
    CHECK(max_diff(apply_multiplier(sinx, ops::d_dx()), cosx) < 1e-12);
    CHECK(max_diff(apply_multiplier(cosx, ops::hilbert()), sinx) < 1e-12);
}

TEST_CASE("composed Riesz transform of the torus weight") {
    Grid g = Grid::torus_2d(64);
    auto w2 = SpectralField::from_function(
        g, [](double x, double y) { return 1.0 + std::cos(x) * std::cos(y); });
    auto expect = SpectralField::from_function(
        g, [](double x, double y) { return 0.5 * std::sin(x) * std::sin(y); });
    CHECK(max_diff(apply_multiplier(w2, ops::riesz12()), expect) < 1e-12);
}

TEST_CASE("zero-mode rule kills constants under singular symbols") {
    Grid g = Grid::torus_2d(16);
    auto one = SpectralField::from_function(g, [](double, double) { return 1.0; });
    CHECK(apply_multiplier(one, ops::riesz11()).max_abs() < 1e-14);
    CHECK(apply_multiplier(one, ops::riesz12()).max_abs() < 1e-14);
    Grid g1 = Grid::torus_1d(16);
    auto one1 = SpectralField::from_function(g1, [](double, double) { return 1.0; });
    CHECK(apply_multiplier(one1, ops::hilbert()).max_abs() < 1e-14);
}

TEST_CASE("H squared is minus identity on mean-zero fields") {
    Grid g = Grid::torus_1d(256);
    std::mt19937_64 rng(7);
    SpectralField f = random_field(g, rng, /*mean_zero=*/true);
    SpectralField hh = apply_multiplier(apply_multiplier(f, ops::hilbert()), ops::hilbert());
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
        worst = std::max(worst, std::abs(hh(i) + f(i)));
    CHECK(worst <= 1e-12 * f.max_abs());
}

TEST_CASE("Riesz squares sum to minus identity on mean-zero fields") {
    Grid g = Grid::torus_2d(64);
    std::mt19937_64 rng(11);
    SpectralField f = random_field(g, rng, /*mean_zero=*/true);
    SpectralField s = apply_multiplier(f, ops::riesz11());
    SpectralField t = apply_multiplier(f, ops::riesz22());
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
        worst = std::max(worst, std::abs(s(i) + t(i) + f(i)));
    CHECK(worst <= 1e-12 * f.max_abs());
}

TEST_CASE("adjointness of the operator catalog") {
    std::mt19937_64 rng(99);
    Grid g1 = Grid::torus_1d(128);
    Grid g2 = Grid::torus_2d(48);
    auto check_adj = [&](const MultiplierOp& op, const Grid& g) {
        SpectralField f = random_field(g, rng), h = random_field(g, rng);
        double lhs = inner_product(apply_multiplier(f, op), h);
        double rhs = inner_product(f, apply_multiplier(h, adjoint(op)));
        double scale = std::sqrt(l2_norm_sq(f) * l2_norm_sq(h));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    };
    check_adj(ops::d_dx(), g1);
    check_adj(ops::hilbert(), g1);
    check_adj(ops::neg_id(1), g1);
    check_adj(ops::riesz(1), g2);
    check_adj(ops::riesz(2), g2);
    check_adj(ops::riesz12(), g2);
    check_adj(ops::riesz11(), g2);
}

TEST_CASE("adjoint examples: d_dx, H, riesz12") {
    // d_dx -> -d_dx, H -> -H, riesz12 self-adjoint
    CHECK(adjoint(ops::d_dx()).eval(3.0) == Complex(0.0, -3.0));
    CHECK(adjoint(ops::hilbert()).eval(2.0) == Complex(0.0, 1.0));
    CHECK(adjoint(ops::riesz12()).eval(1.0, 2.0) == ops::riesz12().eval(1.0, 2.0));
}

TEST_CASE("negativity of R1 squared") {
    Grid g = Grid::torus_2d(48);
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 25; ++trial) {
        SpectralField f = random_field(g, rng);
        double q = inner_product(f, apply_multiplier(f, ops::riesz11()));
        CHECK(q <= 1e-12 * l2_norm_sq(f));
    }
}

TEST_CASE("inner product quadrature") {
    Grid g = Grid::torus_1d(128);
    auto sinx = SpectralField::from_function(g, [](double x, double) { return std::sin(x); });
    auto cosx = SpectralField::from_function(g, [](double x, double) { return std::cos(x); });
    CHECK(inner_product(sinx, sinx) == Catch::Approx(pi).margin(1e-12));
    CHECK(std::abs(inner_product(sinx, cosx)) < 1e-12);
    Grid other = Grid::torus_1d(64);
    auto small = SpectralField::from_function(other, [](double x, double) { return x; });
    CHECK_THROWS_AS(inner_product(sinx, small), std::invalid_argument);
}

TEST_CASE("dimension mismatch rejected") {
    Grid g = Grid::torus_1d(16);
    auto f = SpectralField::from_function(g, [](double x, double) { return std::sin(x); });
    CHECK_THROWS_AS(apply_multiplier(f, ops::riesz(1)), std::invalid_argument);
}

TEST_CASE("half-cell shifted sampling is spectral") {
    Grid g = Grid::torus_1d(64);
    auto f = SpectralField::from_function(g, [](double x, double) { return std::sin(3.0 * x); });
    auto shifted = f.shifted_values();
    double h2 = g.spacing() / 2.0;
    for (int i = 0; i < g.n; ++i)
        CHECK(shifted[i] == Catch::Approx(std::sin(3.0 * (g.x(i) + h2))).margin(1e-12));
}

TEST_CASE("spectral point evaluation and upsampling") {
    Grid g = Grid::torus_1d(32);
    auto f = SpectralField::from_function(
        g, [](double x, double) { return std::sin(2.0 * x) + 0.3 * std::cos(5.0 * x); });
    for (double x : {0.13, 1.7, 4.9})
        CHECK(eval_spectral_1d(f, x) ==
              Catch::Approx(std::sin(2.0 * x) + 0.3 * std::cos(5.0 * x)).margin(1e-12));
    SpectralField up = upsample2(f);
    Grid g2 = up.grid();
    REQUIRE(g2.n == 64);
    for (int i = 0; i < g2.n; ++i)
        CHECK(up(i) ==
              Catch::Approx(std::sin(2.0 * g2.x(i)) + 0.3 * std::cos(5.0 * g2.x(i))).margin(1e-12));
}

TEST_CASE("tail energy fraction") {
    Grid g = Grid::torus_1d(64);
    auto low = SpectralField::from_function(g, [](double x, double) { return std::cos(2.0 * x); });
    CHECK(low.tail_energy_fraction(21.0) == Catch::Approx(0.0).margin(1e-15));
    auto high = SpectralField::from_function(g, [](double x, double) { return std::cos(30.0 * x); });
    CHECK(high.tail_energy_fraction(21.0) > 0.9);
}
