#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "blowup/oracles.hpp"
#include "blowup/simulator.hpp"

using namespace blowup;
constexpr double pi = std::numbers::pi;

namespace {

double max_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a(i) - b(i)));
    return m;
}

Scenario clm_scenario(int n, double dt, double t_end) {
    Scenario sc;
    sc.grid = Grid::torus_1d(n);
    sc.op = ops::hilbert();
    sc.initial_data = [](double x, double) { return -std::sin(x); };
    sc.integrator = Integrator::exponential_euler;
    sc.dt = dt;
    sc.t_end = t_end;
    sc.sample_interval = 0.01;
    return sc;
}

} // namespace

TEST_CASE("zero operator leaves the state unchanged") {
    Grid g = Grid::torus_1d(64);
    auto f = SpectralField::from_function(g, [](double x, double) { return std::sin(x) + 2.0; });
    SpectralField g1 = step_exponential(f, ops::zero(1), 0.7);
    CHECK(max_diff(f, g1) < 1e-15);
}

TEST_CASE("minus identity step agrees with the pointwise ODE to O(dt^2)") {
    Grid g = Grid::torus_1d(16);
    auto one = SpectralField::from_function(g, [](double, double) { return 1.0; });
    double dt = 1e-2;
    SpectralField s = step_exponential(one, ops::neg_id(1), dt);
    double exact = 1.0 / (1.0 + dt); // w' = -w^2 from w0 = 1
    CHECK(std::abs(s(0) - std::exp(-dt)) < 1e-15);
    CHECK(std::abs(s(0) - exact) < dt * dt);
}

TEST_CASE("oracles validated by residual substitution") {
    Grid g = Grid::torus_1d(512);
    CHECK(oracles::clm_residual(g, 0.5) < 1e-6);
    CHECK(oracles::clm_residual(g, 1.5) < 1e-6);
    CHECK(oracles::burgers_residual(g, 0.3) < 1e-6);
    CHECK(oracles::burgers_residual(g, 0.8) < 1e-5);
}

TEST_CASE("one exponential step matches the clm oracle") {
    Grid g = Grid::torus_1d(256);
    auto w0 = SpectralField::from_function(g, [](double x, double) { return -std::sin(x); });
    double dt = 1e-3;
    SpectralField s = step_exponential(w0, ops::hilbert(), dt);
    CHECK(max_diff(s, oracles::clm_exact_field(g, dt)) < 1e-5);
}

TEST_CASE("exponential euler preserves sign and support exactly") {
    Grid g = Grid::torus_1d(128);
    auto w0 = SpectralField::from_function(g, [](double x, double) {
        double b = std::sin(x);
        return std::abs(b) < 0.3 ? 0.0 : b; // mixed signs with a fat zero set
    });
    SpectralField w = w0;
    for (int k = 0; k < 50; ++k) w = step_exponential(w, ops::hilbert(), 1e-3);
    for (std::size_t i = 0; i < w.values().size(); ++i) {
        if (w0(i) == 0.0) CHECK(w(i) == 0.0);
        else CHECK(w(i) * w0(i) > 0.0);
    }
}

TEST_CASE("blow-up decision on sup-norm series") {
    BlowupThresholds th;
    CHECK(detect_blowup({1.0, 10.0, 1e4, 1e7}, 1.0, th) == 3);
    CHECK(detect_blowup({1.0, 1.0, 1.0}, 1.0, th) == -1);
}

TEST_CASE("clm run detects blow-up near t = 2") {
    Scenario sc = clm_scenario(1024, 1e-3, 4.0);
    Trajectory traj = run(sc);
    REQUIRE(traj.termination == Termination::blowup_detected);
    CHECK(traj.blowup_lo >= 1.85);
    CHECK(traj.blowup_hi <= 2.15);
}

TEST_CASE("clm run matches the oracle in max norm before blow-up") {
    Scenario sc = clm_scenario(1024, 1e-4, 1.8); // 90% of the blow-up time
    Trajectory traj = run(sc);
    REQUIRE(traj.termination == Termination::reached_t_end);
    CHECK(max_diff(*traj.final_state, oracles::clm_exact_field(sc.grid, 1.8)) < 2e-3);
}

TEST_CASE("integrator convergence orders") {
    Grid g = Grid::torus_1d(256);
    auto w0 = SpectralField::from_function(g, [](double x, double) { return -std::sin(x); });
    auto err_at = [&](Integrator kind, double dt) {
        SpectralField w = w0;
        long steps = std::lround(0.5 / dt);
        for (long s = 0; s < steps; ++s)
            w = kind == Integrator::exponential_euler ? step_exponential(w, ops::hilbert(), dt)
                                                      : step_rk4(w, ops::hilbert(), dt, false);
        return max_diff(w, oracles::clm_exact_field(g, 0.5));
    };
    double e1 = err_at(Integrator::exponential_euler, 2e-3);
    double e2 = err_at(Integrator::exponential_euler, 1e-3);
    CHECK(e1 / e2 >= 1.8); // first order
    double r1 = err_at(Integrator::rk4, 2e-2);
    double r2 = err_at(Integrator::rk4, 1e-2);
    CHECK(r1 / r2 >= 14.0); // fourth order
}

TEST_CASE("burgers run detects blow-up within 5% of the characteristics time") {
    Scenario sc;
    sc.grid = Grid::torus_1d(1024);
    sc.op = ops::d_dx();
    sc.initial_data = [](double x, double) { return std::sin(x); };
    sc.integrator = Integrator::rk4;
    sc.dealias = true;
    sc.dt = 1e-3;
    sc.t_end = 2.0;
    sc.sample_interval = 0.01;
    sc.thresholds.tail_fraction = 1e-4;
    Trajectory traj = run(sc);
    REQUIRE(traj.termination == Termination::blowup_detected);
    double estimate = 0.5 * (traj.blowup_lo + traj.blowup_hi);
    CHECK(std::abs(estimate - 1.0) <= 0.05);
}

TEST_CASE("minus identity keeps nonnegative data pinched between 0 and the data") {
    Scenario sc;
    sc.grid = Grid::torus_1d(128);
    sc.op = ops::neg_id(1);
    sc.initial_data = [](double x, double) { return 1.0 + std::cos(x); };
    sc.dt = 1e-2;
    sc.t_end = 2.0;
    sc.sample_interval = 0.1;
    sc.keep_states = true;
    Trajectory traj = run(sc);
    REQUIRE(traj.termination == Termination::reached_t_end);
    auto w0 = SpectralField::from_function(sc.grid, sc.initial_data);
    for (const SpectralField& s : traj.states)
        for (std::size_t i = 0; i < s.values().size(); ++i) {
            CHECK(s(i) >= -1e-15);
            CHECK(s(i) <= w0(i) + 1e-15);
        }
}

TEST_CASE("energy diagnostics on closed forms") {
    Grid g = Grid::torus_2d(64);
    auto c = SpectralField::from_function(g, [](double, double) { return 3.0; });
    EnergyDiagnostics dc = energy_diagnostics(c);
    CHECK(dc.l2_r1 == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(dc.h1_log.has_value());
    CHECK(*dc.h1_log == Catch::Approx(0.0).margin(1e-12));

    // R1(cos x) on the torus is cos x, so |R1 w|^2 integrates to 2 pi^2
    auto f = SpectralField::from_function(g, [](double x, double) { return 2.0 + std::cos(x); });
    EnergyDiagnostics df = energy_diagnostics(f);
    CHECK(df.l2_r1 == Catch::Approx(2.0 * pi * pi).margin(1e-10));

    auto signed_f = SpectralField::from_function(g, [](double x, double) { return std::cos(x); });
    CHECK_FALSE(energy_diagnostics(signed_f).h1_log.has_value());
}

TEST_CASE("dissipative run: monotone energies") {
    Scenario sc;
    sc.grid = Grid::torus_2d(128);
    sc.op = ops::riesz11();
    sc.initial_data = [](double x, double y) { return 1.0 + 0.5 * std::cos(x) * std::cos(y); };
    sc.dt = 5e-3;
    sc.t_end = 0.5;
    sc.sample_interval = 0.025;
    sc.diagnostics.eq2_energy = true;
    sc.diagnostics.h1_log = true;
    Trajectory traj = run(sc);
    REQUIRE(traj.termination == Termination::reached_t_end);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        double tol_l1 = 1e-6 * traj.samples[0].l1;
        CHECK(traj.samples[i].l1 <= traj.samples[i - 1].l1 + tol_l1);
        CHECK(traj.samples[i].l2_r1 <= traj.samples[i - 1].l2_r1 + 1e-6 * traj.samples[0].l2_r1);
        CHECK(traj.samples[i].h1_log <= traj.samples[i - 1].h1_log + 1e-6 * (1.0 + traj.samples[0].h1_log));
    }
}

TEST_CASE("scenario validation") {
    Scenario sc;
    sc.op = ops::hilbert();
    sc.initial_data = [](double, double) { return 1.0; };
    sc.dt = -1.0;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc.dt = 1e-2;
    sc.diagnostics.m_functional = true; // no weight pair supplied
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("random signed fields: exponential steps never flip a sign") {
    std::mt19937_64 rng(4242);
    Grid g = Grid::torus_1d(64);
    std::normal_distribution<double> dist;
    std::vector<double> v(g.size());
    for (auto& x : v) x = dist(rng);
    SpectralField w0(g, v);
    SpectralField w = w0;
    for (int s = 0; s < 20; ++s) w = step_exponential(w, ops::hilbert(), 5e-3);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(w(i) * w0(i) >= 0.0);
}
