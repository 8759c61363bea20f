#include <catch_amalgamated.hpp>

#include <numbers>

#include "blowup/certificate.hpp"

using namespace blowup;
constexpr double pi = std::numbers::pi;

namespace {

HypothesisReport clm_report(int n) {
    Grid g = Grid::torus_1d(n);
    WeightPair pair = catalog_pair("clm_torus", g);
    auto omega0 = SpectralField::from_function(g, [](double x, double) { return -std::sin(x); });
    return check_hypothesis(omega0, pair);
}

} // namespace

TEST_CASE("clm torus certificate values") {
    HypothesisReport rep = clm_report(1024);
    CHECK(rep.sign_ok);
    CHECK(rep.pairing == Catch::Approx(0.5).margin(1e-12));
    CHECK(rep.integrable);
    CHECK(rep.jensen_J == Catch::Approx(-1.0 - std::log(2.0)).margin(1e-8));
    BlowupCertificate cert = issue_certificate(rep, "closed_form");
    CHECK(cert.c_star == Catch::Approx(1.0 / (2.0 * std::numbers::e)).margin(1e-8));
    CHECK(cert.t_bound == Catch::Approx(2.0 * std::numbers::e).margin(1e-7));
    CHECK(cert.t_bound * cert.c_star == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("jensen quadrature agrees across resolutions") {
    double j1 = clm_report(512).jensen_J;
    double j2 = clm_report(1024).jensen_J;
    CHECK(std::abs(j1 - j2) <= 1e-6 * std::abs(j2));
}

TEST_CASE("flipped sign is refused with the failing condition named") {
    Grid g = Grid::torus_1d(256);
    WeightPair pair = catalog_pair("clm_torus", g);
    auto omega0 = SpectralField::from_function(g, [](double x, double) { return std::sin(x); });
    HypothesisReport rep = check_hypothesis(omega0, pair);
    CHECK_FALSE(rep.sign_ok);
    try {
        issue_certificate(rep, pair.provenance);
        FAIL("expected refusal");
    } catch (const CertificateRefusal& e) {
        CHECK(e.condition == "sign_condition");
    }
}

TEST_CASE("zero data is refused on the pairing condition") {
    Grid g = Grid::torus_1d(256);
    WeightPair pair = catalog_pair("clm_torus", g);
    auto omega0 = SpectralField::from_function(g, [](double, double) { return 0.0; });
    HypothesisReport rep = check_hypothesis(omega0, pair);
    CHECK(rep.pairing == Catch::Approx(0.0).margin(1e-14));
    try {
        issue_certificate(rep, pair.provenance);
        FAIL("expected refusal");
    } catch (const CertificateRefusal& e) {
        CHECK(e.condition == "pairing");
    }
}

TEST_CASE("certificate arithmetic on hand-made reports") {
    HypothesisReport rep;
    rep.sign_ok = true;
    rep.integrable = true;
    rep.pairing = 1.0;
    rep.jensen_J = 0.0;
    CHECK(issue_certificate(rep, "closed_form").t_bound == Catch::Approx(1.0));
    rep.jensen_J = -std::log(2.0);
    BlowupCertificate c = issue_certificate(rep, "closed_form");
    CHECK(c.c_star == Catch::Approx(0.5));
    CHECK(c.t_bound == Catch::Approx(2.0));
}

TEST_CASE("burgers line data passes the hypothesis") {
    // box kept small: beyond |x| ~ 5 the Gaussian factor of the data drops
    // below the spectral interpolation noise floor and the log integrand
    // becomes unresolvable (the hypothesis check then rightly refuses)
    Grid g = Grid::line_1d(1024, 4.0);
    WeightPair pair = catalog_pair("burgers_line", g);
    auto omega0 = SpectralField::from_function(g, [&](double x, double) {
        return pair.w1(x, 0.0) * std::exp(-x * x);
    });
    HypothesisReport rep = check_hypothesis(omega0, pair);
    CHECK(rep.sign_ok);
    CHECK(rep.integrable);
    CHECK(rep.pairing > 0.0);
    CHECK(std::isfinite(rep.jensen_J));
    CHECK_NOTHROW(issue_certificate(rep, pair.provenance));
}

TEST_CASE("2-d midpoint path issues a certificate") {
    Grid g = Grid::torus_2d(128);
    WeightPair pair = catalog_pair("riesz12_torus", g);
    auto omega0 = SpectralField::from_function(
        g, [](double x, double y) { return std::sin(x) * std::sin(y); });
    HypothesisReport rep = check_hypothesis(omega0, pair);
    CHECK(rep.sign_ok);
    CHECK(rep.method == "midpoint_richardson");
    CHECK(rep.integrable);
    // integral of (1/2) sin^2 x sin^2 y over the torus is pi^2/2; mass 4 pi^2
    CHECK(rep.pairing == Catch::Approx(1.0 / 8.0).margin(1e-12));
    CHECK_NOTHROW(issue_certificate(rep, pair.provenance));
}

TEST_CASE("bound monitor") {
    double c_star = 0.5;
    std::vector<double> t{0.0, 0.5, 1.0, 1.5};
    std::vector<double> exact;
    for (double ti : t) exact.push_back(c_star / (1.0 - c_star * ti));
    BoundMonitor mon = monitor_bound(t, exact, c_star);
    CHECK(mon.ok);
    for (double s : mon.slack) CHECK(std::abs(s) < 1e-12);

    std::vector<double> low(t.size(), c_star / 2.0);
    BoundMonitor bad = monitor_bound(t, low, c_star);
    CHECK_FALSE(bad.ok);
    CHECK(bad.violations.front().time == Catch::Approx(0.0));

    std::vector<double> beyond{0.0, 2.5};
    CHECK_THROWS_AS(monitor_bound(beyond, {1.0, 1.0}, c_star), std::invalid_argument);
}
