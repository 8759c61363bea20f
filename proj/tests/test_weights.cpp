#include <catch_amalgamated.hpp>

#include <numbers>

#include "blowup/weights.hpp"

using namespace blowup;
constexpr double pi = std::numbers::pi;

TEST_CASE("catalog closed forms at sample points") {
    WeightPair b = catalog_pair("burgers_line", Grid::line_1d(256, 32.0));
    CHECK(b.w2(1.0, 0.0) == Catch::Approx(0.25));
    CHECK(b.w1(1.0, 0.0) == Catch::Approx(0.5));
    CHECK(b.w1(-2.0, 0.0) == Catch::Approx(-8.0 / 125.0));

    WeightPair c = catalog_pair("clm_torus", Grid::torus_1d(64));
    CHECK(c.w2(pi / 3.0, 0.0) == Catch::Approx(1.5));
    CHECK(c.w1(pi / 2.0, 0.0) == Catch::Approx(-1.0));

    WeightPair l = catalog_pair("clm_line", Grid::line_1d(256, 32.0));
    CHECK(l.w1(1.0, 0.0) == Catch::Approx(-0.5));

    WeightPair r = catalog_pair("riesz12_torus", Grid::torus_2d(32));
    CHECK(r.w1(pi / 2.0, pi / 2.0) == Catch::Approx(0.5));
}

TEST_CASE("unknown name and wrong grid rejected") {
    CHECK_THROWS_AS(catalog_pair("nope"), std::invalid_argument);
    CHECK_THROWS_AS(catalog_pair("clm_torus", Grid::line_1d(64, 8.0)), std::invalid_argument);
    CHECK_THROWS_AS(catalog_pair("burgers_line", Grid::torus_1d(64)), std::invalid_argument);
}

TEST_CASE("numeric weight reproduces torus closed forms to machine precision") {
    WeightPair c = catalog_pair("clm_torus", Grid::torus_1d(256));
    CHECK(w1_cross_check_error(c, 0.0) < 1e-12);
    WeightPair r = catalog_pair("riesz12_torus", Grid::torus_2d(64));
    CHECK(w1_cross_check_error(r, 0.0) < 1e-12);
}

TEST_CASE("numeric weight matches line closed forms on interior nodes") {
    WeightPair b = catalog_pair("burgers_line", Grid::line_1d(4096, 32.0));
    CHECK(w1_cross_check_error(b, 8.0) < 1e-6);
    WeightPair l = catalog_pair("clm_line", Grid::line_1d(4096, 32.0));
    CHECK(w1_cross_check_error(l, 8.0) < 1e-6);
}

TEST_CASE("adjoint of minus identity") {
    Grid g = Grid::torus_1d(64);
    WeightPair p = numeric_weight(ops::neg_id(1), [](double x, double) { return 1.0 + std::cos(x); }, g);
    CHECK(p.provenance == "numeric");
    for (int i = 0; i < g.n; ++i)
        CHECK((*p.w1_field)(std::size_t(i)) == Catch::Approx(-(1.0 + std::cos(g.x(i)))).margin(1e-13));
}

TEST_CASE("normalization masses") {
    WeightPair c = catalog_pair("clm_torus", Grid::torus_1d(128));
    CHECK(c.normalization == Catch::Approx(2.0 * pi));
    CHECK(c.mass_deficit == 0.0);

    WeightPair r = catalog_pair("riesz12_torus", Grid::torus_2d(32));
    CHECK(r.normalization == Catch::Approx(4.0 * pi * pi));

    WeightPair b = catalog_pair("burgers_line", Grid::line_1d(4096, 32.0));
    CHECK(b.normalization == Catch::Approx(pi / 2.0).epsilon(1e-4));
    CHECK(b.mass_deficit < 1e-4 * b.normalization);

    WeightPair p = catalog_pair("riesz12_plane", Grid::line_2d(256, 32.0));
    CHECK(p.provenance == "numeric");
    CHECK(p.normalization == Catch::Approx(pi / 2.0).epsilon(1e-3));
}

TEST_CASE("negative W2 rejected by numeric_weight") {
    Grid g = Grid::torus_1d(32);
    CHECK_THROWS_AS(numeric_weight(ops::hilbert(), [](double x, double) { return std::cos(x); }, g),
                    std::invalid_argument);
}
