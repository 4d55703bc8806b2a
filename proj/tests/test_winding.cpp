#include <catch2/catch_amalgamated.hpp>

#include "wanderlab/curves.hpp"

using namespace wanderlab;

namespace {

CurveSample circle(Complex center, double radius, int n, int turns = 1) {
    std::vector<Complex> pts;
    pts.reserve(std::size_t(n));
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * M_PI * turns * j / n;
        pts.push_back(center + std::polar(radius, th));
    }
    return CurveSample(std::move(pts), true);
}

} // namespace

TEST_CASE("winding of a circle is 1 inside and 0 outside") {
    const CurveSample c = circle({0.0, 0.0}, 1.0, 256);
    REQUIRE(winding_number(c, {0.0, 0.0}) == 1);
    REQUIRE(winding_number(c, {0.5, 0.3}) == 1);
    REQUIRE(winding_number(c, {2.0, 0.0}) == 0);
    REQUIRE(winding_number(c, {-1.7, 1.4}) == 0);
}

TEST_CASE("doubled circles and squared images wind twice") {
    const CurveSample doubled = circle({0.0, 0.0}, 1.0, 512, 2);
    REQUIRE(winding_number(doubled, {0.0, 0.0}) == 2);

    std::vector<Complex> pts;
    for (int j = 0; j < 256; ++j) {
        const Complex z = std::polar(1.0, 2.0 * M_PI * j / 256);
        pts.push_back(z * z);
    }
    REQUIRE(winding_number(CurveSample(std::move(pts), true), {0.0, 0.0}) == 2);
}

TEST_CASE("winding orientation flips with traversal direction") {
    std::vector<Complex> pts;
    for (int j = 0; j < 256; ++j) {
        const double th = -2.0 * M_PI * j / 256;
        pts.push_back(std::polar(1.0, th));
    }
    REQUIRE(winding_number(CurveSample(std::move(pts), true), {0.0, 0.0}) == -1);
}

TEST_CASE("points near the curve are rejected as ill-conditioned") {
    const CurveSample c = circle({0.0, 0.0}, 1.0, 256);
    REQUIRE_THROWS_AS(winding_number(c, {1.0, 0.0}), ill_conditioned_error);
    REQUIRE_THROWS_AS(winding_number(c, Complex(1.0 - 1e-12, 0.0)), ill_conditioned_error);
}

TEST_CASE("curve samples are validated") {
    std::vector<Complex> few = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
    REQUIRE_THROWS_AS(CurveSample(few, true), std::invalid_argument);

    std::vector<Complex> dup;
    for (int j = 0; j < 20; ++j) dup.push_back(std::polar(1.0, 2.0 * M_PI * j / 20));
    dup[5] = dup[4];
    REQUIRE_THROWS_AS(CurveSample(dup, true), std::invalid_argument);

    std::vector<Complex> open_pts;
    for (int j = 0; j < 20; ++j) open_pts.emplace_back(j * 0.1, 0.0);
    const CurveSample open_curve(open_pts, false);
    REQUIRE_THROWS_AS(winding_number(open_curve, {0.5, 0.5}), std::invalid_argument);
}
