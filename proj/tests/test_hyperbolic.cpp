#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "wanderlab/hyperbolic.hpp"

using namespace wanderlab;

TEST_CASE("disc distance matches the integrated density along radii") {
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double expected = oracles::disc_radial_distance(x);
        REQUIRE(std::abs(disc_distance({0.0, 0.0}, {x, 0.0}) - expected) < 1e-10);
    }
    // Normalization anchors: d(0, tanh(1/2)) = 1, d(0, 1/2) = log 3.
    REQUIRE(std::abs(disc_distance({0.0, 0.0}, {std::tanh(0.5), 0.0}) - 1.0) < 1e-14);
    REQUIRE(std::abs(disc_distance({0.0, 0.0}, {0.5, 0.0}) - std::log(3.0)) < 1e-14);
}

TEST_CASE("disc distance is symmetric and satisfies the triangle inequality") {
    std::mt19937_64 eng(7);
    for (int t = 0; t < 200; ++t) {
        const Complex a = oracles::random_disc_point(eng, 0.95);
        const Complex b = oracles::random_disc_point(eng, 0.95);
        const Complex c = oracles::random_disc_point(eng, 0.95);
        REQUIRE(std::abs(disc_distance(a, b) - disc_distance(b, a)) < 1e-13);
        REQUIRE(disc_distance(a, c) <= disc_distance(a, b) + disc_distance(b, c) + 1e-12);
    }
}

TEST_CASE("disc distance is invariant under disc automorphisms") {
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int t = 0; t < 200; ++t) {
        const Complex a = oracles::random_disc_point(eng, 0.9);
        const Complex b = oracles::random_disc_point(eng, 0.9);
        const Complex c = oracles::random_disc_point(eng, 0.7);
        const double th = angle(eng);
        const double before = disc_distance(a, b);
        const double after = disc_distance(oracles::disc_automorphism(c, th, a),
                                           oracles::disc_automorphism(c, th, b));
        REQUIRE(std::abs(before - after) < 1e-10 * (1.0 + before));
    }
}

TEST_CASE("disc distance rejects boundary and non-finite points") {
    REQUIRE_THROWS_AS(disc_distance({1.0, 0.0}, {0.0, 0.0}), std::domain_error);
    REQUIRE_THROWS_AS(disc_distance({0.0, 0.0}, {std::nan(""), 0.0}), std::domain_error);
    REQUIRE_THROWS_AS(disc_density({1.5, 0.0}), std::domain_error);
}

TEST_CASE("annulus density agrees with the half-plane pullback") {
    const RoundAnnulus ann(0.2);
    const double L = ann.strip_width();
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> rad(0.25, 0.95), angle(0.0, 2.0 * M_PI);
    for (int t = 0; t < 100; ++t) {
        const Complex z = std::polar(rad(eng), angle(eng));
        const double eta = std::log(std::abs(z) / ann.inner_radius);
        const double expected = (M_PI / L) / (std::abs(z) * std::sin(M_PI * eta / L));
        REQUIRE(std::abs(annulus_density(ann, z) - expected) < 1e-12 * expected);
    }
    REQUIRE_THROWS_AS(annulus_density(ann, Complex(0.1, 0.0)), std::domain_error);
    REQUIRE_THROWS_AS(RoundAnnulus(1.5), std::invalid_argument);
}

TEST_CASE("annulus distance matches the covering-space computation") {
    const double rho = 0.2;
    const RoundAnnulus ann(rho);
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> rad(0.3, 0.9), angle(0.0, 2.0 * M_PI);
    for (int t = 0; t < 12; ++t) {
        const Complex z = std::polar(rad(eng), angle(eng));
        const Complex w = std::polar(rad(eng), angle(eng));
        const double expected = oracles::annulus_distance_cover(rho, z, w);
        const double got = annulus_distance(ann, z, w);
        // Polyline lengths are exact (chord integrals use the antiderivative
        // of the strip density), so the minimized values converge to the
        // distance from above; Richardson extrapolation can land a hair below.
        REQUIRE(got > expected - 1e-6);
        REQUIRE(std::abs(got - expected) < 1e-6 * (1.0 + expected));
    }
}

TEST_CASE("annulus distance is symmetric and vanishes on the diagonal") {
    const RoundAnnulus ann(0.3);
    const Complex z(0.5, 0.2), w(-0.4, 0.45);
    REQUIRE(annulus_distance(ann, z, z) == 0.0);
    REQUIRE(std::abs(annulus_distance(ann, z, w) - annulus_distance(ann, w, z)) < 1e-12);
    REQUIRE_THROWS_AS(annulus_distance(ann, Complex(0.1, 0.0), w), std::domain_error);
}

TEST_CASE("annulus core-circle arcs have the expected length") {
    // Along the core circle |z| = sqrt(rho) the density is (pi/L)/|z|, so a
    // quarter turn has length (pi/L) * (pi/2).
    const double rho = 0.25;
    const RoundAnnulus ann(rho);
    const double core = std::sqrt(rho);
    const double L = ann.strip_width();
    const double expected = (M_PI / L) * (M_PI / 2.0);
    const double got = annulus_distance(ann, Complex(core, 0.0), Complex(0.0, core));
    REQUIRE(std::abs(got - expected) < 2e-4 * expected);
    const double oracle = oracles::annulus_distance_cover(rho, {core, 0.0}, {0.0, core});
    REQUIRE(std::abs(oracle - expected) < 1e-9);
}
