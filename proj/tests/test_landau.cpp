// Covered-disc (Bloch-Landau) check: the guarantee formula, exactness of the
// derivative product, and the measured covered radius against independent
// closed forms for the two geometric regimes of a single factor.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wanderlab/blaschke.hpp"
#include "wanderlab/landau.hpp"

#include "oracles.hpp"

using namespace wanderlab;

namespace {
const double kRStar = std::tanh(0.5);
}

TEST_CASE("guarantee formula and derivative product", "[landau]") {
    const auto rep = landau_check({BlaschkeFactor(0.5)}, 64);
    REQUIRE(rep.derivative_at_zero == 0.5);
    // Frozen arithmetic: 2 * 0.433 * tanh(1/2) * 0.5 = 0.20009672...
    REQUIRE(std::abs(rep.guaranteed - 0.2000967) < 1e-6);
    REQUIRE(rep.guaranteed == 2.0 * 0.433 * kRStar * rep.derivative_at_zero);
    REQUIRE(rep.resolution > 0.0);
    // Slack is the half arc spacing of the sampled boundary circle, mapped
    // through the maximal hyperbolic density on |z| <= r*.
    const double expected_slack = (2.0 / (1.0 - kRStar * kRStar)) * M_PI * kRStar / (4.0 * 64);
    REQUIRE(rep.resolution == expected_slack);
}

TEST_CASE("folded regime: covered radius reaches the two-sheet floor", "[landau]") {
    // For a single factor the two preimages of w multiply to -w, so their
    // geometric mean is sqrt(|w|): every |w| < r*^2 has a preimage inside
    // B(0, r*). With a = 0.5 the image boundary pinches exactly there, so the
    // covered hyperbolic radius is 2 artanh(r*^2). The naive minimum of |b|
    // over the boundary circle is ~0.072 - far below - which is exactly the
    // trap this check must not fall into.
    const auto rep = landau_check({BlaschkeFactor(0.5)}, 256);
    const double expected = 2.0 * std::atanh(kRStar * kRStar);
    REQUIRE(rep.measured >= expected - 2e-3);
    REQUIRE(rep.measured <= expected + 2e-2);
    REQUIRE(rep.pass);
    REQUIRE(rep.measured + rep.resolution >= rep.guaranteed);
}

TEST_CASE("single-sheet regime: covered radius matches the boundary dip", "[landau]") {
    // With a = 0.9 the second zero sits far outside B(0, r*): the image
    // boundary is single-sheeted near its closest approach to 0, which is at
    // the antipode of the zero, giving euclidean radius r*(a - r*)/(1 - a r*).
    const double a = 0.9;
    const auto rep = landau_check({BlaschkeFactor(a)}, 256);
    const double dip = kRStar * (a - kRStar) / (1.0 - a * kRStar);
    const double expected = 2.0 * std::atanh(dip);
    REQUIRE(std::abs(rep.measured - expected) < 5e-3);
    REQUIRE(rep.pass);
}

TEST_CASE("compositions pass with the product derivative", "[landau]") {
    const auto rep = landau_check({BlaschkeFactor(0.9), BlaschkeFactor(0.8)}, 256);
    REQUIRE(std::abs(rep.derivative_at_zero - 0.72) < 1e-15);
    REQUIRE(std::abs(rep.guaranteed - 2.0 * 0.433 * kRStar * 0.72) < 1e-15);
    // Nesting the factor images shows the composition covers at least the
    // euclidean radius 0.217 disc; the measurement must certify the bound.
    REQUIRE(rep.measured > 0.40);
    REQUIRE(rep.pass);
}

TEST_CASE("guarantee sweep over the factor scale", "[landau]") {
    for (double a : {0.1, 0.3, 0.7}) {
        const auto rep = landau_check({BlaschkeFactor(a)}, 128);
        REQUIRE(rep.guaranteed == 2.0 * 0.433 * kRStar * a);
        REQUIRE(rep.pass);
        REQUIRE(rep.measured > rep.guaranteed); // true even without slack here
    }
}

TEST_CASE("input validation", "[landau]") {
    REQUIRE_THROWS_AS(landau_check({}), std::invalid_argument);
    REQUIRE_THROWS_AS(landau_check({BlaschkeFactor(0.5)}, 32), std::invalid_argument);
    REQUIRE_THROWS_AS(landau_check({BlaschkeFactor(0.5)}, 256, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(landau_check({BlaschkeFactor(0.5)}, 256, -1.0), std::invalid_argument);
    // A vanishing factor derivative kills the composition derivative.
    REQUIRE_THROWS_AS(landau_check({BlaschkeFactor(0.0)}, 256), std::domain_error);
    REQUIRE_THROWS_AS(landau_check({BlaschkeFactor(0.5), BlaschkeFactor(0.0)}, 256),
                      std::domain_error);
}
