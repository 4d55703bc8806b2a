#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "wanderlab/chain.hpp"

using namespace wanderlab;

namespace {

ChainModel reference_model() {
    ChainModel m;
    m.schedule = FactorSchedule::geometric(0.25);
    return m;
}

} // namespace

TEST_CASE("model steps reproduce hand-computed examples") {
    // Trivial schedule (a = 0): step 0 squares the offset, 0.5 -> 0.25 + 4.
    ChainModel trivial;
    trivial.schedule = FactorSchedule::trivial();
    REQUIRE(std::abs(model_step(trivial, 0, {0.5, 0.0}) - Complex(4.25, 0.0)) < 1e-15);

    // Constant a = 0.5 at chain index 2: offset 0.5 maps through b_{1/2} to
    // 0.5 * 1.0 / 1.25 = 0.4, landing at 12.4.
    ChainModel constant;
    constant.schedule = FactorSchedule::constant(0.5);
    REQUIRE(std::abs(model_step(constant, 2, {8.5, 0.0}) - Complex(12.4, 0.0)) < 1e-14);

    // The marked orbit rides the centers.
    ChainModel ref = reference_model();
    Complex z(0.0, 0.0);
    for (int n = 0; n < 6; ++n) {
        z = ref.step(n, z);
        REQUIRE(std::abs(z - Complex(4.0 * (n + 1), 0.0)) < 1e-12);
    }
}

TEST_CASE("schedule-tied radii keep zeros inside and the pole outside") {
    const ChainModel m = reference_model();
    for (int n = 0; n < 8; ++n) {
        const double a = m.schedule.a(n + 1);
        const double r = m.inner_radius(n), R = m.outer_radius(n);
        REQUIRE(r < 1.0);
        REQUIRE(R > 1.0);
        REQUIRE(a < r);           // second zero -a_{n+1} inside the inner disc
        REQUIRE(1.0 / a > R);     // pole -1/a_{n+1} outside the outer disc
        REQUIRE(std::abs(R - r - m.schedule.gap(n + 1)) < 1e-15);
    }
    REQUIRE_THROWS_AS(m.inner_radius(-1), std::invalid_argument);
    REQUIRE_THROWS_AS(m.step(0, Complex(10.0, 0.0)), std::domain_error);
}

TEST_CASE("exact pair traces equal direct disc compositions") {
    // Dual route: stepping through the chain (translate, factor, translate)
    // must reproduce d(B_n(0), B_n(w)) computed purely inside the disc.
    const ChainModel m = reference_model();
    std::mt19937_64 eng(53);
    for (int t = 0; t < 10; ++t) {
        const Complex w = oracles::random_disc_point(eng, 0.6);
        const OrbitPairTrace tr = pair_trace(m, {0.0, 0.0}, w, 40);
        REQUIRE(tr.escape_index == -1);
        REQUIRE(int(tr.exact.size()) == 41);
        for (int n = 0; n <= 40; ++n) {
            const double direct =
                disc_distance(compose(m.schedule, n, {0.0, 0.0}), compose(m.schedule, n, w));
            // Tolerance covers the rounding of the chain route's translation
            // round-trips (centers grow to 160 over the horizon).
            REQUIRE(std::abs(tr.exact[std::size_t(n)] - direct) < 1e-11);
        }
    }
}

TEST_CASE("bracketed traces contain the exact sequence") {
    const ChainModel m = reference_model();
    std::mt19937_64 eng(59);
    for (int t = 0; t < 10; ++t) {
        const Complex w = oracles::random_disc_point(eng, 0.5);
        const OrbitPairTrace ex = pair_trace(m, {0.0, 0.0}, w, 30, MetricMode::exact_disc_model);
        const OrbitPairTrace br = pair_trace(m, {0.0, 0.0}, w, 30, MetricMode::bracketed);
        REQUIRE(br.lower.size() == ex.exact.size());
        for (std::size_t n = 0; n < ex.exact.size(); ++n) {
            REQUIRE(br.lower[n] <= ex.exact[n] + 1e-12);
            if (!std::isnan(br.upper[n])) REQUIRE(br.upper[n] >= ex.exact[n] - 1e-12);
        }
    }
}

TEST_CASE("orbit pairs outside the chain disc are flagged as escapes") {
    const ChainModel m = reference_model();
    const OrbitPairTrace tr = pair_trace(m, {0.0, 0.0}, {1.05, 0.0}, 10);
    REQUIRE(tr.escape_index == 0); // |w| >= 1 leaves the normalized disc at once
    const OrbitPairTrace tr2 =
        pair_trace(m, {0.0, 0.0}, {1.05, 0.0}, 10, MetricMode::bracketed);
    REQUIRE(tr2.escape_index == 1); // inside D_0 (R_0 = 1.125) but swept out next step
}

TEST_CASE("collisions are recorded at the first sub-tolerance separation") {
    const ChainModel m = reference_model();
    const OrbitPairTrace tr = pair_trace(m, {0.0, 0.0}, {1e-14, 0.0}, 5);
    REQUIRE(tr.collision_index == 0);
}

TEST_CASE("perturbations stay within their budgets and vanish at the centers") {
    ChainModel m = reference_model();
    m.perturbation.enabled = true;
    m.perturbation.seed = 9;
    std::mt19937_64 eng(61);
    for (int n = 0; n < 6; ++n) {
        const double budget = m.perturbation_budget(n);
        REQUIRE(budget > 0.0);
        REQUIRE(budget <= 0.25 * (m.outer_radius(n + 1) - m.inner_radius(n + 1)));
        REQUIRE(std::abs(m.perturbation_value(n, {0.0, 0.0})) == 0.0);
        for (int t = 0; t < 50; ++t) {
            const Complex w = oracles::random_disc_point(eng, m.outer_radius(n));
            REQUIRE(std::abs(m.perturbation_value(n, w)) <= budget * (1.0 + 1e-12));
        }
        // Same seed, same step: the perturbation is a fixed polynomial.
        const Complex probe(0.3, -0.2);
        REQUIRE(m.perturbation_value(n, probe) == m.perturbation_value(n, probe));
    }
    // The marked orbit still rides the centers exactly.
    Complex z(0.0, 0.0);
    for (int n = 0; n < 5; ++n) {
        z = m.step(n, z);
        REQUIRE(std::abs(z - Complex(4.0 * (n + 1), 0.0)) < 1e-12);
    }
}

TEST_CASE("rotation mode freezes distances from the onset") {
    ChainModel m = reference_model();
    m.isometric_from = 3;
    m.rotation_angle = 0.7;
    const OrbitPairTrace tr = pair_trace(m, {0.0, 0.0}, {0.4, 0.1}, 20);
    REQUIRE(tr.escape_index == -1);
    for (int n = 0; n < 3; ++n)
        REQUIRE(tr.exact[std::size_t(n + 1)] < tr.exact[std::size_t(n)]);
    for (int n = 3; n < 20; ++n)
        REQUIRE(std::abs(tr.exact[std::size_t(n + 1)] - tr.exact[std::size_t(n)]) < 5e-13);
}

TEST_CASE("distance fields converge monotonically in the sup norm") {
    const ChainModel m = reference_model();
    std::vector<Complex> grid;
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j)
            if (i != 0 || j != 0) grid.emplace_back(i * 0.12, j * 0.12);
    const UFieldReport rep = u_field(m, {0.0, 0.0}, grid, 40, 40);
    REQUIRE(rep.gap_start == 0);
    REQUIRE(rep.u_final.size() == grid.size());
    for (std::size_t i = 1; i < rep.sup_gaps.size(); ++i)
        REQUIRE(rep.sup_gaps[i] <= rep.sup_gaps[i - 1] + 1e-12);
    REQUIRE(rep.sup_gaps.back() == 0.0);
    for (double u : rep.u_final) REQUIRE(u > 0.0);
}

TEST_CASE("the distance field is invariant under one model step") {
    ChainModel m = reference_model();
    std::vector<Complex> grid;
    for (int i = 0; i < 25; ++i)
        grid.push_back(std::polar(0.1 + 0.02 * i, 0.7 * i));
    REQUIRE(invariance_check(m, {0.0, 0.0}, grid, 30) < 1e-10);
    m.perturbation.enabled = true;
    m.perturbation.seed = 4;
    REQUIRE(invariance_check(m, {0.0, 0.0}, grid, 30) < 1e-10);
}

TEST_CASE("each chain step has local degree two") {
    const ChainModel m = reference_model();
    std::vector<Complex> targets;
    for (int t = 0; t < 8; ++t)
        targets.push_back(Complex(8.0, 0.0) + std::polar(0.05, 0.8 * t));
    const std::vector<int> winds = degree_check(m, 1, targets);
    for (int wnd : winds) REQUIRE(wnd == 2);
}
