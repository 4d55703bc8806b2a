#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "wanderlab/surgery.hpp"

using namespace wanderlab;

namespace {

SurgerySchedule reference_schedule() {
    SurgerySchedule s;
    s.factors = FactorSchedule::geometric(0.25);
    s.mu.kind = MuRule::Kind::geometric;
    s.mu.base = 10.0;
    s.mu.growth = 2.0;
    return s; // r = 0.1, r' = 0.2, eta = 0, start_index = 5
}

ChainModel reference_model() {
    ChainModel m;
    m.schedule = FactorSchedule::geometric(0.25);
    return m;
}

} // namespace

TEST_CASE("ellipse parameter rules follow their growth laws") {
    MuRule mu;
    REQUIRE(mu.at(0) == 10.0);
    REQUIRE(mu.at(3) == 80.0);
    mu.cap = 100.0;
    REQUIRE(mu.at(5) == 100.0); // 10 * 2^5 = 320 capped
    mu.kind = MuRule::Kind::constant;
    mu.value = 320.0;
    REQUIRE(mu.at(7) == 320.0);
    REQUIRE_THROWS_AS(mu.at(-1), std::invalid_argument);

    EpsilonRule eps;
    const FactorSchedule harmonic = FactorSchedule::harmonic();
    REQUIRE(eps.budget(harmonic, 2) == 0.125 * 0.25 * 0.25 * harmonic.gap(3));
    REQUIRE_THROWS_AS(eps.budget(harmonic, -1), std::invalid_argument);

    const SurgerySchedule s = reference_schedule();
    s.validate();
    const JoukowskiMap g5 = s.ellipse(5);
    REQUIRE(g5.mu == 320.0);
    REQUIRE(g5.r == 0.1);

    SurgerySchedule bad = reference_schedule();
    bad.r = 0.3; // r >= r'
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = reference_schedule();
    bad.mu.kind = MuRule::Kind::constant;
    bad.mu.value = 5.0; // mu * r = 0.5 <= 1
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("the inner-circle excess sweep matches its closed form") {
    const JoukowskiMap map(50.0, 0.1);
    const Cond2GammaSweep sweep = cond2_gamma_sweep(map);
    REQUIRE(std::abs(sweep.max_value - sweep.closed_form) < 1e-9 * sweep.closed_form);
    REQUIRE(sweep.closed_form == map.cond2_bound());
    REQUIRE(std::abs(sweep.closed_form - 2.0 / 24.0) < 1e-15);
    REQUIRE(std::abs(sweep.argmax - M_PI / 2.0) < 1e-3);
    // Doubling the sweep resolution no longer moves the maximum.
    const Cond2GammaSweep fine = cond2_gamma_sweep(map, 8192);
    REQUIRE(std::abs(fine.max_value - sweep.max_value) < 1e-9);
    REQUIRE_THROWS_AS(cond2_gamma_sweep(map, 32), std::invalid_argument);
}

TEST_CASE("the outer-circle excess bound reduces to a direct sweep at zero budget") {
    // Dual route: with no perturbation budget the bound must equal the raw
    // sweep of |z b'(z)/b(z) - 1|, evaluated here through the independent
    // product-rule expansion rather than the library's arrangement.
    const BlaschkeFactor b(0.5);
    const int samples = 4096;
    const Cond2BlaschkeBound rep = cond2_blaschke_bound(b, 0.2, 0.0, samples);
    double oracle_sweep = 0.0, oracle_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        const Complex z = std::polar(0.2, 2.0 * M_PI * j / samples);
        oracle_sweep = std::max(oracle_sweep,
                                std::abs(oracles::blaschke_excess_product_rule(0.5, z)));
        oracle_min = std::min(oracle_min, std::abs(oracles::blaschke_value(0.5, z)));
    }
    REQUIRE(std::abs(rep.bound - oracle_sweep) < 1e-10);
    REQUIRE(std::abs(rep.sweep - oracle_sweep) < 1e-10);
    REQUIRE(std::abs(rep.min_modulus - oracle_min) < 1e-12);
}

TEST_CASE("condition bounds respond monotonically to their drivers") {
    // Sharper ellipse maps tighten the inner bound.
    REQUIRE(cond2_gamma_bound(JoukowskiMap(200.0, 0.1)) <
            cond2_gamma_bound(JoukowskiMap(100.0, 0.1)));
    // A positive perturbation budget can only inflate the outer bound.
    const BlaschkeFactor b(0.9);
    const double at_zero = cond2_blaschke_bound(b, 0.2, 0.0).bound;
    const double at_budget = cond2_blaschke_bound(b, 0.2, 0.01).bound;
    REQUIRE(at_budget > at_zero);
    // A budget at the scale of min |b| on the circle is rejected.
    REQUIRE_THROWS_AS(cond2_blaschke_bound(b, 0.2, 0.2), ill_conditioned_error);
}

TEST_CASE("boundary mismatch bounds are structurally sound at the first annulus") {
    const SurgerySchedule s = reference_schedule();
    const int n = s.start_index;
    const BlaschkeFactor b = s.factors.factor(n + 1);
    const JoukowskiMap gamma = s.ellipse(n);
    const double E = s.eps.budget(s.factors, n);
    const Cond1Bound c1 = cond1_bound(b, gamma, s.r, s.r_prime, E);
    REQUIRE(c1.winding_b == 1);
    REQUIRE(c1.winding_gamma == 1);
    REQUIRE(c1.direct > 0.0);
    REQUIRE(c1.triangle >= c1.direct - 1e-12 * (1.0 + c1.direct));
    REQUIRE(c1.bound >= c1.direct);
    REQUIRE(c1.direct < 0.01); // deep factor, sharp ellipse: tiny mismatch

    REQUIRE_THROWS_AS(cond1_bound(b, gamma, 0.15, s.r_prime, E), std::invalid_argument);
    REQUIRE_THROWS_AS(cond1_bound(b, gamma, s.r, 0.05, E), std::invalid_argument);
    REQUIRE_THROWS_AS(cond1_bound(b, gamma, s.r, s.r_prime, -1.0), std::invalid_argument);
}

TEST_CASE("interpolation constants reproduce frozen arithmetic") {
    // No mismatch, no cost.
    const InterpolationConstant clean = interpolation_constant(0.0, 0.0, 0.1, 0.2);
    REQUIRE(clean.feasible);
    REQUIRE(clean.C == 1.0);
    REQUIRE(clean.K == 1.0);
    REQUIRE(clean.log_K == 0.0);

    // Worked example: s = 0.1/log 2 + 0.05, C = 1 - s, K = 1/C.
    const InterpolationConstant ex = interpolation_constant(0.1, 0.05, 0.1, 0.2);
    REQUIRE(ex.feasible);
    REQUIRE(std::abs(ex.C - 0.805730) < 1e-5);
    REQUIRE(std::abs(ex.K - 1.241111) < 1e-5);
    REQUIRE(std::abs(ex.K * ex.C - 1.0) < 1e-12);

    // The feasibility boundary: delta0 equal to the full modulus log(r'/r).
    const InterpolationConstant edge = interpolation_constant(std::log(0.2 / 0.1), 0.0, 0.1, 0.2);
    REQUIRE_FALSE(edge.feasible);
    REQUIRE(std::abs(edge.C) < 1e-12);
    REQUIRE(std::isnan(edge.K));

    // A larger exponent absorbs more mismatch.
    const InterpolationConstant k2 = interpolation_constant(std::log(2.0), 0.0, 0.1, 0.2, 2);
    REQUIRE(k2.feasible);
    REQUIRE(std::abs(k2.C - 0.5) < 1e-12);

    // Monotone in both condition bounds.
    REQUIRE(interpolation_constant(0.2, 0.05, 0.1, 0.2).C < ex.C);
    REQUIRE(interpolation_constant(0.1, 0.10, 0.1, 0.2).C < ex.C);

    REQUIRE_THROWS_AS(interpolation_constant(0.1, 0.1, 0.2, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(interpolation_constant(-0.1, 0.1, 0.1, 0.2), std::invalid_argument);
    REQUIRE_THROWS_AS(interpolation_constant(0.1, 0.1, 0.1, 0.2, 0), std::invalid_argument);
}

TEST_CASE("the reference schedule certifies a finite distortion product") {
    const SurgerySchedule s = reference_schedule();
    const InterpolationReport rep = certify_product(s, 40);
    REQUIRE(rep.feasible);
    REQUIRE(rep.certified);
    REQUIRE(rep.records.size() == 36); // annuli 5..40
    REQUIRE(rep.tail_bound < 1e-6);
    REQUIRE(rep.tail_bound > 0.0);
    REQUIRE(rep.K_infinity_partial > 1.0);
    REQUIRE(rep.K_infinity_partial < 1.5);
    REQUIRE(rep.envelope_q > 0.0);
    REQUIRE(rep.envelope_q < 1.0);
    for (const InterpolationRecord& rec : rep.records) {
        REQUIRE(rec.C > 0.0);
        REQUIRE(rec.K >= 1.0);
    }
    // The per-annulus distortion decays monotonically over the tail.
    for (std::size_t i = rep.records.size() - 20; i + 1 < rep.records.size(); ++i)
        REQUIRE(rep.records[i + 1].K <= rep.records[i].K);
    REQUIRE(rep.records.back().K - 1.0 < 1e-9);

    REQUIRE_THROWS_AS(certify_product(s, 3), std::invalid_argument);
}

TEST_CASE("a constant factor schedule fails feasibility at the first annulus") {
    SurgerySchedule s = reference_schedule();
    s.factors = FactorSchedule::constant(0.5);
    const InterpolationReport rep = certify_product(s, 40);
    REQUIRE_FALSE(rep.feasible);
    REQUIRE_FALSE(rep.certified);
    REQUIRE(rep.offending_index == s.start_index);
    REQUIRE(rep.records.size() == 1);
    REQUIRE(rep.records.front().C <= 0.0);
}

TEST_CASE("audit sample clouds are seeded, bounded, and region-aware") {
    const SurgerySchedule s = reference_schedule();
    const ChainModel m = reference_model();
    const Complex c5 = Complex(m.center(s.start_index), 0.0);

    const AuditSamples omega = draw_audit_samples(s, m, AuditRegion::omega_annulus, 64, 7);
    REQUIRE(omega.region_detected);
    REQUIRE(omega.inner > s.r_prime);
    REQUIRE(omega.outer < 1.0);
    REQUIRE(omega.points.size() == 64);
    for (Complex p : omega.points) {
        const double rad = std::abs(p - c5);
        REQUIRE(rad >= omega.inner - 1e-12);
        REQUIRE(rad <= omega.outer + 1e-12);
    }
    const AuditSamples again = draw_audit_samples(s, m, AuditRegion::omega_annulus, 64, 7);
    REQUIRE(again.points == omega.points);

    const AuditSamples disc = draw_audit_samples(s, m, AuditRegion::chain_disc, 64, 7);
    REQUIRE(disc.inner == 0.0);
    for (Complex p : disc.points)
        REQUIRE(std::abs(p - c5) < m.outer_radius(s.start_index));

    REQUIRE_THROWS_AS(draw_audit_samples(s, m, AuditRegion::chain_disc, 0), std::invalid_argument);
}

TEST_CASE("the marked orbit reaches the operated zone without entering any annulus") {
    const SurgerySchedule s = reference_schedule();
    const ChainModel m = reference_model();
    const AuditReport rep = audit_no_revisit(s, m, {Complex(0.0, 0.0)}, 20);
    REQUIRE(rep.rows.size() == 1);
    const AuditRow& row = rep.rows.front();
    REQUIRE(row.fate == "pole"); // lands exactly on the ellipse-map pole at the center
    REQUIRE(row.annuli_entered == 0);
    REQUIRE(row.max_entries == 0);
    REQUIRE(row.last_chain_index == s.start_index);
    REQUIRE(rep.pole_captures == 1);
}

TEST_CASE("sampled orbits never revisit an operated annulus") {
    const SurgerySchedule s = reference_schedule();
    const ChainModel m = reference_model();
    const AuditReport rep = audit_no_revisit(s, m, 60, 50, 1, AuditRegion::omega_annulus);
    REQUIRE(rep.rows.size() == 60);
    REQUIRE(rep.max_visits <= 1);
    REQUIRE(rep.completed + rep.escapes + rep.pole_captures == 60);
    REQUIRE(rep.region_detected);
    REQUIRE(rep.sample_inner > s.r_prime);

    REQUIRE_THROWS_AS(audit_no_revisit(s, m, std::vector<Complex>{}, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(audit_no_revisit(s, m, {Complex(0.0, 0.0)}, 0), std::invalid_argument);
}

TEST_CASE("flat-signature helpers agree with their struct counterparts") {
    const JoukowskiMap map(320.0, 0.1);
    REQUIRE(joukowski_eval(map, {0.1, 0.0}) == map.value({0.1, 0.0}));
    REQUIRE(cond2_gamma_bound(map) == map.cond2_bound());
    REQUIRE(cond2_blaschke_bound(0.5, 0.2, 1e-6) ==
            cond2_blaschke_bound(BlaschkeFactor(0.5), 0.2, 1e-6).bound);
    REQUIRE(cond1_bound(0.5, map, 0.2, 1e-6) ==
            cond1_bound(BlaschkeFactor(0.5), map, 0.1, 0.2, 1e-6).bound);
}
