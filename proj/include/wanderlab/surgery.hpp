#pragma once

// Annulus gluing estimates. On each round annulus A(r, r') two boundary maps
// are interpolated: a scaled Joukowski ellipse map gamma on the inner circle
// C_r and a Blaschke factor b on the outer circle C_{r'}. The interpolation
// cost is controlled by two boundary quantities,
//   delta0 = max_theta | log( (b(r' e^{it}) / (r' e^{it})) * (r e^{it} / gamma(r e^{it})) ) |
//   delta1 = max over both circles of | z g'(z)/g(z) - 1 |
// and the resulting distortion bound is K = 1/C with
//   C = 1 - (1/k) * ( delta0 / log(r'/r) + delta1 ).
// The certified product multiplies K over a whole chain of annuli and bounds
// the tail by a fitted geometric envelope.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "wanderlab/blaschke.hpp"
#include "wanderlab/chain.hpp"
#include "wanderlab/curves.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/joukowski.hpp"

namespace wanderlab {

struct MuRule {
    enum class Kind { geometric, constant };
    Kind kind = Kind::geometric;
    double base = 10.0;
    double growth = 2.0;
    double cap = 1e12;
    double value = 320.0; // constant mode

    double at(int n) const {
        if (n < 0) throw std::invalid_argument("MuRule: negative index");
        if (kind == Kind::constant) return value;
        return std::min(cap, base * std::pow(growth, double(n)));
    }
};

struct EpsilonRule {
    double scale = 0.125;
    double ratio = 0.25;

    // Perturbation sup-norm budget attached to annulus m; tied to the factor
    // gap so it stays below a quarter of the matching chain-disc margin.
    double budget(const FactorSchedule& schedule, int m) const {
        if (m < 0) throw std::invalid_argument("EpsilonRule: negative index");
        return scale * std::pow(ratio, double(m)) * schedule.gap(m + 1);
    }
};

struct SurgerySchedule {
    FactorSchedule factors;
    MuRule mu;
    double r = 0.1;
    double r_prime = 0.2;
    EpsilonRule eps;
    double eta = 0.0;   // surround factor handed to the ellipse maps
    int start_index = 5;

    void validate() const {
        if (!(r > 0.0 && r < r_prime && r_prime < 1.0))
            throw std::invalid_argument("SurgerySchedule: need 0 < r < r' < 1");
        if (start_index < 0)
            throw std::invalid_argument("SurgerySchedule: negative start index");
        if (!(mu.at(start_index) * r > 1.0))
            throw std::invalid_argument("SurgerySchedule: first ellipse map needs mu * r > 1");
        if (!(eps.scale >= 0.0 && eps.ratio > 0.0 && eps.ratio < 1.0))
            throw std::invalid_argument("SurgerySchedule: bad perturbation budget rule");
        if (!(eta > -1.0)) throw std::invalid_argument("SurgerySchedule: need eta > -1");
    }

    JoukowskiMap ellipse(int n) const { return JoukowskiMap(mu.at(n), r, eta); }
};

// ---------------------------------------------------------------------------
// Boundary condition estimates.

struct Cond2GammaSweep {
    double max_value = 0.0;
    double argmax = 0.0;      // theta of the discrete maximizer, swept over [0, pi)
    double closed_form = 0.0; // 2 / (mu^2 r^2 - 1)
};

// Dense sweep of |z gamma'(z)/gamma(z) - 1| over the inner circle. The excess
// is -2 / (mu^2 z^2 + 1), has period pi in theta, and peaks at theta = pi/2.
inline Cond2GammaSweep cond2_gamma_sweep(const JoukowskiMap& map, int samples = 4096) {
    if (samples < 64) throw std::invalid_argument("cond2_gamma_sweep: too few samples");
    Cond2GammaSweep rep;
    rep.closed_form = map.cond2_bound();
    for (int j = 0; j < samples; ++j) {
        const double th = M_PI * j / samples;
        const double v = std::abs(map.log_derivative_excess(std::polar(map.r, th)));
        if (v > rep.max_value) {
            rep.max_value = v;
            rep.argmax = th;
        }
    }
    return rep;
}

struct Cond2BlaschkeBound {
    double bound = 0.0;       // inflated for the perturbation budget
    double sweep = 0.0;       // max |z b'(z)/b(z) - 1| on C_{r'}
    double min_modulus = 0.0; // min |b| on C_{r'}
};

// Log-derivative excess of a (possibly perturbed) factor on the outer circle.
// For f = b + e with |e| <= E on the unit disc and |z| = r',
//   |z f'/f - 1| <= |z b'/b - 1| * m_b/(m_b - E) + E (r'/(1-r') + 1)/(m_b - E)
// using the Cauchy estimate |e'(z)| <= E/(1-|z|) and m_b = min |b| on C_{r'}.
inline Cond2BlaschkeBound cond2_blaschke_bound(const BlaschkeFactor& b, double r_prime,
                                               double eps_budget, int samples = 4096) {
    if (samples < 64) throw std::invalid_argument("cond2_blaschke_bound: too few samples");
    if (!(r_prime > 0.0 && r_prime < 1.0))
        throw std::invalid_argument("cond2_blaschke_bound: need 0 < r' < 1");
    if (!(eps_budget >= 0.0))
        throw std::invalid_argument("cond2_blaschke_bound: negative budget");
    Cond2BlaschkeBound rep;
    rep.min_modulus = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * j / samples;
        const Complex z = std::polar(r_prime, th);
        rep.sweep = std::max(rep.sweep, std::abs(b.log_derivative_excess(z)));
        rep.min_modulus = std::min(rep.min_modulus, std::abs(b.value(z)));
    }
    if (!(rep.min_modulus > eps_budget))
        throw ill_conditioned_error(
            "cond2_blaschke_bound: perturbation budget swamps the factor modulus");
    const double denom = rep.min_modulus - eps_budget;
    rep.bound = rep.sweep * (rep.min_modulus / denom) +
                eps_budget * (r_prime / (1.0 - r_prime) + 1.0) / denom;
    return rep;
}

struct Cond1Bound {
    double bound = 0.0;    // direct value inflated for the perturbation budget
    double direct = 0.0;   // max |log Q| on the continuous zero-winding branch
    double triangle = 0.0; // max (|log A| + |log B|), a pointwise upper bound
    int winding_gamma = 0; // winding of gamma(C_r) around 0 (expected 1)
    int winding_b = 0;     // winding of b(C_{r'}) around 0 (expected 1)
};

// Boundary mismatch delta0: with A(t) = b(r' e^{it})/(r' e^{it}) and
// B(t) = r e^{it}/gamma(r e^{it}), the quantity is max_t |log(A B)| taken on
// the continuous branch. Q = A B is computed through Q - 1 to survive gaps
// near machine epsilon, |log Q| through log1p of |Q|^2 - 1, and the branch is
// accumulated incrementally; its net winding must vanish.
inline Cond1Bound cond1_bound(const BlaschkeFactor& b, const JoukowskiMap& gamma, double r,
                              double r_prime, double eps_budget, int samples = 4096) {
    if (samples < 64) throw std::invalid_argument("cond1_bound: too few samples");
    if (std::abs(gamma.r - r) > 1e-15 * std::max(1.0, r))
        throw std::invalid_argument("cond1_bound: ellipse map radius must match r");
    if (!(r > 0.0 && r < r_prime && r_prime < 1.0))
        throw std::invalid_argument("cond1_bound: need 0 < r < r' < 1");
    if (!(eps_budget >= 0.0)) throw std::invalid_argument("cond1_bound: negative budget");

    Cond1Bound rep;
    std::vector<Complex> img_b, img_g;
    img_b.reserve(std::size_t(samples));
    img_g.reserve(std::size_t(samples));
    double min_mod_b = std::numeric_limits<double>::infinity();
    double arg_acc = 0.0;
    Complex prev_q;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * j / samples;
        const Complex zp = std::polar(r_prime, th);
        const Complex zi = std::polar(r, th);
        const Complex bv = b.value(zp);
        const Complex gv = gamma.value(zi);
        img_b.push_back(bv);
        img_g.push_back(gv);
        min_mod_b = std::min(min_mod_b, std::abs(bv));

        const Complex am1 = b.radial_ratio_minus_one(zp); // A - 1
        const Complex bm1 = -gamma.deviation(zi) / gv;    // B - 1
        const Complex w = am1 + bm1 + am1 * bm1;          // Q - 1 = A B - 1
        const Complex q = 1.0 + w;
        const double log_mod = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
        if (j == 0) arg_acc = std::arg(q);
        else arg_acc += std::arg(q / prev_q);
        prev_q = q;
        rep.direct = std::max(rep.direct, std::hypot(log_mod, arg_acc));

        const double la = std::hypot(std::log1p(2.0 * am1.real() + std::norm(am1)) * 0.5,
                                     std::arg(1.0 + am1));
        const double lb = std::hypot(std::log1p(2.0 * bm1.real() + std::norm(bm1)) * 0.5,
                                     std::arg(1.0 + bm1));
        rep.triangle = std::max(rep.triangle, la + lb);
    }
    // Close the loop: net argument change of Q over a full turn must vanish.
    {
        const Complex zp = std::polar(r_prime, 0.0);
        const Complex zi = std::polar(r, 0.0);
        const Complex am1 = b.radial_ratio_minus_one(zp);
        const Complex bm1 = -gamma.deviation(zi) / gamma.value(zi);
        const Complex q0 = 1.0 + am1 + bm1 + am1 * bm1;
        const double net = arg_acc + std::arg(q0 / prev_q) - std::arg(q0);
        if (std::abs(net) > 0.5)
            throw structural_error("cond1_bound: boundary ratio winds around 0");
    }
    rep.winding_b = winding_number(CurveSample(std::move(img_b), true), Complex(0.0, 0.0));
    rep.winding_gamma = winding_number(CurveSample(std::move(img_g), true), Complex(0.0, 0.0));
    if (rep.winding_b != 1 || rep.winding_gamma != 1)
        throw structural_error("cond1_bound: boundary image winding is not 1");
    if (rep.triangle + 1e-12 * (1.0 + rep.direct) < rep.direct)
        throw structural_error("cond1_bound: triangle bound fails to dominate");

    if (!(min_mod_b > eps_budget))
        throw ill_conditioned_error("cond1_bound: perturbation budget swamps the factor modulus");
    rep.bound = rep.direct - std::log1p(-eps_budget / min_mod_b);
    return rep;
}

// ---------------------------------------------------------------------------
// Interpolation constant and certified product.

struct InterpolationConstant {
    double C = 0.0;
    bool feasible = false;
    double K = std::numeric_limits<double>::quiet_NaN();
    double log_K = std::numeric_limits<double>::quiet_NaN();
};

inline InterpolationConstant interpolation_constant(double delta0, double delta1, double r,
                                                    double r_prime, int k = 1) {
    if (!(r > 0.0 && r < r_prime))
        throw std::invalid_argument("interpolation_constant: need 0 < r < r'");
    if (k < 1) throw std::invalid_argument("interpolation_constant: need k >= 1");
    if (!(delta0 >= 0.0 && delta1 >= 0.0))
        throw std::invalid_argument("interpolation_constant: negative condition bound");
    InterpolationConstant ic;
    const double s = (delta0 / std::log(r_prime / r) + delta1) / double(k);
    ic.C = 1.0 - s;
    ic.feasible = ic.C > 0.0;
    if (ic.feasible) {
        ic.log_K = -std::log1p(-s);
        ic.K = std::exp(ic.log_K);
    }
    return ic;
}

struct InterpolationRecord {
    int n = 0;
    double delta0 = 0.0;
    double delta1 = 0.0;
    double C = 0.0;
    double K = 0.0;
    double log_K = 0.0;
};

struct InterpolationReport {
    std::vector<InterpolationRecord> records;
    double K_infinity_partial = std::numeric_limits<double>::quiet_NaN();
    double tail_bound = std::numeric_limits<double>::infinity();
    bool certified = false;
    bool feasible = true;
    int offending_index = -1;   // first annulus with C <= 0, when infeasible
    double envelope_alpha = 0.0;
    double envelope_q = 0.0;
    int theta_samples = 0;
    double eta = 0.0;
};

// Distortion product over annuli start_index..N_max. Annulus n pairs the
// ellipse map of index n with the factor of index n+1 and the perturbation
// budget of index n. Certification additionally demands a geometric envelope
// alpha q^n dominating the observed log K_n on the fitted window, with tail
// sum alpha q^{N_max+1}/(1-q) below the tolerance.
inline InterpolationReport certify_product(const SurgerySchedule& schedule, int N_max,
                                           int samples = 4096, double tail_tolerance = 1e-6,
                                           int k = 1) {
    schedule.validate();
    if (N_max < schedule.start_index)
        throw std::invalid_argument("certify_product: horizon before start index");
    InterpolationReport rep;
    rep.theta_samples = samples;
    rep.eta = schedule.eta;

    double sum_log_K = 0.0;
    for (int n = schedule.start_index; n <= N_max; ++n) {
        const JoukowskiMap gamma = schedule.ellipse(n);
        const BlaschkeFactor b = schedule.factors.factor(n + 1);
        const double E = schedule.eps.budget(schedule.factors, n);
        const Cond2BlaschkeBound c2b =
            cond2_blaschke_bound(b, schedule.r_prime, E, samples);
        const Cond1Bound c1 =
            cond1_bound(b, gamma, schedule.r, schedule.r_prime, E, samples);
        const double delta0 = c1.bound;
        const double delta1 = std::max(gamma.cond2_bound(), c2b.bound);
        const InterpolationConstant ic =
            interpolation_constant(delta0, delta1, schedule.r, schedule.r_prime, k);
        if (!ic.feasible) {
            rep.feasible = false;
            rep.offending_index = n;
            rep.records.push_back({n, delta0, delta1, ic.C, 0.0, 0.0});
            break;
        }
        rep.records.push_back({n, delta0, delta1, ic.C, ic.K, ic.log_K});
        sum_log_K += ic.log_K;
    }
    if (!rep.feasible) {
        rep.certified = false;
        return rep;
    }
    rep.K_infinity_partial = std::exp(sum_log_K);

    // Geometric envelope fit of log K_n over the trailing window.
    const int count = int(rep.records.size());
    const int window = std::min(count, std::max(10, (N_max - schedule.start_index) / 2));
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (int i = count - window; i < count; ++i) {
        const double L = std::max(rep.records[std::size_t(i)].log_K, 1e-300);
        const double x = double(rep.records[std::size_t(i)].n);
        const double y = std::log(L);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++used;
    }
    const double denom = used * sxx - sx * sx;
    if (used >= 3 && denom > 0.0) {
        const double slope = (used * sxy - sx * sy) / denom;
        const double q = std::exp(slope);
        if (q < 1.0 - 1e-9) {
            double alpha = 0.0;
            for (int i = count - window; i < count; ++i)
                alpha = std::max(alpha, rep.records[std::size_t(i)].log_K /
                                            std::pow(q, double(rep.records[std::size_t(i)].n)));
            rep.envelope_alpha = alpha;
            rep.envelope_q = q;
            rep.tail_bound = alpha * std::pow(q, double(N_max + 1)) / (1.0 - q);
        }
    }
    rep.certified = rep.feasible && rep.tail_bound < tail_tolerance;
    return rep;
}

// ---------------------------------------------------------------------------
// Orbit audit over the glued piecewise model.

struct AuditRow {
    Complex start{0.0, 0.0};
    std::string fate;          // "completed", "escaped", or "pole"
    int steps = 0;
    int annuli_entered = 0;    // distinct surgery annuli the orbit entered
    int max_entries = 0;       // most entries into any single annulus
    int last_chain_index = 0;
};

struct AuditReport {
    int max_visits = 0; // most entries into a single annulus over all samples
    int pole_captures = 0;
    int escapes = 0;
    int completed = 0;
    double sample_inner = 0.0;
    double sample_outer = 0.0;
    bool region_detected = false;
    std::vector<AuditRow> rows;
};

enum class AuditRegion { omega_annulus, chain_disc };

struct AuditSamples {
    std::vector<Complex> points;
    AuditRegion region = AuditRegion::omega_annulus;
    double inner = 0.0;
    double outer = 0.0;
    bool region_detected = false;
};

// Seeded sample clouds for the audit: either inside the detected invariant
// annulus of the shifted composition (threshold above r', clear of the pole
// zone) or uniformly over the whole chain disc at the start index.
inline AuditSamples draw_audit_samples(const SurgerySchedule& schedule, const ChainModel& model,
                                       AuditRegion region, int count, std::uint64_t seed = 1) {
    if (count < 1) throw std::invalid_argument("draw_audit_samples: need at least one sample");
    AuditSamples out;
    out.region = region;
    if (region == AuditRegion::omega_annulus) {
        const AnnulusDetection det =
            detect_annulus(schedule.factors.shifted(schedule.start_index), 0.25, 8);
        if (det.found && det.inner > schedule.r_prime) {
            out.inner = det.inner;
            out.outer = det.outer;
            out.region_detected = true;
        } else {
            out.inner = std::max(0.3, schedule.r_prime + 0.05);
            out.outer = 0.9;
        }
    } else {
        out.inner = 0.0;
        out.outer = model.outer_radius(schedule.start_index) * (1.0 - 1e-9);
    }
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> ang_dist(0.0, 2.0 * M_PI);
    out.points.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) {
        double rad;
        if (region == AuditRegion::omega_annulus) {
            rad = out.inner + (out.outer - out.inner) * unit(eng);
        } else {
            // Area-uniform over the disc.
            rad = out.outer * std::sqrt(unit(eng));
        }
        out.points.push_back(model.center(schedule.start_index) + std::polar(rad, ang_dist(eng)));
    }
    return out;
}

// Iterates sample orbits of the glued map: inside C_r the ellipse map, on the
// annulus [r, r'] a radial blend of the two boundary maps, outside the chain
// step itself. Counts state transitions into each surgery annulus; a sound
// gluing lets every orbit enter each annulus at most once.
inline AuditReport audit_no_revisit(const SurgerySchedule& schedule, const ChainModel& model,
                                    const std::vector<Complex>& starts, int horizon) {
    schedule.validate();
    if (starts.empty()) throw std::invalid_argument("audit_no_revisit: no sample points");
    if (horizon < 1) throw std::invalid_argument("audit_no_revisit: horizon must be >= 1");
    const double T = model.translation_step;
    const double r = schedule.r, rp = schedule.r_prime;
    const double pole_tol = 1e-9;

    AuditReport rep;
    for (Complex start : starts) {
        AuditRow row;
        row.start = start;
        row.fate = "completed";

        Complex z = row.start;
        std::map<int, int> entries;
        int prev_zone_n = -1;  // annulus membership marker
        int prev_zone_kind = -1;
        for (int step = 0; step < horizon; ++step) {
            int n = int(std::lround(z.real() / T));
            if (n < 0) n = 0;
            const Complex w = z - model.center(n);
            const double aw = std::abs(w);
            row.last_chain_index = n;

            int zone_kind; // 0 core, 1 annulus, 2 outer
            if (aw < r) zone_kind = 0;
            else if (aw <= rp) zone_kind = 1;
            else zone_kind = 2;
            if (n >= schedule.start_index && zone_kind == 1 &&
                (prev_zone_kind != 1 || prev_zone_n != n))
                entries[n] += 1;
            prev_zone_kind = zone_kind;
            prev_zone_n = n;

            if (aw >= model.outer_radius(n)) {
                row.fate = "escaped";
                break;
            }
            Complex next;
            if (n < schedule.start_index || zone_kind == 2) {
                next = model.step(n, z);
            } else if (zone_kind == 0) {
                if (aw < pole_tol) {
                    row.fate = "pole";
                    break;
                }
                next = schedule.ellipse(n).value(w) + model.center(n + 1);
            } else {
                const Complex dir = w / aw;
                const double s = (aw - r) / (rp - r);
                const Complex gv = schedule.ellipse(n).value(r * dir);
                const Complex bv = schedule.factors.factor(n + 1).value(rp * dir);
                next = (1.0 - s) * gv + s * bv + model.center(n + 1);
            }
            if (!is_finite(next)) {
                row.fate = "pole";
                break;
            }
            z = next;
            row.steps = step + 1;
        }

        for (const auto& [ann, cnt] : entries) {
            (void)ann;
            row.annuli_entered += 1;
            row.max_entries = std::max(row.max_entries, cnt);
        }
        rep.max_visits = std::max(rep.max_visits, row.max_entries);
        if (row.fate == "escaped") ++rep.escapes;
        else if (row.fate == "pole") ++rep.pole_captures;
        else ++rep.completed;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// Draws a seeded sample cloud and audits it; region metadata is filled in.
inline AuditReport audit_no_revisit(const SurgerySchedule& schedule, const ChainModel& model,
                                    int samples, int horizon, std::uint64_t seed = 1,
                                    AuditRegion region = AuditRegion::omega_annulus) {
    const AuditSamples cloud = draw_audit_samples(schedule, model, region, samples, seed);
    AuditReport rep = audit_no_revisit(schedule, model, cloud.points, horizon);
    rep.sample_inner = cloud.inner;
    rep.sample_outer = cloud.outer;
    rep.region_detected = cloud.region_detected;
    return rep;
}

// ---------------------------------------------------------------------------
// Flat-signature conveniences.

inline Complex joukowski_eval(const JoukowskiMap& map, Complex z) { return map.value(z); }

inline double cond2_gamma_bound(const JoukowskiMap& map) { return map.cond2_bound(); }

inline double cond2_blaschke_bound(double a, double r_prime, double epsilon_budget,
                                   int samples = 4096) {
    return cond2_blaschke_bound(BlaschkeFactor(a), r_prime, epsilon_budget, samples).bound;
}

inline double cond1_bound(double a, const JoukowskiMap& map, double r_prime,
                          double epsilon_budget, int samples = 4096) {
    return cond1_bound(BlaschkeFactor(a), map, map.r, r_prime, epsilon_budget, samples).bound;
}

} // namespace wanderlab
