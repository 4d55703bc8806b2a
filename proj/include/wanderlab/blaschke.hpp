#pragma once

// Degree-two Blaschke factors b_a(z) = z (z + a) / (1 + a z) with real
// parameter a in [0, 1), schedules of factor parameters, and their forward
// compositions B_n = b_{a_n} o ... o b_{a_1}. Each b_a fixes 0 and the unit
// circle, and b_a'(0) = a, so |B_n'(0)| is the running product of the a_k and
// the classical criterion reads: with all a_k > 0,
//     sum (1 - a_k) = +infinity  <=>  |B_n'(0)| -> 0.
//
// Parameters very close to 1 are kept as gaps g = 1 - a, which stay exactly
// representable long after 1 - g rounds to 1; the bound computations that
// must resolve such factors work through the gap.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

struct BlaschkeFactor {
    double a;   // parameter (rounds to 1.0 when gap < 2^-53)
    double gap; // 1 - a, exact

    explicit BlaschkeFactor(double a_) : a(a_), gap(1.0 - a_) {
        if (!(a_ >= 0.0) || !(a_ < 1.0))
            throw std::invalid_argument("BlaschkeFactor: parameter must lie in [0,1)");
    }

    static BlaschkeFactor from_gap(double g) {
        if (!(g > 0.0 && g <= 1.0))
            throw std::invalid_argument("BlaschkeFactor: gap must lie in (0,1]");
        BlaschkeFactor f(0.0);
        f.a = 1.0 - g;
        f.gap = g;
        return f;
    }

    double derivative_at_zero() const { return a; }

    // Rational form, valid away from the pole z = -1/a; no disc check.
    Complex value(Complex z) const { return z * (z + a) / (1.0 + a * z); }

    Complex derivative(Complex z) const {
        const Complex d = 1.0 + a * z;
        return (a * z * z + 2.0 * z + a) / (d * d);
    }

    // z b'(z)/b(z) - 1 simplifies exactly to z (1 - a^2) / ((1 + a z)(z + a)),
    // evaluated through the gap so it keeps full relative precision as a -> 1.
    Complex log_derivative_excess(Complex z) const {
        return z * (gap * (1.0 + a)) / ((1.0 + a * z) * (z + a));
    }

    // b(z)/z - 1 = (z - 1) g / (1 + a z), again exact in the gap.
    Complex radial_ratio_minus_one(Complex z) const {
        return (z - 1.0) * gap / (1.0 + a * z);
    }
};

// Checked evaluation on the closed unit disc.
inline Complex evaluate_factor(const BlaschkeFactor& f, Complex z) {
    if (!is_finite(z)) throw std::domain_error("evaluate_factor: non-finite point");
    if (std::abs(z) > 1.0 + 1e-12)
        throw std::domain_error("evaluate_factor: point outside the closed unit disc");
    return f.value(z);
}

inline double factor_derivative_at_zero(const BlaschkeFactor& f) { return f.a; }

enum class ScheduleFamily { harmonic, geometric, constant, trivial, list };
enum class CriterionVerdict { diverging, converging, inconclusive };

// Parameter schedule a_1, a_2, ... drawn from a closed-form family:
//   harmonic   a_n = 1 - 1/(n+1)        (criterion sum diverges)
//   geometric  a_n = 1 - q^n, 0<q<1     (criterion sum converges)
//   constant   a_n = v in (0,1)         (diverges)
//   trivial    a_n = 0, b(z) = z^2      (diverges)
//   list       explicit values, continued past the end by geometric gap decay
//              from the last entry when a tail ratio is given.
// `offset` shifts the index: a schedule shifted by k produces a_{n+k}.
struct FactorSchedule {
    ScheduleFamily family = ScheduleFamily::trivial;
    double q = 0.0;
    double value = 0.0;
    std::vector<double> values;
    double tail_q = 0.0; // 0 = no tail rule for list schedules
    int offset = 0;

    static FactorSchedule harmonic() {
        FactorSchedule s;
        s.family = ScheduleFamily::harmonic;
        return s;
    }
    static FactorSchedule geometric(double ratio) {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw std::invalid_argument("FactorSchedule: geometric ratio must lie in (0,1)");
        FactorSchedule s;
        s.family = ScheduleFamily::geometric;
        s.q = ratio;
        return s;
    }
    static FactorSchedule constant(double v) {
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("FactorSchedule: constant value must lie in (0,1)");
        FactorSchedule s;
        s.family = ScheduleFamily::constant;
        s.value = v;
        return s;
    }
    static FactorSchedule trivial() { return FactorSchedule{}; }
    static FactorSchedule list(std::vector<double> vals, double tail_ratio = 0.0) {
        if (vals.empty()) throw std::invalid_argument("FactorSchedule: empty list");
        for (double v : vals)
            if (!(v >= 0.0 && v < 1.0))
                throw std::invalid_argument("FactorSchedule: list entry outside [0,1)");
        if (tail_ratio != 0.0 && !(tail_ratio > 0.0 && tail_ratio < 1.0))
            throw std::invalid_argument("FactorSchedule: tail ratio must lie in (0,1)");
        FactorSchedule s;
        s.family = ScheduleFamily::list;
        s.values = std::move(vals);
        s.tail_q = tail_ratio;
        return s;
    }

    FactorSchedule shifted(int k) const {
        if (k < 0) throw std::invalid_argument("FactorSchedule: negative shift");
        FactorSchedule s = *this;
        s.offset += k;
        return s;
    }

    // gap(n) = 1 - a_n for n >= 1.
    double gap(int n) const {
        if (n < 1) throw std::invalid_argument("FactorSchedule: index must be >= 1");
        const int m = n + offset;
        switch (family) {
            case ScheduleFamily::harmonic: return 1.0 / (m + 1.0);
            case ScheduleFamily::geometric: return std::pow(q, double(m));
            case ScheduleFamily::constant: return 1.0 - value;
            case ScheduleFamily::trivial: return 1.0;
            case ScheduleFamily::list: {
                const int len = int(values.size());
                if (m <= len) return 1.0 - values[std::size_t(m - 1)];
                if (tail_q == 0.0)
                    throw std::domain_error("FactorSchedule: list exhausted at index " +
                                            std::to_string(m) + " and no tail rule given");
                return (1.0 - values.back()) * std::pow(tail_q, double(m - len));
            }
        }
        throw std::logic_error("FactorSchedule: bad family");
    }

    double a(int n) const { return 1.0 - gap(n); }

    BlaschkeFactor factor(int n) const {
        double g = gap(n);
        if (g >= 1.0) return BlaschkeFactor(0.0);
        // Deep geometric tails underflow; the limiting factor acts as the
        // identity, which the smallest positive gap represents exactly.
        if (g <= 0.0) g = std::numeric_limits<double>::denorm_min();
        return BlaschkeFactor::from_gap(g);
    }

    CriterionVerdict verdict_hint() const {
        switch (family) {
            case ScheduleFamily::harmonic:
            case ScheduleFamily::constant:
            case ScheduleFamily::trivial: return CriterionVerdict::diverging;
            case ScheduleFamily::geometric: return CriterionVerdict::converging;
            case ScheduleFamily::list: return CriterionVerdict::inconclusive;
        }
        throw std::logic_error("FactorSchedule: bad family");
    }
};

// Running state of the forward composition B_n: index, |B_n'(0)| and the
// partial criterion sum, advanced one factor at a time.
struct CompositionState {
    const FactorSchedule* schedule = nullptr;
    int index = 0;
    double derivative_at_zero = 1.0;
    double criterion_partial_sum = 0.0;

    explicit CompositionState(const FactorSchedule& s) : schedule(&s) {}

    void advance() {
        ++index;
        derivative_at_zero *= schedule->a(index);
        criterion_partial_sum += schedule->gap(index);
    }

    Complex evaluate(Complex z) const {
        if (std::abs(z) >= 1.0)
            throw std::domain_error("CompositionState: point not inside the unit disc");
        Complex w = z;
        for (int k = 1; k <= index; ++k) w = schedule->factor(k).value(w);
        return w;
    }
};

// B_n(z) by the forward loop.
inline Complex compose(const FactorSchedule& schedule, int n, Complex z) {
    if (n < 0) throw std::invalid_argument("compose: negative depth");
    if (!is_finite(z) || std::abs(z) >= 1.0)
        throw std::domain_error("compose: point not inside the unit disc");
    Complex w = z;
    for (int k = 1; k <= n; ++k) w = schedule.factor(k).value(w);
    return w;
}

struct CriterionReport {
    double partial_sum = 0.0;        // sum of (1 - a_n), n <= N
    double derivative_product = 0.0; // product of a_n, n <= N
    CriterionVerdict verdict_hint = CriterionVerdict::inconclusive;
};

inline CriterionReport criterion_report(const FactorSchedule& schedule, int N) {
    if (N < 1) throw std::invalid_argument("criterion_report: need N >= 1");
    CriterionReport rep;
    rep.derivative_product = 1.0;
    for (int n = 1; n <= N; ++n) {
        rep.partial_sum += schedule.gap(n);
        rep.derivative_product *= schedule.a(n);
    }
    rep.verdict_hint = schedule.verdict_hint();
    return rep;
}

struct LimitFieldReport {
    std::vector<Complex> values; // last computed B_n at the grid points
    int stabilized_at = -1;      // first n with two consecutive sup-changes below tol
    bool converged = false;
};

// Iterate the composition on a grid until the sup-norm change stays below tol
// for two consecutive steps, or the iteration cap is hit. Pointwise
// stabilization is only expected for schedules whose criterion sum converges;
// diverging schedules typically return converged = false with values near 0.
inline LimitFieldReport estimate_limit_function(const FactorSchedule& schedule,
                                                const std::vector<Complex>& grid,
                                                double tol, int max_steps = 5000) {
    if (grid.empty()) throw std::invalid_argument("estimate_limit_function: empty grid");
    if (!(tol > 0.0)) throw std::invalid_argument("estimate_limit_function: tolerance must be positive");
    for (Complex z : grid)
        if (!is_finite(z) || std::abs(z) >= 1.0)
            throw std::domain_error("estimate_limit_function: grid point not inside the unit disc");

    LimitFieldReport rep;
    rep.values = grid;
    int quiet = 0;
    for (int n = 1; n <= max_steps; ++n) {
        const BlaschkeFactor f = schedule.factor(n);
        double sup = 0.0;
        for (Complex& v : rep.values) {
            const Complex next = f.value(v);
            sup = std::max(sup, std::abs(next - v));
            v = next;
        }
        quiet = (sup < tol) ? quiet + 1 : 0;
        if (quiet >= 2) {
            rep.stabilized_at = n;
            rep.converged = true;
            return rep;
        }
    }
    return rep;
}

struct AnnulusDetection {
    bool found = false;
    double inner = 0.0; // s: annulus is {inner < |z| < outer} on the sample grid
    double outer = 0.0;
    double threshold = 0.0;
    bool derivative_floor_warning = false; // |B_N'(0)| fell below the floor
};

// Widest round annulus (on the sampled radii) where min over angles of |B_N|
// exceeds c. Radii are sampled uniformly in (0,1); the reported bounds are the
// neighboring non-qualifying radii, clamped to the sampled range at the ends.
inline AnnulusDetection detect_annulus(const FactorSchedule& schedule, double c, int N,
                                       int radial_samples = 64, int angular_samples = 128,
                                       double derivative_floor = 1e-3) {
    if (!(c >= 0.0)) throw std::invalid_argument("detect_annulus: negative threshold");
    if (radial_samples < 2 || angular_samples < 8)
        throw std::invalid_argument("detect_annulus: too few samples");

    std::vector<double> radii(std::size_t(radial_samples), 0.0);
    std::vector<bool> qualifies(std::size_t(radial_samples), false);
    for (int i = 0; i < radial_samples; ++i)
        radii[std::size_t(i)] = double(i + 1) / (radial_samples + 1.0);

    for (int i = 0; i < radial_samples; ++i) {
        const double r = radii[std::size_t(i)];
        double min_mod = std::numeric_limits<double>::infinity();
        for (int j = 0; j < angular_samples; ++j) {
            const double th = 2.0 * M_PI * j / angular_samples;
            const Complex z = std::polar(r, th);
            min_mod = std::min(min_mod, std::abs(compose(schedule, N, z)));
            if (min_mod <= c) break;
        }
        qualifies[std::size_t(i)] = min_mod > c;
    }

    AnnulusDetection det;
    det.threshold = c;
    det.derivative_floor_warning =
        criterion_report(schedule, N).derivative_product < derivative_floor;

    int best_i = -1, best_j = -1;
    double best_width = -1.0;
    int i = 0;
    while (i < radial_samples) {
        if (!qualifies[std::size_t(i)]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < radial_samples && qualifies[std::size_t(j + 1)]) ++j;
        const double lo = (i > 0) ? radii[std::size_t(i - 1)] : radii[std::size_t(i)];
        const double hi = (j + 1 < radial_samples) ? radii[std::size_t(j + 1)] : radii[std::size_t(j)];
        if (hi - lo > best_width) {
            best_width = hi - lo;
            best_i = i;
            best_j = j;
        }
        i = j + 1;
    }
    if (best_i < 0) return det;
    det.found = true;
    det.inner = (best_i > 0) ? radii[std::size_t(best_i - 1)] : radii[std::size_t(best_i)];
    det.outer = (best_j + 1 < radial_samples) ? radii[std::size_t(best_j + 1)]
                                              : radii[std::size_t(best_j)];
    return det;
}

} // namespace wanderlab
