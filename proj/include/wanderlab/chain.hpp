#pragma once

// The translated-disc chain model: around each center 4n sit nested discs
//   D'_n = B(4n, r_n)  and  D_n = B(4n, R_n),   0 < r_n < 1 < R_n,
// and the step map conjugates a Blaschke factor by the translations,
//   f_n = T_{n+1} o b_{a_{n+1}} o T_n^{-1},  T_n(z) = z + 4n,
// optionally plus a small analytic perturbation. The marked orbit of 0 visits
// the centers: f_n(4n) = 4(n+1).
//
// Default radii follow the factor schedule, r_n = (1 + a_{n+1})/2 and
// R_n = 2 - r_n. That keeps both preimages of the next center (0 and
// -a_{n+1} in disc coordinates) inside D'_n, so each step has degree two
// there, and it keeps the pole -1/a_{n+1} outside D_n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wanderlab/blaschke.hpp"
#include "wanderlab/curves.hpp"
#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

struct RadiiRule {
    enum class Mode { schedule_tied, geometric };
    Mode mode = Mode::schedule_tied;
    double inner_gap0 = 0.25; // geometric mode: r_n = 1 - inner_gap0 * ratio^n
    double outer_gap0 = 0.25; //                 R_n = 1 + outer_gap0 * ratio^n
    double ratio = 0.5;
};

struct PerturbationRule {
    bool enabled = false;
    double scale = 0.125; // budget for step n is scale * ratio^(n+1) * (R_{n+1} - r_{n+1})
    double ratio = 0.25;
    int degree = 3;
    std::uint64_t seed = 1;
};

struct ChainModel {
    FactorSchedule schedule;
    double translation_step = 4.0;
    RadiiRule radii;
    PerturbationRule perturbation;
    int isometric_from = -1;      // >= 0: steps at or past this index rotate instead
    double rotation_angle = 0.5;  // radians, used by the synthetic rotation mode

    double center(int n) const { return translation_step * n; }

    double inner_radius(int n) const {
        if (n < 0) throw std::invalid_argument("ChainModel: negative chain index");
        if (radii.mode == RadiiRule::Mode::schedule_tied)
            return 1.0 - 0.5 * schedule.gap(n + 1);
        return 1.0 - radii.inner_gap0 * std::pow(radii.ratio, double(n));
    }

    double outer_radius(int n) const {
        if (n < 0) throw std::invalid_argument("ChainModel: negative chain index");
        if (radii.mode == RadiiRule::Mode::schedule_tied)
            return 1.0 + 0.5 * schedule.gap(n + 1);
        return 1.0 + radii.outer_gap0 * std::pow(radii.ratio, double(n));
    }

    // Budget bound for the perturbation added at step n (the deviation of f
    // from the conjugated factor on the closure of D_n), kept under a quarter
    // of the gap R - r at the matching index.
    double perturbation_budget(int n) const {
        if (!perturbation.enabled) return 0.0;
        const int m = n + 1;
        const double width = outer_radius(m) - inner_radius(m);
        return perturbation.scale * std::pow(perturbation.ratio, double(m)) * width;
    }

    // Low-degree polynomial with unit-disc coefficients drawn from a per-step
    // engine, normalized to the sup bound on |w| <= R_n and vanishing at 0 so
    // the marked orbit stays exactly on the centers.
    Complex perturbation_value(int n, Complex w) const {
        const double budget = perturbation_budget(n);
        if (budget == 0.0) return {0.0, 0.0};
        std::mt19937_64 eng(perturbation.seed ^ (0x9E3779B97F4A7C15ull * std::uint64_t(n + 1)));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<Complex> coeff(std::size_t(perturbation.degree));
        double norm = 0.0;
        const double R = outer_radius(n);
        double Rj = R;
        for (int j = 1; j <= perturbation.degree; ++j) {
            const double re = unit(eng), im = unit(eng);
            coeff[std::size_t(j - 1)] = Complex(re, im);
            norm += std::abs(coeff[std::size_t(j - 1)]) * Rj;
            Rj *= R;
        }
        if (norm == 0.0) return {0.0, 0.0};
        Complex acc(0.0, 0.0);
        Complex wj = w;
        for (int j = 1; j <= perturbation.degree; ++j) {
            acc += coeff[std::size_t(j - 1)] * wj;
            wj *= w;
        }
        return acc * (budget / norm);
    }

    // One model step; requires z in the open disc D_n.
    Complex step(int n, Complex z) const {
        if (n < 0) throw std::invalid_argument("ChainModel: negative chain index");
        const Complex w = z - center(n);
        if (!is_finite(z) || std::abs(w) >= outer_radius(n))
            throw std::domain_error("ChainModel: point outside the chain disc");
        Complex v;
        if (isometric_from >= 0 && n >= isometric_from) {
            v = std::polar(1.0, rotation_angle) * w;
        } else {
            v = schedule.factor(n + 1).value(w) + perturbation_value(n, w);
        }
        return v + center(n + 1);
    }
};

inline Complex model_step(const ChainModel& model, int n, Complex z) {
    return model.step(n, z);
}

enum class MetricMode { exact_disc_model, bracketed };

// Distances along a pair of orbits, normalized at each index by T_n.
//   exact mode: u_n = d(z_n - 4n, w_n - 4n) in the unit disc. Legitimate
//   ground truth for the unperturbed model, where the conjugated step is
//   exactly a disc self-map fixing 0 and Schwarz-Pick gives u_{n+1} <= u_n.
//   bracketed mode: lower_n from the outer disc D_n and upper_n from the
//   inner disc D'_n (NaN when an iterate leaves D'_n); the true domain
//   distance sits between them whenever D'_n c U_n c D_n.
struct OrbitPairTrace {
    Complex base{0.0, 0.0}, other{0.0, 0.0};
    int start_index = 0;
    MetricMode mode = MetricMode::exact_disc_model;
    std::vector<double> exact;
    std::vector<double> lower;
    std::vector<double> upper;
    int escape_index = -1;    // chain index at which an orbit left its disc
    int collision_index = -1; // first index with |z_n - w_n| < 1e-13

    int horizon() const {
        const std::size_t n = exact.empty() ? lower.size() : exact.size();
        return int(n) - 1;
    }

    const std::vector<double>& series() const { return exact.empty() ? lower : exact; }
};

inline OrbitPairTrace pair_trace(const ChainModel& model, Complex z0, Complex w, int N,
                                 MetricMode mode = MetricMode::exact_disc_model,
                                 int start_index = 0) {
    if (N < 0) throw std::invalid_argument("pair_trace: negative horizon");
    OrbitPairTrace tr;
    tr.base = z0;
    tr.other = w;
    tr.start_index = start_index;
    tr.mode = mode;

    Complex z = z0, p = w;
    for (int k = 0; k <= N; ++k) {
        const int n = start_index + k;
        const Complex zn = z - model.center(n);
        const Complex pn = p - model.center(n);
        if (tr.collision_index < 0 && std::abs(zn - pn) < 1e-13) tr.collision_index = n;

        if (mode == MetricMode::exact_disc_model) {
            if (std::abs(zn) >= 1.0 || std::abs(pn) >= 1.0) {
                tr.escape_index = n;
                break;
            }
            tr.exact.push_back(disc_distance(zn, pn));
        } else {
            const double R = model.outer_radius(n);
            if (std::abs(zn) >= R || std::abs(pn) >= R) {
                tr.escape_index = n;
                break;
            }
            tr.lower.push_back(disc_distance(zn / R, pn / R));
            const double r = model.inner_radius(n);
            if (std::abs(zn) < r && std::abs(pn) < r)
                tr.upper.push_back(disc_distance(zn / r, pn / r));
            else
                tr.upper.push_back(std::numeric_limits<double>::quiet_NaN());
        }

        if (k == N) break;
        try {
            z = model.step(n, z);
            p = model.step(n, p);
        } catch (const std::domain_error&) {
            tr.escape_index = n + 1;
            break;
        }
    }
    return tr;
}

struct UFieldReport {
    std::vector<double> u_final;   // u_N per grid point
    std::vector<double> sup_gaps;  // sup over the grid of u_n - u_N, n in the tail window
    int gap_start = 0;             // chain offset of sup_gaps[0]
};

// Distance field u_n(p) = d(orbit of p, orbit of z0) at depth N over a grid,
// with the tail of sup-norm gaps that witnesses uniform convergence.
inline UFieldReport u_field(const ChainModel& model, Complex z0,
                            const std::vector<Complex>& grid, int N, int tail_window = 20) {
    if (grid.empty()) throw std::invalid_argument("u_field: empty grid");
    if (N < 1) throw std::invalid_argument("u_field: need depth >= 1");
    UFieldReport rep;
    rep.gap_start = std::max(0, N - tail_window);
    rep.sup_gaps.assign(std::size_t(N - rep.gap_start + 1), 0.0);
    rep.u_final.reserve(grid.size());
    for (Complex p : grid) {
        const OrbitPairTrace tr = pair_trace(model, z0, p, N, MetricMode::exact_disc_model);
        if (tr.escape_index >= 0)
            throw std::domain_error("u_field: grid orbit escaped its chain disc");
        const double uN = tr.exact.back();
        rep.u_final.push_back(uN);
        for (int n = rep.gap_start; n <= N; ++n) {
            double& g = rep.sup_gaps[std::size_t(n - rep.gap_start)];
            g = std::max(g, tr.exact[std::size_t(n)] - uN);
        }
    }
    return rep;
}

// The distance field is a dynamical invariant: evaluating from the base pair
// (z0, p) at absolute depth N must match evaluating from the advanced pair
// (f(z0), f(p)) truncated at the same absolute chain index. Returns the
// largest discrepancy over the grid.
inline double invariance_check(const ChainModel& model, Complex z0,
                               const std::vector<Complex>& grid, int N) {
    if (N < 1) throw std::invalid_argument("invariance_check: need depth >= 1");
    double worst = 0.0;
    for (Complex p : grid) {
        const OrbitPairTrace a = pair_trace(model, z0, p, N, MetricMode::exact_disc_model, 0);
        if (a.escape_index >= 0)
            throw std::domain_error("invariance_check: orbit escaped its chain disc");
        const Complex z1 = model.step(0, z0);
        const Complex p1 = model.step(0, p);
        const OrbitPairTrace b = pair_trace(model, z1, p1, N - 1, MetricMode::exact_disc_model, 1);
        if (b.escape_index >= 0)
            throw std::domain_error("invariance_check: advanced orbit escaped its chain disc");
        worst = std::max(worst, std::abs(a.exact.back() - b.exact.back()));
    }
    return worst;
}

// Winding number of the image of the circle |z - 4n| = r_n under step n
// around each target; 2 certifies the local degree of the step.
//
// The circle is swept uniformly plus a dyadic bundle of samples graded into
// theta = pi. The step map is an affine conjugate of a real-coefficient
// Blaschke factor (plus a bounded low-degree perturbation), so its speed
// along the circle is tame except inside a window of width ~ 1 - a_{n+1}
// around the antipode, where the image dives toward the origin and back. A
// uniform sweep with any fixed count steps straight over that window once
// the factor gap is small, silently dropping a full turn of the image
// argument; the graded bundle keeps several samples in every dyadic scale
// down to parameter precision, so the sampled polygon stays faithful for
// every gap the schedule can produce.
inline std::vector<int> degree_check(const ChainModel& model, int n,
                                     const std::vector<Complex>& targets, int samples = 512) {
    if (samples < 64) throw std::invalid_argument("degree_check: too few samples");
    const double r = model.inner_radius(n);

    std::vector<double> params;
    params.reserve(std::size_t(samples) + 420);
    for (int j = 0; j < samples; ++j) params.push_back(2.0 * M_PI * j / samples);
    for (int l = 1; l <= 52; ++l) {
        const double scale = M_PI * std::ldexp(1.0, -l);
        for (double mult : {1.0, 1.2, 1.44, 1.7}) {
            params.push_back(M_PI - scale * mult);
            params.push_back(M_PI + scale * mult);
        }
    }
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());

    std::vector<Complex> image;
    image.reserve(params.size());
    for (double th : params) {
        const Complex z = model.center(n) + std::polar(r, th);
        const Complex w = model.step(n, z);
        // Sub-ulp parameter steps can reproduce a point; the polygon only
        // needs distinct consecutive vertices.
        if (image.empty() || w != image.back()) image.push_back(w);
    }
    while (image.size() > 1 && image.front() == image.back()) image.pop_back();

    const CurveSample curve(std::move(image), true);
    std::vector<int> out;
    out.reserve(targets.size());
    for (Complex t : targets) out.push_back(winding_number(curve, t));
    return out;
}

} // namespace wanderlab
