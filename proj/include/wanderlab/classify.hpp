#pragma once

// Trichotomy for a non-increasing normalized distance sequence u_0 >= u_1 >= ...
//   contracting          u_n -> 0
//   semi_contracting     u_n -> c > 0 but no tail is constant
//   eventually_isometric u_n is constant from some onset m on
//
// At a finite horizon the three regimes are separated by how the sequence
// settles. A numerically flat tail (oscillation below eps_flat) that begins
// with a visible jump marks an isometric onset: rounding noise cannot
// produce a drop orders of magnitude above the flatness scale. A flat tail
// the sequence fades into -- final decrements comparable to eps_flat and a
// steady decay ratio beforehand -- is a strictly decreasing sequence that has
// converged in double precision, i.e. semi-contracting. Without any flat
// tail, steady window-over-window decrease still certifies semi-contraction;
// anything else stays undecided.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wanderlab/chain.hpp"

namespace wanderlab {

struct ClassifyParams {
    double eps_contract = 1e-6; // u_N below this => contracting
    double eps_flat = 1e-12;    // oscillation below this counts as flat
    int window = 50;            // decrease-test window length
    double jump_factor = 100.0; // onset jump must exceed jump_factor * eps_flat
};

enum class TrichotomyKind { contracting, semi_contracting, eventually_isometric, undecided };

inline std::string to_string(TrichotomyKind k) {
    switch (k) {
        case TrichotomyKind::contracting: return "contracting";
        case TrichotomyKind::semi_contracting: return "semi_contracting";
        case TrichotomyKind::eventually_isometric: return "eventually_isometric";
        default: return "undecided";
    }
}

struct TrichotomyVerdict {
    TrichotomyKind kind = TrichotomyKind::undecided;
    double limit_estimate = std::numeric_limits<double>::quiet_NaN();
    int isometry_onset = -1; // first index of the constant tail, when isometric
    std::string diagnostics;
};

namespace detail {

// Aitken delta-squared extrapolation of the final entries, used when the
// decrements show a stable geometric ratio; otherwise the last value stands.
inline double tail_limit_estimate(const std::vector<double>& u) {
    const std::size_t n = u.size();
    const double last = u[n - 1];
    if (n < 7) return last;
    std::vector<double> ratios;
    for (std::size_t i = n - 6; i + 1 < n; ++i) {
        const double d0 = u[i - 1] - u[i];
        const double d1 = u[i] - u[i + 1];
        if (d0 > 0.0 && d1 > 0.0) ratios.push_back(d1 / d0);
    }
    if (ratios.size() < 4) return last;
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[sorted.size() / 2];
    if (!(med > 0.05 && med < 0.98)) return last;
    for (double r : ratios)
        if (std::abs(r - med) > 0.25 * med) return last;
    const double a0 = u[n - 3], a1 = u[n - 2], a2 = u[n - 1];
    const double denom = (a2 - a1) - (a1 - a0);
    if (denom == 0.0) return last;
    const double aitken = a2 - (a2 - a1) * (a2 - a1) / denom;
    return std::isfinite(aitken) && aitken >= 0.0 ? aitken : last;
}

} // namespace detail

inline TrichotomyVerdict classify_sequence(const std::vector<double>& u,
                                           const ClassifyParams& p = {}) {
    if (p.window < 2) throw std::invalid_argument("classify_sequence: window must be >= 2");
    if (!(p.eps_flat > 0.0) || !(p.eps_contract > 0.0))
        throw std::invalid_argument("classify_sequence: tolerances must be positive");
    const int N = int(u.size()) - 1;
    if (N < 2 * p.window)
        throw std::invalid_argument("classify_sequence: horizon must be >= 2 * window");
    for (double v : u)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("classify_sequence: entries must be finite and >= 0");

    TrichotomyVerdict v;

    if (u.back() < p.eps_contract) {
        v.kind = TrichotomyKind::contracting;
        v.limit_estimate = 0.0;
        v.diagnostics = "final value " + std::to_string(u.back()) + " below eps_contract";
        return v;
    }

    // Least m such that u restricted to [m, N] oscillates below eps_flat.
    int flat_onset = -1;
    {
        double mx = u[std::size_t(N)], mn = u[std::size_t(N)];
        for (int m = N; m >= 0; --m) {
            mx = std::max(mx, u[std::size_t(m)]);
            mn = std::min(mn, u[std::size_t(m)]);
            if (mx - mn < p.eps_flat) flat_onset = m;
        }
    }

    if (flat_onset >= 1 && flat_onset <= N - p.window) {
        const double jump = u[std::size_t(flat_onset - 1)] - u[std::size_t(flat_onset)];
        if (jump > p.jump_factor * p.eps_flat) {
            v.kind = TrichotomyKind::eventually_isometric;
            v.isometry_onset = flat_onset;
            v.limit_estimate = u.back();
            v.diagnostics = "flat tail from " + std::to_string(flat_onset) +
                            " entered with jump " + std::to_string(jump);
            return v;
        }
        // Faded into flatness: check for a steady decay ratio beforehand.
        std::vector<double> ratios;
        for (int i = std::max(1, flat_onset - p.window); i < flat_onset; ++i) {
            const double d0 = u[std::size_t(i - 1)] - u[std::size_t(i)];
            const double d1 = u[std::size_t(i)] - u[std::size_t(i + 1)];
            if (d0 > 0.0 && d1 >= 0.0) ratios.push_back(d1 / d0);
        }
        if (ratios.size() >= 3) {
            std::sort(ratios.begin(), ratios.end());
            const double med = ratios[ratios.size() / 2];
            if (med <= 0.95) {
                v.kind = TrichotomyKind::semi_contracting;
                v.limit_estimate = detail::tail_limit_estimate(u);
                v.diagnostics = "decay faded into flat tail (median decrement ratio " +
                                std::to_string(med) + ")";
                return v;
            }
        }
        v.kind = TrichotomyKind::undecided;
        v.limit_estimate = u.back();
        v.diagnostics = "flat tail without clear onset jump or decay pattern";
        return v;
    }

    if (flat_onset == 0) {
        // Constant from the start: an isometric orbit pair with no visible onset.
        v.kind = TrichotomyKind::eventually_isometric;
        v.isometry_onset = 0;
        v.limit_estimate = u.back();
        v.diagnostics = "sequence flat over the whole horizon";
        return v;
    }

    // No usable flat tail: require a strict decrease across every window.
    bool every_window_drops = true;
    for (int i = 0; i + p.window <= N; ++i) {
        if (!(u[std::size_t(i)] - u[std::size_t(i + p.window)] > p.eps_flat)) {
            every_window_drops = false;
            break;
        }
    }
    if (every_window_drops) {
        v.kind = TrichotomyKind::semi_contracting;
        v.limit_estimate = detail::tail_limit_estimate(u);
        v.diagnostics = "strict decrease across every window of length " +
                        std::to_string(p.window);
        return v;
    }

    v.kind = TrichotomyKind::undecided;
    v.limit_estimate = u.back();
    v.diagnostics = "no flat tail and no uniform window decrease";
    return v;
}

inline TrichotomyVerdict classify(const OrbitPairTrace& trace, const ClassifyParams& p = {}) {
    return classify_sequence(trace.series(), p);
}

inline TrichotomyVerdict classify(const OrbitPairTrace& trace, double eps_contract,
                                  double eps_flat, int window) {
    ClassifyParams p;
    p.eps_contract = eps_contract;
    p.eps_flat = eps_flat;
    p.window = window;
    return classify_sequence(trace.series(), p);
}

} // namespace wanderlab
