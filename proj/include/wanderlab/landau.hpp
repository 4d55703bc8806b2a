#pragma once

// Hyperbolic Landau-type lower bound for finite Blaschke compositions.
//
// A holomorphic f on the unit disc with f(0) = 0 and 0 < |f'(0)| < 1 covers,
// by the classical Bloch-Landau circle of radius B * rho * |f'(s)| attached
// to a well-chosen interior point s, a hyperbolic disc about 0 of radius at
// least 2 * B * r* * |f'(0)| with r* = tanh(1/2): on the euclidean disc
// B(0, r*) the hyperbolic and euclidean scales differ by a factor the bound
// absorbs, and |f'| on that disc is controlled below by |f'(0)| via
// Schwarz-Pick. The check measures the covered hyperbolic radius of the
// image of B(0, r*) and compares against the guarantee.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wanderlab/blaschke.hpp"
#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

struct LandauReport {
    double derivative_at_zero = 0.0; // product of the factor derivatives a_k
    double guaranteed = 0.0;         // 2 * B * tanh(1/2) * |f'(0)|
    double measured = 0.0;           // largest covered hyperbolic radius found
    double resolution = 0.0;         // grid slack added to `measured` when passing
    bool pass = false;
};

// Measures the covered hyperbolic disc radius of the composition of the given
// factors and compares with the guaranteed lower bound. The composition fixes
// 0, and a point w is covered exactly when the image of the boundary circle
// |z| = r* winds around it at least once (argument principle). The boundary
// of the omitted set lies on that image curve, so the covered radius is found
// by walking each ray from 0 outward through the curve's signed crossings
// until the winding number drops to zero. Compositions fold: the curve may
// pass close to 0 on an inner sheet without bounding the image there, which
// is why the plain minimum of |f| over the curve would under-measure.
inline LandauReport landau_check(const std::vector<BlaschkeFactor>& factors,
                                 int grid_resolution = 1024, double bloch_constant = 0.433) {
    if (factors.empty()) throw std::invalid_argument("landau_check: no factors");
    if (grid_resolution < 64) throw std::invalid_argument("landau_check: resolution too small");
    if (!(bloch_constant > 0.0)) throw std::invalid_argument("landau_check: bad Bloch constant");

    LandauReport rep;
    rep.derivative_at_zero = 1.0;
    for (const BlaschkeFactor& b : factors) rep.derivative_at_zero *= b.a;
    if (!(rep.derivative_at_zero > 0.0 && rep.derivative_at_zero < 1.0))
        throw std::domain_error("landau_check: composition derivative must lie in (0,1)");

    const double r_star = std::tanh(0.5);
    rep.guaranteed = 2.0 * bloch_constant * r_star * rep.derivative_at_zero;

    // Image of the boundary circle of B(0, r*), sampled densely.
    const int n_theta = 4 * grid_resolution;
    std::vector<Complex> curve(std::size_t(n_theta), Complex{});
    for (int j = 0; j < n_theta; ++j) {
        Complex w = std::polar(r_star, 2.0 * M_PI * j / n_theta);
        for (const BlaschkeFactor& b : factors) w = b.value(w);
        curve[std::size_t(j)] = w;
    }

    // For each probe ray, collect the forward crossings of the polygonal
    // curve with their orientation signs, then walk outward from 0: the
    // winding number starts at the signed total and loses each crossing's
    // sign in radial order; coverage ends where it first reaches zero.
    const int n_rays = n_theta;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> crossings;
    for (int i = 0; i < n_rays; ++i) {
        // Offset keeps curve samples off the ray in all symmetric setups.
        const double phi = 2.0 * M_PI * (i + 0.2471) / n_rays;
        const Complex rot = std::polar(1.0, -phi);
        crossings.clear();
        Complex prev = curve[std::size_t(n_theta - 1)] * rot;
        for (int j = 0; j < n_theta; ++j) {
            const Complex cur = curve[std::size_t(j)] * rot;
            if ((prev.imag() > 0.0) != (cur.imag() > 0.0)) {
                const double t = prev.imag() / (prev.imag() - cur.imag());
                const double x = prev.real() + t * (cur.real() - prev.real());
                if (x > 0.0) crossings.emplace_back(x, cur.imag() > 0.0 ? 1 : -1);
            }
            prev = cur;
        }
        int winding = 0;
        for (const auto& [x, s] : crossings) winding += s;
        if (winding == 0) {
            // Signed crossings cancel along this ray, so the sampled curve
            // does not certify any coverage here; claim nothing.
            best = 0.0;
            break;
        }
        std::sort(crossings.begin(), crossings.end());
        double limit = 0.0;
        for (const auto& [x, s] : crossings) {
            winding -= s;
            limit = x;
            if (winding == 0) break;
        }
        best = std::min(best, limit);
    }
    if (!std::isfinite(best)) best = 0.0;
    best = std::min(best, std::nextafter(1.0, 0.0));
    rep.measured = disc_distance({0.0, 0.0}, {best, 0.0});

    // Grid slack: the image curve is sampled at n_theta points; by the
    // Schwarz-Pick lemma consecutive image samples are at most the domain
    // spacing apart in hyperbolic distance, so a hidden dip between samples
    // is at most half that spacing.
    const double max_density = 2.0 / (1.0 - r_star * r_star);
    rep.resolution = max_density * M_PI * r_star / n_theta;
    rep.pass = rep.measured + rep.resolution >= rep.guaranteed;
    return rep;
}

} // namespace wanderlab
