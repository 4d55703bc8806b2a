#pragma once

// Scaled Joukowski ellipse maps. For mu * r > 1 define
//   gamma(z) = lambda * (mu z + 1 / (mu z)),  lambda = mu r^2 / (mu^2 r^2 - 1),
// which sends the circle |z| = r to an ellipse with minor semi-axis exactly r
// (the identity lambda * (mu r - 1/(mu r)) = r pins the imaginary axis
// crossing) and major semi-axis lambda * (mu r + 1/(mu r)) slightly larger.
// An optional surround factor (1 + eta) scales the whole map. The logarithmic
// derivative excess
//   z gamma'(z)/gamma(z) - 1 = -2 / (mu^2 z^2 + 1)
// attains its maximum modulus on |z| = r at z = +-ir, giving the closed-form
// bound 2 / (mu^2 r^2 - 1).

#include <cmath>
#include <stdexcept>

#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

struct JoukowskiMap {
    double mu;
    double r;
    double lambda; // mu r^2 / (mu^2 r^2 - 1)
    double eta;    // surround factor: the map is scaled by (1 + eta)

    JoukowskiMap(double mu_, double r_, double eta_ = 0.0)
        : mu(mu_), r(r_), lambda(0.0), eta(eta_) {
        if (!(r > 0.0)) throw std::invalid_argument("JoukowskiMap: r must be positive");
        if (!(mu * r > 1.0)) throw std::invalid_argument("JoukowskiMap: need mu * r > 1");
        if (!(eta > -1.0)) throw std::invalid_argument("JoukowskiMap: need eta > -1");
        lambda = mu * r * r / (mu * mu * r * r - 1.0);
    }

    double scale() const { return lambda * (1.0 + eta); }

    Complex value(Complex z) const {
        const Complex mz = mu * z;
        if (std::abs(mz) < 1e-12)
            throw std::domain_error("JoukowskiMap: evaluation too close to the pole at 0");
        return scale() * (mz + 1.0 / mz);
    }

    // value(z) - z in a cancellation-free arrangement: with
    // s = mu^2 r^2 - 1,  gamma(z) - z = eta * z + (1 + eta) * (z + r^2/z) / s.
    // On |z| = r the bracket z + r^2 / z equals 2 Re z exactly.
    Complex deviation(Complex z) const {
        const Complex mz = mu * z;
        if (std::abs(mz) < 1e-12)
            throw std::domain_error("JoukowskiMap: evaluation too close to the pole at 0");
        const double s = mu * mu * r * r - 1.0;
        return eta * z + (1.0 + eta) * (z + r * r / z) / s;
    }

    Complex derivative(Complex z) const {
        const Complex mz = mu * z;
        if (std::abs(mz) < 1e-12)
            throw std::domain_error("JoukowskiMap: evaluation too close to the pole at 0");
        return scale() * mu * (1.0 - 1.0 / (mz * mz));
    }

    // z gamma'(z) / gamma(z) - 1 = -2 / (mu^2 z^2 + 1).
    Complex log_derivative_excess(Complex z) const {
        const Complex d = mu * mu * z * z + 1.0;
        if (std::abs(d) < 1e-15)
            throw std::domain_error("JoukowskiMap: log-derivative pole");
        return -2.0 / d;
    }

    // max over |z| = r of |log_derivative_excess|, attained at z = +-ir.
    double cond2_bound() const { return 2.0 / (mu * mu * r * r - 1.0); }

    double minor_semi_axis() const { return scale() * (mu * r - 1.0 / (mu * r)); }
    double major_semi_axis() const { return scale() * (mu * r + 1.0 / (mu * r)); }
};

enum class SurroundVerdict { surrounds, touches, fails };

struct SurroundReport {
    SurroundVerdict verdict = SurroundVerdict::fails;
    double min_modulus = 0.0;   // min over theta of |gamma(r e^{i theta})|
    double target = 0.0;        // radius the image must stay outside of
    double argmin_theta = 0.0;
};

// Checks that the image of |z| = r under the map stays outside the closed
// disc of the given radius. Dense sweep plus a parabolic refinement of the
// discrete minimum; with eta = 0 the minimum is the minor semi-axis r itself,
// so `touches` is the expected verdict for target = r.
inline SurroundReport surround_check(const JoukowskiMap& map, double target, int samples = 4096) {
    if (samples < 64) throw std::invalid_argument("surround_check: too few samples");
    if (!(target > 0.0)) throw std::invalid_argument("surround_check: target must be positive");
    SurroundReport rep;
    rep.target = target;
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    std::vector<double> mod(std::size_t(samples), 0.0);
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * M_PI * j / samples;
        mod[std::size_t(j)] = std::abs(map.value(std::polar(map.r, th)));
        if (mod[std::size_t(j)] < best) {
            best = mod[std::size_t(j)];
            best_j = j;
        }
    }
    // Parabolic refinement through the discrete minimizer and its neighbors.
    const double m0 = mod[std::size_t((best_j + samples - 1) % samples)];
    const double m1 = mod[std::size_t(best_j)];
    const double m2 = mod[std::size_t((best_j + 1) % samples)];
    const double denom = m0 - 2.0 * m1 + m2;
    double refined = m1, dth = 0.0;
    if (denom > 0.0) {
        dth = 0.5 * (m0 - m2) / denom;
        refined = m1 - 0.25 * (m0 - m2) * dth;
    }
    rep.min_modulus = std::min(best, refined);
    rep.argmin_theta = 2.0 * M_PI * (best_j + dth) / samples;
    const double tol = 1e-9 * std::max(1.0, target);
    if (rep.min_modulus > target + tol) rep.verdict = SurroundVerdict::surrounds;
    else if (rep.min_modulus >= target - tol) rep.verdict = SurroundVerdict::touches;
    else rep.verdict = SurroundVerdict::fails;
    return rep;
}

} // namespace wanderlab
