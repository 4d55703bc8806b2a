#pragma once

// Sampled closed curves and winding numbers via continuous argument tracking.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wanderlab/errors.hpp"
#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

struct CurveSample {
    std::vector<Complex> points;
    bool closed = true;

    CurveSample() = default;
    CurveSample(std::vector<Complex> pts, bool is_closed) : points(std::move(pts)), closed(is_closed) {
        validate();
    }

    void validate() const {
        if (points.size() < 16)
            throw std::invalid_argument("CurveSample: need at least 16 points");
        const std::size_t n = points.size();
        const std::size_t seg_count = closed ? n : n - 1;
        for (std::size_t i = 0; i < seg_count; ++i) {
            const Complex a = points[i];
            const Complex b = points[(i + 1) % n];
            if (!is_finite(a) || !is_finite(b))
                throw std::invalid_argument("CurveSample: non-finite point");
            if (a == b)
                throw std::invalid_argument("CurveSample: consecutive points coincide");
        }
    }
};

namespace detail {

inline double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = ((p - a) * std::conj(ab)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Turn of the argument of (z - p) along the straight segment a -> b.
// Subdivides until each piece subtends less than a quarter turn, so the
// principal-value differences compose into the continuous branch.
inline double segment_turn(Complex p, Complex a, Complex b, int depth = 0) {
    const double d = std::arg((b - p) / (a - p));
    if (std::abs(d) < M_PI_2 || depth > 40) return d;
    const Complex mid = 0.5 * (a + b);
    return segment_turn(p, a, mid, depth + 1) + segment_turn(p, mid, b, depth + 1);
}

} // namespace detail

// Winding number of a sampled closed curve around p (the samples are joined
// by straight segments). Throws if p comes within `tol` of the curve.
inline int winding_number(const CurveSample& curve, Complex p, double tol = 1e-9) {
    curve.validate();
    if (!curve.closed)
        throw std::invalid_argument("winding_number: curve must be closed");
    const std::size_t n = curve.points.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = curve.points[i];
        const Complex b = curve.points[(i + 1) % n];
        if (detail::point_segment_distance(p, a, b) <= tol)
            throw ill_conditioned_error("winding_number: point within tolerance of the curve");
        total += detail::segment_turn(p, a, b);
    }
    const double k = total / (2.0 * M_PI);
    const long long rounded = std::llround(k);
    if (std::abs(k - double(rounded)) > 0.05)
        throw ill_conditioned_error("winding_number: argument sum far from an integer multiple");
    return int(rounded);
}

} // namespace wanderlab
