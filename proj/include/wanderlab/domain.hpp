#pragma once

// A planar domain carrying a metric density: the unit disc and round annuli
// with their curvature -1 hyperbolic densities, and rasterized domains with
// the reciprocal boundary distance (the quasi-hyperbolic density, which on a
// raster is also the stand-in used where a hyperbolic density is requested).

#include <variant>

#include "wanderlab/hyperbolic.hpp"
#include "wanderlab/raster.hpp"

namespace wanderlab {

struct UnitDisc {};

using HyperbolicDomain = std::variant<UnitDisc, RoundAnnulus, RasterDomain>;

inline bool domain_contains(const HyperbolicDomain& dom, Complex z) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UnitDisc>)
                return std::abs(z) < 1.0;
            else
                return d.contains(z);
        },
        dom);
}

// Euclidean distance from z to the domain boundary (0 outside the domain).
inline double domain_boundary_distance(const HyperbolicDomain& dom, Complex z) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UnitDisc>) {
                const double m = std::abs(z);
                return m < 1.0 ? 1.0 - m : 0.0;
            } else if constexpr (std::is_same_v<T, RoundAnnulus>) {
                const double m = std::abs(z);
                if (m <= d.inner_radius || m >= 1.0) return 0.0;
                return std::min(m - d.inner_radius, 1.0 - m);
            } else {
                return d.boundary_distance_at(z);
            }
        },
        dom);
}

inline double domain_hyperbolic_density(const HyperbolicDomain& dom, Complex z) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, UnitDisc>) {
                return disc_density(z);
            } else if constexpr (std::is_same_v<T, RoundAnnulus>) {
                return annulus_density(d, z);
            } else {
                const double bd = d.boundary_distance_at(z);
                if (bd <= 0.0) throw std::domain_error("density: point off the raster domain");
                return 1.0 / bd;
            }
        },
        dom);
}

} // namespace wanderlab
