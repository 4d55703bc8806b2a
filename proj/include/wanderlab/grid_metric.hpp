#pragma once

// Grid-based path metrics: a 16-connected weighted graph over a domain, with
// Dijkstra shortest paths. Edge weights integrate a conformal density along
// straight segments by the endpoint-average rule, which overestimates true
// path lengths by at most the 16-neighborhood anisotropy (< 3%) plus
// quadrature error. Used for quasi-hyperbolic distances and for largest
//-embedded-hyperbolic-disc estimates.

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "wanderlab/domain.hpp"

namespace wanderlab {

struct MetricGrid {
    int n = 0;              // cells per axis
    double h = 0.0;         // cell size
    double x0 = 0.0, y0 = 0.0; // center of cell (0,0)
    std::vector<std::uint8_t> inside;
    std::vector<double> density; // per-cell metric density (1/bd or hyperbolic)

    int index(int ix, int iy) const { return iy * n + ix; }
    Complex center(int ix, int iy) const { return {x0 + ix * h, y0 + iy * h}; }
    bool valid(int ix, int iy) const {
        return ix >= 0 && ix < n && iy >= 0 && iy < n && inside[std::size_t(index(ix, iy))];
    }

    // Nearest valid cell to z within a few rings; -1 if none.
    int snap(Complex z) const {
        const int cx = int(std::lround((z.real() - x0) / h));
        const int cy = int(std::lround((z.imag() - y0) / h));
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int r = 0; r <= 3 && best < 0; ++r) {
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                    const int ix = cx + dx, iy = cy + dy;
                    if (!valid(ix, iy)) continue;
                    const double d = std::abs(center(ix, iy) - z);
                    if (d < best_d) {
                        best_d = d;
                        best = index(ix, iy);
                    }
                }
            }
        }
        return best;
    }
};

enum class GridDensity { quasi_hyperbolic, hyperbolic };

// Build an n x n grid over the domain's bounding square. Disc and annulus
// domains use [-1,1]^2; raster domains use their own frame (resampled onto n
// cells across the larger extent).
inline MetricGrid make_metric_grid(const HyperbolicDomain& dom, int resolution,
                                   GridDensity kind) {
    if (resolution < 8) throw std::invalid_argument("make_metric_grid: resolution too small");
    MetricGrid g;
    g.n = resolution;
    double half = 1.0;
    if (const auto* r = std::get_if<RasterDomain>(&dom))
        half = 0.5 * r->cell_size * std::max(r->width, r->height);
    g.h = 2.0 * half / resolution;
    g.x0 = -half + 0.5 * g.h;
    g.y0 = -half + 0.5 * g.h;
    g.inside.assign(std::size_t(g.n) * g.n, 0);
    g.density.assign(std::size_t(g.n) * g.n, 0.0);
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            const Complex c = g.center(ix, iy);
            if (!domain_contains(dom, c)) continue;
            const double bd = domain_boundary_distance(dom, c);
            if (bd <= 0.0) continue;
            const std::size_t i = std::size_t(g.index(ix, iy));
            g.inside[i] = 1;
            g.density[i] = (kind == GridDensity::quasi_hyperbolic)
                               ? 1.0 / bd
                               : domain_hyperbolic_density(dom, c);
        }
    }
    return g;
}

namespace detail {

struct GridOffset {
    int dx, dy;
    int gx1, gy1, gx2, gy2; // cells that must be inside for the move (corner guard)
};

inline const std::array<GridOffset, 16>& grid_offsets() {
    // axis moves, diagonals (guarded by both adjacent axis cells), and knight
    // moves (guarded by the two cells nearest the segment midpoint)
    static const std::array<GridOffset, 16> offs = {{
        {1, 0, 0, 0, 0, 0},     {-1, 0, 0, 0, 0, 0},
        {0, 1, 0, 0, 0, 0},     {0, -1, 0, 0, 0, 0},
        {1, 1, 1, 0, 0, 1},     {1, -1, 1, 0, 0, -1},
        {-1, 1, -1, 0, 0, 1},   {-1, -1, -1, 0, 0, -1},
        {2, 1, 1, 0, 1, 1},     {2, -1, 1, 0, 1, -1},
        {-2, 1, -1, 0, -1, 1},  {-2, -1, -1, 0, -1, -1},
        {1, 2, 0, 1, 1, 1},     {1, -2, 0, -1, 1, -1},
        {-1, 2, 0, 1, -1, 1},   {-1, -2, 0, -1, -1, -1},
    }};
    return offs;
}

} // namespace detail

// Dijkstra over the 16-connected grid from the given source cells (distance 0
// at each). Stops early once `target` is settled if target >= 0.
inline std::vector<double> grid_shortest_paths(const MetricGrid& g,
                                               const std::vector<int>& sources,
                                               int target = -1) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.inside.size(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int s : sources) {
        if (s >= 0 && g.inside[std::size_t(s)]) {
            dist[std::size_t(s)] = 0.0;
            heap.push({0.0, s});
        }
    }
    const auto& offs = detail::grid_offsets();
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (d > dist[std::size_t(i)]) continue;
        if (i == target) break;
        const int ix = i % g.n, iy = i / g.n;
        const double rho_i = g.density[std::size_t(i)];
        for (const auto& o : offs) {
            const int jx = ix + o.dx, jy = iy + o.dy;
            if (!g.valid(jx, jy)) continue;
            const bool axis = (o.gx1 == 0 && o.gy1 == 0);
            if (!axis) {
                if (!g.valid(ix + o.gx1, iy + o.gy1)) continue;
                if (!g.valid(ix + o.gx2, iy + o.gy2)) continue;
            }
            const int j = g.index(jx, jy);
            const double len = g.h * std::hypot(double(o.dx), double(o.dy));
            const double w = len * 0.5 * (rho_i + g.density[std::size_t(j)]);
            const double nd = d + w;
            if (nd < dist[std::size_t(j)]) {
                dist[std::size_t(j)] = nd;
                heap.push({nd, j});
            }
        }
    }
    return dist;
}

// Quasi-hyperbolic distance inf over paths of the integral of 1/d(s, bdry):
// shortest 16-connected grid path with endpoints snapped to cell centers.
inline double quasi_hyperbolic_distance(const HyperbolicDomain& dom, Complex z, Complex w,
                                        int resolution = 512) {
    if (!domain_contains(dom, z) || !domain_contains(dom, w))
        throw std::domain_error("quasi_hyperbolic_distance: endpoint outside the domain");
    if (domain_boundary_distance(dom, z) <= 0.0 || domain_boundary_distance(dom, w) <= 0.0)
        throw std::domain_error("quasi_hyperbolic_distance: endpoint on the boundary");
    const MetricGrid g = make_metric_grid(dom, resolution, GridDensity::quasi_hyperbolic);
    const int a = g.snap(z), b = g.snap(w);
    if (a < 0 || b < 0)
        throw std::domain_error("quasi_hyperbolic_distance: endpoint off the grid domain");
    if (a == b) return 0.0;
    const auto dist = grid_shortest_paths(g, {a}, b);
    const double d = dist[std::size_t(b)];
    if (!std::isfinite(d))
        throw unreachable_error("quasi_hyperbolic_distance: endpoints in different components");
    return d;
}

// Reusable single-source field for querying many targets on one grid.
struct QuasiHyperbolicField {
    MetricGrid grid;
    std::vector<double> dist;

    static QuasiHyperbolicField from(const HyperbolicDomain& dom, Complex source,
                                     int resolution = 512) {
        QuasiHyperbolicField f;
        f.grid = make_metric_grid(dom, resolution, GridDensity::quasi_hyperbolic);
        const int s = f.grid.snap(source);
        if (s < 0) throw std::domain_error("QuasiHyperbolicField: source off the domain");
        f.dist = grid_shortest_paths(f.grid, {s});
        return f;
    }

    double to(Complex target) const {
        const int t = grid.snap(target);
        if (t < 0) throw std::domain_error("QuasiHyperbolicField: target off the domain");
        const double d = dist[std::size_t(t)];
        if (!std::isfinite(d)) throw unreachable_error("QuasiHyperbolicField: target unreachable");
        return d;
    }
};

struct BlochEstimate {
    double value = 0.0;      // estimated sup over centers of the distance to the complement
    double resolution = 0.0; // metric size of one cell diagonal at the maximizing center
    Complex center{0.0, 0.0};
    bool unbounded = false;  // complement empty on the grid
};

// Largest hyperbolic disc contained in a subset of the ambient domain,
// estimated on a grid: multi-source shortest paths from the complement cells
// bordering the subset, maximized over subset cells. Graph paths can only
// overestimate lengths, so the estimate never falls short of the true radius
// by more than one cell diameter's metric size (snapping).
inline BlochEstimate hyperbolic_bloch_radius(const HyperbolicDomain& ambient,
                                             const std::vector<std::uint8_t>& subset_mask,
                                             int resolution) {
    MetricGrid g = make_metric_grid(ambient, resolution, GridDensity::hyperbolic);
    if (subset_mask.size() != g.inside.size())
        throw std::invalid_argument("hyperbolic_bloch_radius: mask size mismatch");

    std::vector<int> sources;
    bool have_subset = false;
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = std::size_t(g.index(ix, iy));
            if (!g.inside[i]) continue;
            if (subset_mask[i]) {
                have_subset = true;
                continue;
            }
            // ambient cell outside the subset: a source if it borders the subset
            bool border = false;
            for (int dy = -1; dy <= 1 && !border; ++dy)
                for (int dx = -1; dx <= 1 && !border; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jx >= g.n || jy < 0 || jy >= g.n) continue;
                    const std::size_t j = std::size_t(g.index(jx, jy));
                    border = g.inside[j] && subset_mask[j];
                }
            if (border) sources.push_back(int(i));
        }
    }
    if (!have_subset) throw std::domain_error("hyperbolic_bloch_radius: empty subset");

    BlochEstimate est;
    if (sources.empty()) {
        // no complement visible from the subset: the inradius is unbounded
        est.unbounded = true;
        est.value = std::numeric_limits<double>::infinity();
        return est;
    }

    // Restrict the walk to the subset plus its sources so the distance field
    // measures the metric inside the subset itself.
    MetricGrid walk = g;
    for (std::size_t i = 0; i < walk.inside.size(); ++i)
        if (walk.inside[i] && !subset_mask[i]) walk.inside[i] = 0;
    for (int s : sources) walk.inside[std::size_t(s)] = 1;

    const auto dist = grid_shortest_paths(walk, sources);
    for (int iy = 0; iy < g.n; ++iy) {
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = std::size_t(g.index(ix, iy));
            if (!g.inside[i] || !subset_mask[i]) continue;
            const double d = dist[i];
            if (std::isfinite(d) && d > est.value) {
                est.value = d;
                est.center = g.center(ix, iy);
            }
        }
    }
    est.resolution = std::sqrt(2.0) * g.h * domain_hyperbolic_density(ambient, est.center);
    return est;
}

// Rasterize a point cloud onto the ambient grid and close single-cell holes
// (a cell with all four axis neighbors occupied is interior), so that a dense
// forward-sampled image yields a solid mask.
inline std::vector<std::uint8_t> rasterize_points(const HyperbolicDomain& ambient,
                                                  const std::vector<Complex>& points,
                                                  int resolution) {
    MetricGrid g = make_metric_grid(ambient, resolution, GridDensity::quasi_hyperbolic);
    std::vector<std::uint8_t> mask(g.inside.size(), 0);
    for (Complex p : points) {
        const int ix = int(std::lround((p.real() - g.x0) / g.h));
        const int iy = int(std::lround((p.imag() - g.y0) / g.h));
        if (ix < 0 || ix >= g.n || iy < 0 || iy >= g.n) continue;
        mask[std::size_t(g.index(ix, iy))] = 1;
    }
    for (int pass = 0; pass < 2; ++pass) {
        bool changed = false;
        for (int iy = 1; iy + 1 < g.n; ++iy) {
            for (int ix = 1; ix + 1 < g.n; ++ix) {
                const std::size_t i = std::size_t(g.index(ix, iy));
                if (mask[i]) continue;
                if (mask[i - 1] && mask[i + 1] && mask[i - std::size_t(g.n)] &&
                    mask[i + std::size_t(g.n)]) {
                    mask[i] = 1;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return mask;
}

} // namespace wanderlab
