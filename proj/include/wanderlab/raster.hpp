#pragma once

// Rasterized planar domains: an occupancy grid plus a boundary-distance field.
// The boundary distance is always recomputed from occupancy with an exact
// Euclidean distance transform, so a file on disk only stores the 0/1 grid.
//
// Grid frame: cell (ix, iy) has center
//   x = (ix + 0.5 - width/2) * cell_size,   y = (iy + 0.5 - height/2) * cell_size,
// i.e. the raster is centered on the origin. Serialized row iy = 0 comes first.

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wanderlab/hyperbolic.hpp"

namespace wanderlab {

namespace detail {

// One-dimensional squared distance transform (lower envelope of parabolas).
// Parabolas based at +infinity never reach the envelope and are skipped, so
// lines that begin with (or consist entirely of) unset cells are handled.
inline void edt_pass(const std::vector<double>& f, std::vector<double>& d) {
    const int n = int(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    d.assign(f.size(), inf);
    std::vector<int> v(f.size());
    std::vector<double> boundary(f.size() + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[std::size_t(q)] == inf) continue;
        while (k >= 0) {
            const int p = v[std::size_t(k)];
            const double s = ((f[std::size_t(q)] + q * double(q)) -
                              (f[std::size_t(p)] + p * double(p))) /
                             (2.0 * (q - p));
            if (s > boundary[std::size_t(k)]) {
                ++k;
                v[std::size_t(k)] = q;
                boundary[std::size_t(k)] = s;
                boundary[std::size_t(k) + 1] = inf;
                break;
            }
            --k;
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            boundary[0] = -inf;
            boundary[1] = inf;
        }
    }
    if (k < 0) return; // nothing finite on this line
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (boundary[std::size_t(k) + 1] < q) ++k;
        const double dq = q - double(v[std::size_t(k)]);
        d[std::size_t(q)] = dq * dq + f[std::size_t(v[std::size_t(k)])];
    }
}

} // namespace detail

struct RasterDomain {
    int width = 0;
    int height = 0;
    double cell_size = 0.0;
    std::vector<std::uint8_t> occupancy;      // row-major, 1 = inside
    std::vector<double> boundary_distance;    // plane units; 0 exactly on complement cells

    int index(int ix, int iy) const { return iy * width + ix; }
    double x_of(int ix) const { return (ix + 0.5 - 0.5 * width) * cell_size; }
    double y_of(int iy) const { return (iy + 0.5 - 0.5 * height) * cell_size; }
    Complex center_of(int ix, int iy) const { return {x_of(ix), y_of(iy)}; }

    bool cell_of(Complex z, int& ix, int& iy) const {
        const double fx = z.real() / cell_size + 0.5 * width - 0.5;
        const double fy = z.imag() / cell_size + 0.5 * height - 0.5;
        ix = int(std::lround(fx));
        iy = int(std::lround(fy));
        return ix >= 0 && ix < width && iy >= 0 && iy < height;
    }

    bool contains(Complex z) const {
        int ix, iy;
        if (!cell_of(z, ix, iy)) return false;
        return occupancy[index(ix, iy)] != 0;
    }

    // Distance from the cell center to the boundary, 0 off the domain.
    double boundary_distance_at(Complex z) const {
        int ix, iy;
        if (!cell_of(z, ix, iy)) return 0.0;
        return boundary_distance[index(ix, iy)];
    }

    static RasterDomain from_occupancy(int width, int height, double cell_size,
                                       std::vector<std::uint8_t> occupancy) {
        if (width <= 0 || height <= 0 || cell_size <= 0.0)
            throw std::invalid_argument("RasterDomain: non-positive dimensions");
        if (int(occupancy.size()) != width * height)
            throw std::invalid_argument("RasterDomain: occupancy size mismatch");
        RasterDomain r;
        r.width = width;
        r.height = height;
        r.cell_size = cell_size;
        r.occupancy = std::move(occupancy);
        r.recompute_boundary_distance();
        return r;
    }

    // Exact Euclidean distance transform against complement cells; the half-cell
    // correction accounts for the boundary running between cell centers.
    void recompute_boundary_distance() {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> sq(std::size_t(width) * height);
        for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = occupancy[i] ? inf : 0.0;

        std::vector<double> line, out;
        // columns
        line.resize(std::size_t(height));
        for (int ix = 0; ix < width; ++ix) {
            for (int iy = 0; iy < height; ++iy) line[std::size_t(iy)] = sq[std::size_t(index(ix, iy))];
            detail::edt_pass(line, out);
            for (int iy = 0; iy < height; ++iy) sq[std::size_t(index(ix, iy))] = out[std::size_t(iy)];
        }
        // rows
        line.resize(std::size_t(width));
        for (int iy = 0; iy < height; ++iy) {
            for (int ix = 0; ix < width; ++ix) line[std::size_t(ix)] = sq[std::size_t(index(ix, iy))];
            detail::edt_pass(line, out);
            for (int ix = 0; ix < width; ++ix) sq[std::size_t(index(ix, iy))] = out[std::size_t(ix)];
        }

        boundary_distance.assign(sq.size(), 0.0);
        for (std::size_t i = 0; i < sq.size(); ++i) {
            if (!occupancy[i]) continue;
            if (sq[i] == inf) {
                boundary_distance[i] = inf; // no complement cell anywhere
            } else {
                boundary_distance[i] = cell_size * std::max(std::sqrt(sq[i]) - 0.5, 0.5);
            }
        }
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("RasterDomain::save: cannot open " + path);
        out << "raster " << width << " " << height << " ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", cell_size);
        out << buf << "\n";
        for (int iy = 0; iy < height; ++iy) {
            for (int ix = 0; ix < width; ++ix)
                out.put(occupancy[std::size_t(index(ix, iy))] ? '1' : '0');
            out.put('\n');
        }
        if (!out) throw std::runtime_error("RasterDomain::save: write failed for " + path);
    }

    static RasterDomain load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("RasterDomain::load: cannot open " + path);
        std::string header;
        if (!std::getline(in, header))
            throw std::runtime_error("RasterDomain::load: empty file " + path);
        std::istringstream hs(header);
        std::string magic;
        int w = 0, h = 0;
        double cell = 0.0;
        hs >> magic >> w >> h >> cell;
        if (magic != "raster" || !hs || w <= 0 || h <= 0 || cell <= 0.0)
            throw std::runtime_error("RasterDomain::load: malformed header line 1 of " + path);
        std::vector<std::uint8_t> occ(std::size_t(w) * h, 0);
        std::string row;
        for (int iy = 0; iy < h; ++iy) {
            if (!std::getline(in, row))
                throw std::runtime_error("RasterDomain::load: missing row at line " +
                                         std::to_string(iy + 2) + " of " + path);
            if (int(row.size()) != w)
                throw std::runtime_error("RasterDomain::load: row length mismatch at line " +
                                         std::to_string(iy + 2) + " of " + path);
            for (int ix = 0; ix < w; ++ix) {
                const char c = row[std::size_t(ix)];
                if (c != '0' && c != '1')
                    throw std::runtime_error("RasterDomain::load: invalid character at line " +
                                             std::to_string(iy + 2) + " of " + path);
                occ[std::size_t(iy) * w + ix] = std::uint8_t(c == '1');
            }
        }
        return from_occupancy(w, h, cell, std::move(occ));
    }
};

} // namespace wanderlab
