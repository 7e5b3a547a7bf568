#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "genconvex/point.hpp"

namespace genconvex {

// A finite evaluation window for a domain: sample points, a designated
// margin layer (hull membership there is the discrete escape signal), and
// connected-component labels. plot_xy carries 2D drawing coordinates.
struct Grid {
    std::string kind;
    Dimension dim;
    std::vector<Point> points;
    std::vector<std::uint8_t> margin;
    std::vector<int> component;
    std::vector<std::array<double, 2>> plot_xy;
    double cell = 0;       // representative axis step
    double cell_diag = 0;  // one-cell tolerance for set comparisons
    int n_components = 1;

    int size() const { return static_cast<int>(points.size()); }
    bool is_margin(int i) const { return margin[static_cast<std::size_t>(i)] != 0; }
};

inline std::vector<Point> circle_samples(double radius, int n, double cx = 0.0, double cy = 0.0) {
    const double pi = 3.14159265358979323846;
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * pi * k / n;
        out.push_back(Point::complex_point(
            {std::complex<double>(cx + radius * std::cos(th), cy + radius * std::sin(th))}));
    }
    return out;
}

// Distinguished torus {|z| = rz, |w| = rw} of a bidisc, nz x nw samples.
inline std::vector<Point> torus_samples(double rz, double rw, int nz, int nw) {
    const double pi = 3.14159265358979323846;
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(nz) * static_cast<std::size_t>(nw));
    for (int a = 0; a < nz; ++a) {
        for (int b = 0; b < nw; ++b) {
            const double ta = 2.0 * pi * a / nz;
            const double tb = 2.0 * pi * b / nw;
            out.push_back(Point::complex_point(
                {std::complex<double>(rz * std::cos(ta), rz * std::sin(ta)),
                 std::complex<double>(rw * std::cos(tb), rw * std::sin(tb))}));
        }
    }
    return out;
}

inline Grid make_rect_grid(double x0, double x1, double y0, double y1, int res,
                           int margin_cells) {
    if (res < 8) throw std::invalid_argument("grid resolution must be >= 8");
    if (margin_cells < 1) throw std::invalid_argument("margin_cells must be >= 1");
    Grid g;
    g.kind = "rect";
    g.dim = Dimension{2, 0};
    const double hx = (x1 - x0) / (res - 1);
    const double hy = (y1 - y0) / (res - 1);
    g.cell = std::max(hx, hy);
    g.cell_diag = std::hypot(hx, hy);
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const double x = x0 + i * hx;
            const double y = y0 + j * hy;
            g.points.push_back(Point::real({x, y}));
            const bool m = i < margin_cells || j < margin_cells || i >= res - margin_cells ||
                           j >= res - margin_cells;
            g.margin.push_back(m ? 1 : 0);
            g.component.push_back(0);
            g.plot_xy.push_back({x, y});
        }
    }
    return g;
}

// Square lattice over [-radius, radius]^2 clipped to the disc; the margin is
// the outermost ring of kept points.
inline Grid make_disc_grid(double radius, int res, int margin_cells) {
    if (res < 8) throw std::invalid_argument("grid resolution must be >= 8");
    if (margin_cells < 1) throw std::invalid_argument("margin_cells must be >= 1");
    Grid g;
    g.kind = "disc";
    g.dim = Dimension{0, 1};
    const double h = 2.0 * radius / (res - 1);
    g.cell = h;
    g.cell_diag = h * std::sqrt(2.0);
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const double x = -radius + i * h;
            const double y = -radius + j * h;
            if (std::hypot(x, y) > radius + 1e-12) continue;
            g.points.push_back(Point::complex_point({std::complex<double>(x, y)}));
            g.margin.push_back(std::hypot(x, y) > radius - margin_cells * h ? 1 : 0);
            g.component.push_back(0);
            g.plot_xy.push_back({x, y});
        }
    }
    return g;
}

// Polar lattice of the annulus r0 <= |z| <= r1, so circles of lattice radii
// are grid-exact. resolution = number of radial rings; margin = the
// innermost/outermost margin_cells rings.
inline Grid make_annulus_grid(double r0, double r1, int n_r, int n_theta, int margin_cells) {
    if (n_r < 8 || n_theta < 8) throw std::invalid_argument("grid resolution must be >= 8");
    if (margin_cells < 1) throw std::invalid_argument("margin_cells must be >= 1");
    if (!(0 < r0 && r0 < r1)) throw std::invalid_argument("annulus radii must satisfy 0 < r0 < r1");
    Grid g;
    g.kind = "annulus";
    g.dim = Dimension{0, 1};
    const double dr = (r1 - r0) / (n_r - 1);
    const double pi = 3.14159265358979323846;
    const double arc = r1 * 2.0 * pi / n_theta;
    // Nesting margins are radial, so the cell unit is the ring step; the
    // diagonal still bounds nearest-neighbor distances for set comparisons.
    g.cell = dr;
    g.cell_diag = std::hypot(dr, arc);
    for (int ir = 0; ir < n_r; ++ir) {
        const double r = r0 + ir * dr;
        const bool m = ir < margin_cells || ir >= n_r - margin_cells;
        for (int it = 0; it < n_theta; ++it) {
            const double th = 2.0 * pi * it / n_theta;
            const double x = r * std::cos(th);
            const double y = r * std::sin(th);
            g.points.push_back(Point::complex_point({std::complex<double>(x, y)}));
            g.margin.push_back(m ? 1 : 0);
            g.component.push_back(0);
            g.plot_xy.push_back({x, y});
        }
    }
    return g;
}

// Reinhardt diagram of the closed unit bidisc: grid in (|z|, |w|) in
// [0,1]^2, each node embedded as the C^2 point (x, y) with real phases.
// Moduli of monomials on the bidisc depend only on these coordinates.
inline Grid make_bidisc_grid(int res, int margin_cells) {
    if (res < 8) throw std::invalid_argument("grid resolution must be >= 8");
    if (margin_cells < 1) throw std::invalid_argument("margin_cells must be >= 1");
    Grid g;
    g.kind = "bidisc";
    g.dim = Dimension{0, 2};
    const double h = 1.0 / (res - 1);
    g.cell = h;
    g.cell_diag = h * std::sqrt(2.0);
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const double x = i * h;
            const double y = j * h;
            g.points.push_back(Point::complex_point(
                {std::complex<double>(x, 0.0), std::complex<double>(y, 0.0)}));
            // Only the outer edges are boundary of the bidisc; the
            // coordinate axes are interior slices.
            const bool m = i >= res - margin_cells || j >= res - margin_cells;
            g.margin.push_back(m ? 1 : 0);
            g.component.push_back(0);
            g.plot_xy.push_back({x, y});
        }
    }
    return g;
}

// Reinhardt diagram of the Hartogs figure: the unit bidisc minus the open
// notch {|z| < notch_z, |w| < notch_w}. Notch nodes stay in the grid as
// probe points and are flagged as margin: a hull reaching them has escaped
// the domain.
inline Grid make_hartogs_grid(int res, int margin_cells, double notch_z = 0.8,
                              double notch_w = 0.5) {
    Grid g = make_bidisc_grid(res, margin_cells);
    g.kind = "hartogs";
    const double h = g.cell;
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.plot_xy[static_cast<std::size_t>(i)][0];
        const double y = g.plot_xy[static_cast<std::size_t>(i)][1];
        const bool in_notch = x < notch_z - 1e-12 && y < notch_w - 1e-12;
        const bool near_notch_edge = !in_notch && x < notch_z + margin_cells * h - 1e-12 &&
                                     y < notch_w + margin_cells * h - 1e-12;
        if (in_notch || near_notch_edge) g.margin[static_cast<std::size_t>(i)] = 1;
    }
    return g;
}

// Two disjoint discs of the given radius centered at (cx1, 0) and (cx2, 0),
// labeled as components 0 and 1.
inline Grid make_twodisc_grid(double cx1, double cx2, double radius, int res, int margin_cells) {
    if (res < 8) throw std::invalid_argument("grid resolution must be >= 8");
    if (margin_cells < 1) throw std::invalid_argument("margin_cells must be >= 1");
    if (std::abs(cx2 - cx1) <= 2 * radius)
        throw std::invalid_argument("twodisc: components overlap");
    Grid g;
    g.kind = "twodisc";
    g.dim = Dimension{2, 0};
    const double h = 2.0 * radius / (res - 1);
    g.cell = h;
    g.cell_diag = h * std::sqrt(2.0);
    g.n_components = 2;
    const double centers[2] = {cx1, cx2};
    for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < res; ++j) {
            for (int i = 0; i < res; ++i) {
                const double x = centers[c] - radius + i * h;
                const double y = -radius + j * h;
                const double rho = std::hypot(x - centers[c], y);
                if (rho > radius + 1e-12) continue;
                g.points.push_back(Point::real({x, y}));
                g.margin.push_back(rho > radius - margin_cells * h ? 1 : 0);
                g.component.push_back(c);
                g.plot_xy.push_back({x, y});
            }
        }
    }
    return g;
}

inline Grid make_points_grid(std::vector<Point> pts, std::vector<std::uint8_t> margin,
                             std::vector<int> component, double cell) {
    Grid g;
    g.kind = "points";
    if (pts.empty()) throw std::invalid_argument("points grid: empty");
    g.dim = pts.front().dim;
    g.cell = cell;
    g.cell_diag = cell * std::sqrt(2.0);
    g.points = std::move(pts);
    const std::size_t n = g.points.size();
    g.margin = margin.empty() ? std::vector<std::uint8_t>(n, 0) : std::move(margin);
    g.component = component.empty() ? std::vector<int>(n, 0) : std::move(component);
    if (g.margin.size() != n || g.component.size() != n)
        throw std::invalid_argument("points grid: label length mismatch");
    g.n_components = 1 + *std::max_element(g.component.begin(), g.component.end());
    for (const Point& p : g.points) {
        const double x = p.coords.size() > 0 ? p.coords[0] : 0.0;
        const double y = p.coords.size() > 1 ? p.coords[1] : 0.0;
        g.plot_xy.push_back({x, y});
    }
    return g;
}

inline std::vector<int> grid_indices_where(const Grid& g, const std::vector<bool>& keep) {
    std::vector<int> out;
    for (int i = 0; i < g.size(); ++i)
        if (keep[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

inline std::vector<Point> gather_points(const Grid& g, const std::vector<int>& idx) {
    std::vector<Point> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(g.points[static_cast<std::size_t>(i)]);
    return out;
}

inline double set_distance(const Point& p, const std::vector<Point>& S) {
    double best = 1e300;
    for (const Point& s : S) best = std::min(best, distance(p, s));
    return best;
}

}  // namespace genconvex
