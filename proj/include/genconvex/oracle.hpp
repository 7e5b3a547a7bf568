#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace genconvex {

// Classical 2D convex hull by gift wrapping, with a tolerance-based
// membership predicate. Kept independent of the feature-space LP route so it
// can serve as an oracle for it.

struct Point2 {
    double x = 0, y = 0;
};

namespace oracle_detail {

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double dist2(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double point_segment_distance(const Point2& q, const Point2& a, const Point2& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double L2 = vx * vx + vy * vy;
    if (L2 == 0.0) return std::sqrt(dist2(q, a));
    double u = ((q.x - a.x) * vx + (q.y - a.y) * vy) / L2;
    u = std::clamp(u, 0.0, 1.0);
    const Point2 p{a.x + u * vx, a.y + u * vy};
    return std::sqrt(dist2(q, p));
}

}  // namespace oracle_detail

struct HullPolygon {
    std::vector<Point2> vertices;  // CCW; 1 = point, 2 = segment

    // Signed outside distance: positive outside the hull, <= 0 inside.
    double outside_distance(const Point2& q) const {
        using namespace oracle_detail;
        if (vertices.empty()) throw std::logic_error("empty hull polygon");
        if (vertices.size() == 1) return std::sqrt(dist2(q, vertices[0]));
        if (vertices.size() == 2)
            return point_segment_distance(q, vertices[0], vertices[1]);
        double worst = -1e300;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const Point2& a = vertices[i];
            const Point2& b = vertices[(i + 1) % vertices.size()];
            const double ex = b.x - a.x, ey = b.y - a.y;
            const double len = std::sqrt(ex * ex + ey * ey);
            // CCW polygon: negative cross means q lies outside this edge.
            const double signed_in = cross(a, b, q) / len;
            worst = std::max(worst, -signed_in);
        }
        return worst;
    }

    bool contains(const Point2& q, double tol) const { return outside_distance(q) <= tol; }
};

inline HullPolygon classical_hull_oracle(const std::vector<Point2>& pts) {
    using namespace oracle_detail;
    if (pts.empty()) throw std::invalid_argument("classical_hull_oracle: need >= 1 point");
    HullPolygon hull;

    // Deduplicate exact copies; gift wrapping handles the rest.
    std::vector<Point2> P = pts;
    std::sort(P.begin(), P.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    P.erase(std::unique(P.begin(), P.end(),
                        [](const Point2& a, const Point2& b) {
                            return a.x == b.x && a.y == b.y;
                        }),
            P.end());

    if (P.size() == 1) {
        hull.vertices = {P[0]};
        return hull;
    }

    // Collinear input collapses to the extreme segment.
    {
        bool collinear = true;
        for (std::size_t i = 2; i < P.size() && collinear; ++i)
            if (std::abs(cross(P[0], P[1], P[i])) > 0) collinear = false;
        if (collinear) {
            hull.vertices = {P.front(), P.back()};
            return hull;
        }
    }

    // Jarvis march from the lowest point, taking the farthest of collinear
    // candidates so hull edges are maximal.
    std::size_t start = 0;
    for (std::size_t i = 1; i < P.size(); ++i)
        if (P[i].y < P[start].y || (P[i].y == P[start].y && P[i].x < P[start].x)) start = i;

    std::size_t cur = start;
    do {
        hull.vertices.push_back(P[cur]);
        std::size_t next = (cur + 1) % P.size();
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (i == cur) continue;
            const double c = cross(P[cur], P[next], P[i]);
            if (c < 0 || (c == 0 && dist2(P[cur], P[i]) > dist2(P[cur], P[next]))) next = i;
        }
        cur = next;
        if (hull.vertices.size() > P.size() + 1)
            throw std::logic_error("gift wrapping failed to close");
    } while (cur != start);

    return hull;
}

}  // namespace genconvex
