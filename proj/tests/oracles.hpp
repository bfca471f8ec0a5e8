#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library's intersection or kinematics kernels.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "symnav/geometry.hpp"

namespace oracle {

using symnav::Point;

inline double seg_dist(Point p, Point a, Point b) {
    const double ex = b.x - a.x, ey = b.y - a.y;
    double u = ((p.x - a.x) * ex + (p.y - a.y) * ey) / (ex * ex + ey * ey);
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(p.x - (a.x + u * ex), p.y - (a.y + u * ey));
}

/// Distance from p to the half-line origin + t * dir, t >= 0.
inline double halfline_dist(Point p, Point origin, Point dir) {
    const double t = std::max(0.0, (p.x - origin.x) * dir.x + (p.y - origin.y) * dir.y);
    return std::hypot(p.x - (origin.x + t * dir.x), p.y - (origin.y + t * dir.y));
}

/// Marches the ray in fixed steps and reports the first sample lying within
/// `eps` of the segment.
inline std::optional<double> march(Point origin, double angle, Point a, Point b,
                                   double range = 100.0, double step = 1e-3, double eps = 1e-3) {
    const double dx = std::cos(angle), dy = std::sin(angle);
    const long n = static_cast<long>(range / step);
    for (long k = 0; k <= n; ++k) {
        const double t = k * step;
        if (seg_dist({origin.x + t * dx, origin.y + t * dy}, a, b) < eps) {
            return t;
        }
    }
    return std::nullopt;
}

struct RayScene {
    Point origin;
    double angle;
    Point a;
    Point b;
};

/// True when the scene sits within `margin` of a tangency the marcher cannot
/// classify: an endpoint grazing the ray, or the origin touching the segment.
inline bool ambiguous(const RayScene& s, double margin = 2e-3) {
    const Point dir{std::cos(s.angle), std::sin(s.angle)};
    return halfline_dist(s.a, s.origin, dir) < margin || halfline_dist(s.b, s.origin, dir) < margin ||
           seg_dist(s.origin, s.a, s.b) < margin;
}

inline RayScene random_scene(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(-70.0, 70.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    RayScene s{{0.0, 0.0}, ang(rng), {coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    return s;
}

/// Kasa least-squares circle fit; returns the radius.
inline double fit_circle_radius(const std::vector<Point>& pts) {
    double sx = 0, sy = 0;
    for (auto p : pts) {
        sx += p.x;
        sy += p.y;
    }
    const double mx = sx / pts.size(), my = sy / pts.size();
    double suu = 0, svv = 0, suv = 0, suuu = 0, svvv = 0, suvv = 0, svuu = 0;
    for (auto p : pts) {
        const double u = p.x - mx, v = p.y - my;
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    const double r1 = 0.5 * (suuu + suvv), r2 = 0.5 * (svvv + svuu);
    const double det = suu * svv - suv * suv;
    const double uc = (r1 * svv - r2 * suv) / det;
    const double vc = (suu * r2 - suv * r1) / det;
    return std::sqrt(uc * uc + vc * vc + (suu + svv) / pts.size());
}

}  // namespace oracle
