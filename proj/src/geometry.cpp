#include "symnav/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace symnav {

namespace {

// Slack applied to the rectangle extents so that exact contact registers
// even after the rotation into the rectangle frame rounds a corner by an ulp.
constexpr double kContactSlack = 1e-9;

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

double normalize_angle(double radians) {
    double r = std::remainder(radians, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) {
        r += 2.0 * std::numbers::pi;
    }
    return r;
}

double exact_degrees(double rad) {
    const double direct = rad_to_deg(rad);
    for (int digits = 1; digits <= 17; ++digits) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.*g", digits, direct);
        const double candidate = std::strtod(buf, nullptr);
        if (deg_to_rad(candidate) == rad) {
            return candidate;
        }
    }
    return direct;
}

Segment::Segment(Point a, Point b) : a_(a), b_(b) {
    if (!finite(a) || !finite(b)) {
        throw std::invalid_argument("segment endpoints must be finite");
    }
    if (a == b) {
        throw std::invalid_argument("segment endpoints must differ");
    }
}

std::array<Point, 4> OrientedRect::corners() const {
    const Point fwd{std::cos(heading), std::sin(heading)};
    const Point left{-fwd.y, fwd.x};
    const Point f = half_length * fwd;
    const Point l = half_width * left;
    return {center + f + l, center - f + l, center - f - l, center + f - l};
}

double point_distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

double point_segment_distance(Point p, const Segment& seg) {
    const Point e = seg.b() - seg.a();
    const double t = std::clamp(dot(p - seg.a(), e) / dot(e, e), 0.0, 1.0);
    return point_distance(p, seg.a() + t * e);
}

std::optional<double> ray_segment_distance(const Ray& ray, const Segment& seg) {
    return ray_segment_distance(ray.origin, ray.direction(), seg);
}

std::optional<double> ray_segment_distance(Point origin, Point dir, const Segment& seg) {
    const Point e = seg.b() - seg.a();
    const Point w = seg.a() - origin;
    const double denom = cross(dir, e);
    const double e_len = std::hypot(e.x, e.y);

    if (std::abs(denom) <= 1e-12 * e_len) {
        // Parallel. Only a collinear segment can be hit.
        const double offset = cross(w, dir);
        if (std::abs(offset) > 1e-12 * (1.0 + std::hypot(w.x, w.y))) {
            return std::nullopt;
        }
        const double ta = dot(w, dir);
        const double tb = dot(seg.b() - origin, dir);
        const double lo = std::min(ta, tb);
        const double hi = std::max(ta, tb);
        if (hi < 0.0) {
            return std::nullopt;
        }
        return std::max(lo, 0.0);
    }

    const double t = cross(w, e) / denom;
    const double u = cross(w, dir) / denom;
    if (t < 0.0 || u < 0.0 || u > 1.0) {
        return std::nullopt;
    }
    return t;
}

bool rect_segment_intersects(const OrientedRect& rect, const Segment& seg) {
    const double c = std::cos(rect.heading);
    const double s = std::sin(rect.heading);
    auto to_local = [&](Point p) {
        const Point d = p - rect.center;
        return Point{d.x * c + d.y * s, -d.x * s + d.y * c};
    };
    const Point p0 = to_local(seg.a());
    const Point p1 = to_local(seg.b());
    const Point d = p1 - p0;
    const double hl = rect.half_length + kContactSlack;
    const double hw = rect.half_width + kContactSlack;

    // Liang-Barsky clip of p0 + t*d, t in [0, 1], against the local box.
    double t0 = 0.0;
    double t1 = 1.0;
    auto clip = [&](double p, double q) {
        if (p == 0.0) {
            return q >= 0.0;
        }
        const double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return false;
            t1 = std::min(t1, r);
        }
        return true;
    };
    return clip(-d.x, p0.x + hl) && clip(d.x, hl - p0.x) && clip(-d.y, p0.y + hw) &&
           clip(d.y, hw - p0.y) && t0 <= t1;
}

}  // namespace symnav
