#pragma once

// Exact 2D primitives and the intersection kernels used by the sensors and
// the collision checks. All functions are pure.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

namespace symnav {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

inline double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Degree value with the fewest significant digits whose deg_to_rad is
/// exactly `rad`, so angles survive a text round trip bit-for-bit.
double exact_degrees(double rad);

/// Line segment with distinct endpoints. Construction throws
/// std::invalid_argument for a zero-length or non-finite segment.
class Segment {
public:
    Segment(Point a, Point b);

    Point a() const { return a_; }
    Point b() const { return b_; }
    Segment reversed() const { return Segment(b_, a_); }

    friend bool operator==(const Segment&, const Segment&) = default;

private:
    Point a_;
    Point b_;
};

struct Ray {
    Point origin;
    double angle = 0.0;  // normalized to (-pi, pi]

    Ray() = default;
    Ray(Point o, double a) : origin(o), angle(normalize_angle(a)) {}

    Point direction() const { return {std::cos(angle), std::sin(angle)}; }
};

struct OrientedRect {
    Point center;
    double half_length = 0.0;  // along heading
    double half_width = 0.0;
    double heading = 0.0;

    /// Corners in counter-clockwise order starting at front-left.
    std::array<Point, 4> corners() const;
};

double point_distance(Point a, Point b);

/// Distance from p to the closest point of seg.
double point_segment_distance(Point p, const Segment& seg);

/// Smallest t >= 0 with origin + t * dir(angle) on seg, if any. A collinear
/// overlap reports the overlap point closest to the ray origin.
std::optional<double> ray_segment_distance(const Ray& ray, const Segment& seg);

/// Same kernel with a precomputed unit direction, for hot loops that cast
/// many rays from one pose.
std::optional<double> ray_segment_distance(Point origin, Point dir, const Segment& seg);

/// True iff the segment touches or crosses the rectangle (boundary or interior).
bool rect_segment_intersects(const OrientedRect& rect, const Segment& seg);

}  // namespace symnav
