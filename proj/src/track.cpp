#include "symnav/track.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "symnav/number_format.hpp"

namespace symnav {

using ordered_json = nlohmann::ordered_json;

bool Obstacle::contains(Point p) const {
    return std::abs(p.x - center.x) <= width / 2.0 && std::abs(p.y - center.y) <= height / 2.0;
}

Track::Track(std::string name, double track_width, Point start, double start_heading,
             Point destination, std::vector<Segment> walls, std::vector<Obstacle> obstacles)
    : name_(std::move(name)),
      track_width_(track_width),
      start_(start),
      start_heading_(normalize_angle(start_heading)),
      destination_(destination),
      walls_(std::move(walls)),
      obstacles_(std::move(obstacles)) {
    if (!(track_width_ > 0.0) || !std::isfinite(track_width_)) {
        throw ValidationError("track_width", "must be positive and finite");
    }
    if (walls_.empty()) {
        throw ValidationError("walls", "at least one wall is required");
    }
    if (!std::isfinite(start_.x) || !std::isfinite(start_.y) || !std::isfinite(start_heading)) {
        throw ValidationError("start", "must be finite");
    }
    if (!std::isfinite(destination_.x) || !std::isfinite(destination_.y)) {
        throw ValidationError("destination", "must be finite");
    }
    for (std::size_t i = 0; i < obstacles_.size(); ++i) {
        const Obstacle& o = obstacles_[i];
        const std::string field = "obstacles[" + std::to_string(i) + "]";
        if (!(o.width > 0.0) || !(o.height > 0.0) || !std::isfinite(o.width) ||
            !std::isfinite(o.height) || !std::isfinite(o.center.x) || !std::isfinite(o.center.y)) {
            throw ValidationError(field, "obstacle extents must be positive and finite");
        }
        if (o.contains(start_)) {
            throw ValidationError("start", "inside " + field);
        }
        if (o.contains(destination_)) {
            throw ValidationError("destination", "inside " + field);
        }
    }

    segments_ = walls_;
    for (const Obstacle& o : obstacles_) {
        const auto c = o.rect().corners();
        for (std::size_t k = 0; k < 4; ++k) {
            segments_.emplace_back(c[k], c[(k + 1) % 4]);
        }
    }
}

std::pair<Point, Point> Track::extent() const {
    Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point hi{-lo.x, -lo.y};
    auto grow = [&](Point p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    };
    for (const Segment& s : segments_) {
        grow(s.a());
        grow(s.b());
    }
    grow(start_);
    grow(destination_);
    return {lo, hi};
}

std::string_view to_string(Terminal t) {
    switch (t) {
        case Terminal::Collision: return "Collision";
        case Terminal::ReachedDestination: return "ReachedDestination";
        case Terminal::TimedOut: return "TimedOut";
    }
    return "?";
}

namespace {

const ordered_json& member(const ordered_json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(path.empty() ? key : path + "." + key, "missing field");
    }
    return *it;
}

double number(const ordered_json& obj, const char* key, const std::string& path) {
    const ordered_json& v = member(obj, key, path);
    const std::string field = path.empty() ? key : path + "." + key;
    if (!v.is_number()) {
        throw ParseError(field, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ParseError(field, "expected a finite number");
    }
    return d;
}

// Normalization can map a degree value to a different radian; fall back
// to the unnormalized search only when that happens.
double canonical_degrees(double rad) {
    const double deg = exact_degrees(rad);
    if (normalize_angle(deg_to_rad(deg)) == rad) {
        return deg;
    }
    return rad_to_deg(rad);
}

}  // namespace

Track load_track(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("document", e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("document", "expected an object at top level");
    }

    const ordered_json& name = member(doc, "name", "");
    if (!name.is_string()) {
        throw ParseError("name", "expected a string");
    }
    const double width = number(doc, "track_width", "");
    const ordered_json& start = member(doc, "start", "");
    const Point start_pt{number(start, "x", "start"), number(start, "y", "start")};
    const double heading = deg_to_rad(number(start, "heading_deg", "start"));
    const ordered_json& dest = member(doc, "destination", "");
    const Point dest_pt{number(dest, "x", "destination"), number(dest, "y", "destination")};

    const ordered_json& walls_json = member(doc, "walls", "");
    if (!walls_json.is_array()) {
        throw ParseError("walls", "expected an array");
    }
    std::vector<Segment> walls;
    for (std::size_t i = 0; i < walls_json.size(); ++i) {
        const std::string path = "walls[" + std::to_string(i) + "]";
        const ordered_json& w = walls_json[i];
        const Point a{number(w, "x1", path), number(w, "y1", path)};
        const Point b{number(w, "x2", path), number(w, "y2", path)};
        if (a == b) {
            throw ValidationError(path, "zero-length wall");
        }
        walls.emplace_back(a, b);
    }

    std::vector<Obstacle> obstacles;
    if (auto it = doc.find("obstacles"); it != doc.end()) {
        if (!it->is_array()) {
            throw ParseError("obstacles", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "obstacles[" + std::to_string(i) + "]";
            const ordered_json& o = (*it)[i];
            obstacles.push_back({{number(o, "cx", path), number(o, "cy", path)},
                                 number(o, "w", path),
                                 number(o, "h", path)});
        }
    }

    return Track(name.get<std::string>(), width, start_pt, heading, dest_pt, std::move(walls),
                 std::move(obstacles));
}

Track load_track_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("file", "cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return load_track(ss.str());
}

std::string save_track(const Track& track) {
    ordered_json doc;
    doc["name"] = track.name();
    doc["track_width"] = track.track_width();
    doc["start"] = {{"x", track.start().x},
                    {"y", track.start().y},
                    {"heading_deg", canonical_degrees(track.start_heading())}};
    doc["destination"] = {{"x", track.destination().x}, {"y", track.destination().y}};
    ordered_json walls = ordered_json::array();
    for (const Segment& s : track.walls()) {
        walls.push_back({{"x1", s.a().x}, {"y1", s.a().y}, {"x2", s.b().x}, {"y2", s.b().y}});
    }
    doc["walls"] = std::move(walls);
    ordered_json obstacles = ordered_json::array();
    for (const Obstacle& o : track.obstacles()) {
        obstacles.push_back(
            {{"cx", o.center.x}, {"cy", o.center.y}, {"w", o.width}, {"h", o.height}});
    }
    doc["obstacles"] = std::move(obstacles);
    return doc.dump(2) + "\n";
}

void save_track_file(const Track& track, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << save_track(track);
}

bool first_collision(const Track& track, const OrientedRect& footprint) {
    return std::any_of(track.collision_segments().begin(), track.collision_segments().end(),
                       [&](const Segment& s) { return rect_segment_intersects(footprint, s); });
}

Track mirror_track(const Track& track) {
    const double h = track.start_heading();
    const double quarter = h / (std::numbers::pi / 2.0);
    if (std::abs(quarter - std::round(quarter)) > 1e-12) {
        throw std::invalid_argument("mirror_track requires an axis-aligned start heading");
    }
    const bool along_x = static_cast<long>(std::round(quarter)) % 2 == 0;
    const Point s = track.start();
    auto reflect = [&](Point p) {
        return along_x ? Point{p.x, 2.0 * s.y - p.y} : Point{2.0 * s.x - p.x, p.y};
    };

    std::vector<Segment> walls;
    walls.reserve(track.walls().size());
    for (const Segment& w : track.walls()) {
        walls.emplace_back(reflect(w.a()), reflect(w.b()));
    }
    std::vector<Obstacle> obstacles;
    for (const Obstacle& o : track.obstacles()) {
        obstacles.push_back({reflect(o.center), o.width, o.height});
    }
    return Track(track.name() + "_mirror", track.track_width(), s, h, reflect(track.destination()),
                 std::move(walls), std::move(obstacles));
}

std::vector<Segment> corridor_walls(const std::vector<Point>& centerline, double width,
                                    double back, double ahead) {
    if (centerline.size() < 2) {
        throw std::invalid_argument("corridor needs at least two centerline points");
    }
    const double half = width / 2.0;
    const std::size_t legs = centerline.size() - 1;
    std::vector<Point> dirs(legs);
    std::vector<Point> normals(legs);
    for (std::size_t i = 0; i < legs; ++i) {
        const Point d = centerline[i + 1] - centerline[i];
        const double len = std::hypot(d.x, d.y);
        dirs[i] = {d.x / len, d.y / len};
        normals[i] = {-dirs[i].y, dirs[i].x};
    }

    std::vector<Point> left;
    std::vector<Point> right;
    left.push_back(centerline.front() - back * dirs.front() + half * normals.front());
    right.push_back(centerline.front() - back * dirs.front() - half * normals.front());
    for (std::size_t i = 1; i < legs; ++i) {
        const Point n = normals[i - 1] + normals[i];
        left.push_back(centerline[i] + half * n);
        right.push_back(centerline[i] - half * n);
    }
    left.push_back(centerline.back() + ahead * dirs.back() + half * normals.back());
    right.push_back(centerline.back() + ahead * dirs.back() - half * normals.back());

    std::vector<Segment> walls;
    walls.emplace_back(right.front(), left.front());
    for (std::size_t i = 0; i + 1 < left.size(); ++i) {
        walls.emplace_back(left[i], left[i + 1]);
    }
    for (std::size_t i = 0; i + 1 < right.size(); ++i) {
        walls.emplace_back(right[i], right[i + 1]);
    }
    walls.emplace_back(left.back(), right.back());
    return walls;
}

}  // namespace symnav
