#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symnav/geometry.hpp"

namespace symnav {

/// Raised for malformed track or config documents. `field()` names the
/// offending key path, e.g. "walls[3].x2".
class FormatError : public std::runtime_error {
public:
    FormatError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class ParseError : public FormatError {
    using FormatError::FormatError;
};

class ValidationError : public FormatError {
    using FormatError::FormatError;
};

/// Axis-aligned rectangular obstacle given by center and full extents.
struct Obstacle {
    Point center;
    double width = 0.0;   // extent along x
    double height = 0.0;  // extent along y

    OrientedRect rect() const { return {center, width / 2.0, height / 2.0, 0.0}; }
    bool contains(Point p) const;

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

/// Immutable, validated track. Construction throws ValidationError.
class Track {
public:
    Track(std::string name, double track_width, Point start, double start_heading,
          Point destination, std::vector<Segment> walls, std::vector<Obstacle> obstacles);

    const std::string& name() const { return name_; }
    double track_width() const { return track_width_; }
    Point start() const { return start_; }
    double start_heading() const { return start_heading_; }
    Point destination() const { return destination_; }
    const std::vector<Segment>& walls() const { return walls_; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }

    /// Walls followed by the four edges of every obstacle; what rays and
    /// footprints collide with.
    const std::vector<Segment>& collision_segments() const { return segments_; }

    /// Min/max corner of the bounding box of all walls and obstacles.
    std::pair<Point, Point> extent() const;

private:
    std::string name_;
    double track_width_;
    Point start_;
    double start_heading_;
    Point destination_;
    std::vector<Segment> walls_;
    std::vector<Obstacle> obstacles_;
    std::vector<Segment> segments_;
};

enum class Terminal { Collision, ReachedDestination, TimedOut };

std::string_view to_string(Terminal t);

struct TrackOutcome {
    Terminal terminal = Terminal::TimedOut;
    Point final_position;
    int ticks = 1;
};

/// Parses the track document format. Throws ParseError or ValidationError.
Track load_track(std::string_view text);
Track load_track_file(const std::string& path);

/// Canonical text form: fixed key order, shortest round-trip numbers.
std::string save_track(const Track& track);
void save_track_file(const Track& track, const std::string& path);

/// True iff the footprint touches any wall or obstacle edge.
bool first_collision(const Track& track, const OrientedRect& footprint);

/// Reflection of the track about the start heading axis. The start heading
/// must be a multiple of 90 degrees so obstacles stay axis-aligned.
Track mirror_track(const Track& track);

/// Wall segments bounding a corridor of the given width around a polyline
/// whose consecutive legs meet at right angles. The corridor is closed by a
/// cap `back` units behind the first point and `ahead` units past the last.
std::vector<Segment> corridor_walls(const std::vector<Point>& centerline, double width,
                                    double back, double ahead);

struct TrackDifficulty {
    int min_legs = 3;
    int max_legs = 6;
    double min_width = 90.0;
    double max_width = 120.0;
    double min_leg_length = 250.0;
    double max_leg_length = 450.0;
    double obstacle_density = 0.5;  // probability of an obstacle per leg after the first
};

class GenerationError : public std::runtime_error {
public:
    GenerationError(std::uint64_t seed, const std::string& what)
        : std::runtime_error("track generation failed for seed " + std::to_string(seed) + ": " +
                             what),
          seed_(seed) {}
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Rectilinear corridor track with rectangular obstacles; a pure function
/// of (seed, difficulty).
Track generate_random_track(std::uint64_t seed, const TrackDifficulty& difficulty = {});

}  // namespace symnav
