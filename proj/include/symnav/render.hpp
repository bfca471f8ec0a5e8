#pragma once

#include <string>
#include <vector>

#include "symnav/simulation.hpp"
#include "symnav/track.hpp"

namespace symnav {

struct ViewBox {
    double x = 0.0;
    double y = 0.0;
    double width = 0.0;
    double height = 0.0;
};

/// Track extent padded by 5% of its size on every side, in SVG coordinates
/// (y axis pointing down, so world y is negated).
ViewBox track_view_box(const Track& track);

struct ScanOverlay {
    std::vector<std::vector<double>> ranges;  // one row per trajectory point
    double fov = 0.0;                         // radians
    int every = 10;                           // draw rays every N ticks
};

/// Walls, obstacles, start (green) and destination (red) markers, and the
/// trajectory polyline with a marker at the final pose.
std::string render_track_svg(const Track& track, const std::vector<TrajectoryPoint>& trajectory,
                             const ScanOverlay* scans = nullptr);

/// Steering command (degrees) against tick.
std::string render_steering_svg(const std::vector<TrajectoryPoint>& trajectory);

/// Reads the `tick,r0,...` sidecar written by write_scan_csv.
std::vector<std::vector<double>> read_scan_csv(const std::string& path);

}  // namespace symnav
