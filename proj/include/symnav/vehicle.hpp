#pragma once

#include "symnav/geometry.hpp"

namespace symnav {

/// Geometry and limits of the kinematic bicycle. Units are world units
/// (pixels) and simulation ticks.
struct VehicleParams {
    double wheelbase = 20.0;
    double body_length = 30.0;
    double body_width = 16.0;
    double speed = 5.0;                          // per tick
    double max_steer = deg_to_rad(35.0);
    double max_steer_rate = deg_to_rad(5.0);     // per tick

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

/// Bicycle-model pose: position of the center of gravity, heading, steering angle.
struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double delta = 0.0;

    Point position() const { return {x, y}; }
};

/// One tick of the front-drive bicycle model. The steering angle slews
/// toward the clamped command by at most max_steer_rate, then the front
/// wheel drives the body forward by `speed`.
VehicleState step(const VehicleState& state, double steer_command, const VehicleParams& params);

/// Body rectangle centered on (x, y) and aligned with theta.
OrientedRect footprint(const VehicleState& state, const VehicleParams& params);

}  // namespace symnav
