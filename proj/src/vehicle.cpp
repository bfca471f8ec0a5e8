#include "symnav/vehicle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace symnav {

void VehicleParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("vehicle.") + name + " must be positive");
        }
    };
    positive(wheelbase, "wheelbase");
    positive(body_length, "body_length");
    positive(body_width, "body_width");
    positive(speed, "speed");
    positive(max_steer, "max_steer");
    positive(max_steer_rate, "max_steer_rate");
    if (max_steer >= std::numbers::pi / 2.0) {
        throw std::invalid_argument("vehicle.max_steer must be below 90 degrees");
    }
}

VehicleState step(const VehicleState& state, double steer_command, const VehicleParams& params) {
    const double target = std::clamp(steer_command, -params.max_steer, params.max_steer);
    const double delta =
        state.delta + std::clamp(target - state.delta, -params.max_steer_rate, params.max_steer_rate);

    VehicleState next;
    next.delta = delta;
    next.x = state.x + params.speed * std::cos(state.theta + delta);
    next.y = state.y + params.speed * std::sin(state.theta + delta);
    next.theta = normalize_angle(state.theta + (params.speed / params.wheelbase) * std::sin(delta));
    return next;
}

OrientedRect footprint(const VehicleState& state, const VehicleParams& params) {
    return {{state.x, state.y}, params.body_length / 2.0, params.body_width / 2.0, state.theta};
}

}  // namespace symnav
