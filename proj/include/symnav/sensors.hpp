#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "symnav/track.hpp"
#include "symnav/vehicle.hpp"

namespace symnav {

enum class SensorKind { Basic, Camera, Lidar, LongRadar, MediumRadar };

std::string_view to_string(SensorKind kind);
/// Accepts the enum names case-insensitively; throws std::invalid_argument.
SensorKind sensor_kind_from_string(std::string_view text);

/// Front-facing rangefinder. Beams span `fov` inclusively at both edges.
/// When noise_std > 0 each range is multiplied by a Normal(noise_mean,
/// noise_std) draw and clamped to [0, max_range].
struct SensorSpec {
    SensorKind kind = SensorKind::Basic;
    int beam_count = 25;
    double fov = std::numbers::pi;
    double max_range = 300.0;
    double noise_mean = 1.0;
    double noise_std = 0.0;

    bool noisy() const { return noise_std > 0.0; }
    void validate() const;
};

/// Ranges ordered leftmost beam first.
struct Scan {
    std::vector<double> ranges;
};

/// Kind presets. Non-camera kinds default to a range of 3x the track
/// width; the camera sees 1.5x the track width.
SensorSpec make_sensor(SensorKind kind, int beam_count, double track_width);

/// Heading offset of beam i relative to the vehicle heading. Offsets are
/// exactly antisymmetric: offset(n-1-i) == -offset(i).
double beam_offset(const SensorSpec& spec, int i);

using NoiseStream = std::mt19937_64;

/// Casts every beam from the vehicle center. `noise` may be null only for
/// noiseless specs.
Scan sense(const SensorSpec& spec, const VehicleState& state, const Track& track,
           NoiseStream* noise);

/// Ranges divided by max_range, order preserved.
std::vector<double> normalize(const Scan& scan, const SensorSpec& spec);

}  // namespace symnav
