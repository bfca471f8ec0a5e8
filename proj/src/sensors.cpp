#include "symnav/sensors.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace symnav {

std::string_view to_string(SensorKind kind) {
    switch (kind) {
        case SensorKind::Basic: return "Basic";
        case SensorKind::Camera: return "Camera";
        case SensorKind::Lidar: return "Lidar";
        case SensorKind::LongRadar: return "LongRadar";
        case SensorKind::MediumRadar: return "MediumRadar";
    }
    return "?";
}

SensorKind sensor_kind_from_string(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (SensorKind k : {SensorKind::Basic, SensorKind::Camera, SensorKind::Lidar,
                         SensorKind::LongRadar, SensorKind::MediumRadar}) {
        std::string name(to_string(k));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (name == lower) {
            return k;
        }
    }
    throw std::invalid_argument("unknown sensor kind '" + std::string(text) + "'");
}

void SensorSpec::validate() const {
    if (beam_count < 2) {
        throw std::invalid_argument("sensor beam_count must be at least 2, got " +
                                    std::to_string(beam_count));
    }
    if (!(fov > 0.0) || fov > std::numbers::pi) {
        throw std::invalid_argument("sensor fov must be in (0, 180] degrees");
    }
    if (!(max_range > 0.0) || !std::isfinite(max_range)) {
        throw std::invalid_argument("sensor max_range must be positive");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_mean)) {
        throw std::invalid_argument("sensor noise parameters must be finite, noise_std >= 0");
    }
}

SensorSpec make_sensor(SensorKind kind, int beam_count, double track_width) {
    SensorSpec spec;
    spec.kind = kind;
    spec.beam_count = beam_count;
    spec.max_range = 3.0 * track_width;
    spec.noise_mean = 1.0;
    spec.noise_std = 0.0;
    switch (kind) {
        case SensorKind::Basic:
            spec.fov = deg_to_rad(180.0);
            break;
        case SensorKind::Camera:
            spec.fov = deg_to_rad(100.0);
            spec.max_range = 1.5 * track_width;
            break;
        case SensorKind::Lidar:
            spec.fov = deg_to_rad(145.0);
            spec.noise_std = 0.05;
            break;
        case SensorKind::LongRadar:
            spec.fov = deg_to_rad(110.0);
            spec.noise_std = 0.1;
            break;
        case SensorKind::MediumRadar:
            spec.fov = deg_to_rad(160.0);
            spec.noise_mean = 0.0;
            spec.noise_std = 0.15;
            break;
    }
    spec.validate();
    return spec;
}

double beam_offset(const SensorSpec& spec, int i) {
    const double step = spec.fov / static_cast<double>(spec.beam_count - 1);
    return (static_cast<double>(i) - static_cast<double>(spec.beam_count - 1) / 2.0) * step;
}

Scan sense(const SensorSpec& spec, const VehicleState& state, const Track& track,
           NoiseStream* noise) {
    if (spec.noisy() && noise == nullptr) {
        throw std::invalid_argument("noisy sensor requires a noise stream");
    }
    const Point origin{state.x, state.y};
    const auto& segments = track.collision_segments();
    Scan scan;
    scan.ranges.resize(static_cast<std::size_t>(spec.beam_count));
    std::normal_distribution<double> factor(spec.noise_mean, spec.noise_std > 0 ? spec.noise_std : 1.0);

    // Leftmost beam first: the left edge of the field of view is at +fov/2.
    for (int i = 0; i < spec.beam_count; ++i) {
        const double angle = state.theta - beam_offset(spec, i);
        const Point dir{std::cos(angle), std::sin(angle)};
        double best = spec.max_range;
        for (const Segment& s : segments) {
            if (auto t = ray_segment_distance(origin, dir, s); t && *t < best) {
                best = *t;
            }
        }
        if (spec.noisy()) {
            best = std::clamp(best * factor(*noise), 0.0, spec.max_range);
        }
        scan.ranges[static_cast<std::size_t>(i)] = best;
    }
    return scan;
}

std::vector<double> normalize(const Scan& scan, const SensorSpec& spec) {
    std::vector<double> out(scan.ranges.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = scan.ranges[i] / spec.max_range;
    }
    return out;
}

}  // namespace symnav
