#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symnav/evolution.hpp"
#include "symnav/network.hpp"
#include "symnav/sensors.hpp"
#include "symnav/track.hpp"
#include "symnav/vehicle.hpp"

namespace symnav {

enum class DistanceMode { Euclidean, PathLength };

std::string_view to_string(DistanceMode mode);
DistanceMode distance_mode_from_string(std::string_view text);

struct EpisodeConfig {
    int max_ticks = 2000;
    bool record_trajectory = false;
    DistanceMode distance = DistanceMode::Euclidean;

    void validate() const;
};

struct TrajectoryPoint {
    int tick = 0;
    VehicleState state;
    double steer_command = 0.0;
    Scan scan;  // the scan the command was computed from
};

struct EpisodeResult {
    TrackOutcome outcome;
    double fitness = 0.0;
    double path_length = 0.0;
    std::optional<std::vector<TrajectoryPoint>> trajectory;
};

/// distance(start, final)^2 / ticks. Throws std::invalid_argument if ticks < 1.
double fitness_of(Point final_position, Point start, int ticks);

/// Runs one closed-loop episode: sense, normalize, forward, steer, step,
/// then check collision and destination. Ends at the first collision, on
/// reaching within track_width/2 of the destination, or after max_ticks.
/// A vehicle that starts in collision ends at tick 1 without moving.
/// `eval_seed` seeds the sensor noise stream.
EpisodeResult run_episode(const Track& track, const VehicleParams& vehicle,
                          const SensorSpec& sensor, const WeightMatrices& weights,
                          const EpisodeConfig& episode, std::uint64_t eval_seed);

/// Evaluator for `evolve`: one episode per track, fitness summed, solved iff
/// every track ends in ReachedDestination. Track k uses noise seed
/// derive_seed(eval_seed, k, 0).
Evaluator make_evaluator(std::vector<Track> tracks, VehicleParams vehicle, SensorSpec sensor,
                         EpisodeConfig episode);

/// Noise seed used for track `index` under a given evaluation seed.
std::uint64_t episode_seed(std::uint64_t eval_seed, std::size_t track_index);

/// CSV `tick,x,y,theta_rad,delta_rad,steer_cmd_rad`.
void write_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory, const std::string& path);
/// CSV `tick,r0,...,r{n-1}`.
void write_scan_csv(const std::vector<TrajectoryPoint>& trajectory, const std::string& path);
/// Reads the trajectory CSV back (scans left empty).
std::vector<TrajectoryPoint> read_trajectory_csv(const std::string& path);

}  // namespace symnav
