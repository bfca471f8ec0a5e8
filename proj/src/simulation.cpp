#include "symnav/simulation.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "symnav/number_format.hpp"

namespace symnav {

std::string_view to_string(DistanceMode mode) {
    return mode == DistanceMode::PathLength ? "path_length" : "euclidean";
}

DistanceMode distance_mode_from_string(std::string_view text) {
    if (text == "euclidean") return DistanceMode::Euclidean;
    if (text == "path_length") return DistanceMode::PathLength;
    throw std::invalid_argument("unknown distance mode '" + std::string(text) + "'");
}

void EpisodeConfig::validate() const {
    if (max_ticks < 1) {
        throw std::invalid_argument("episode.max_ticks must be >= 1");
    }
}

double fitness_of(Point final_position, Point start, int ticks) {
    if (ticks < 1) {
        throw std::invalid_argument("fitness_of: ticks must be >= 1");
    }
    const double d = point_distance(start, final_position);
    return d * d / static_cast<double>(ticks);
}

std::uint64_t episode_seed(std::uint64_t eval_seed, std::size_t track_index) {
    return derive_seed(eval_seed, track_index, 0);
}

EpisodeResult run_episode(const Track& track, const VehicleParams& vehicle,
                          const SensorSpec& sensor, const WeightMatrices& weights,
                          const EpisodeConfig& episode, std::uint64_t eval_seed) {
    if (weights.inputs() != sensor.beam_count) {
        throw std::invalid_argument("sensor has " + std::to_string(sensor.beam_count) +
                                    " beams but the network expects " +
                                    std::to_string(weights.inputs()) + " inputs");
    }
    NoiseStream noise(eval_seed);
    EpisodeResult result;
    if (episode.record_trajectory) {
        result.trajectory.emplace();
    }

    VehicleState state{track.start().x, track.start().y, track.start_heading(), 0.0};
    auto finish = [&](Terminal terminal, int ticks) {
        result.outcome = {terminal, state.position(), ticks};
        const double distance = episode.distance == DistanceMode::PathLength
                                    ? result.path_length
                                    : point_distance(track.start(), state.position());
        result.fitness = distance * distance / static_cast<double>(ticks);
        return result;
    };

    if (first_collision(track, footprint(state, vehicle))) {
        if (result.trajectory) {
            result.trajectory->push_back({1, state, 0.0, sense(sensor, state, track, &noise)});
        }
        return finish(Terminal::Collision, 1);
    }

    const double reach = track.track_width() / 2.0;
    for (int tick = 1; tick <= episode.max_ticks; ++tick) {
        Scan scan = sense(sensor, state, track, &noise);
        const NetworkOutput out = forward(weights, normalize(scan, sensor));
        const double command = steering_command(out.left, out.right, vehicle.max_steer);
        const VehicleState next = step(state, command, vehicle);
        result.path_length += point_distance(state.position(), next.position());
        state = next;
        if (result.trajectory) {
            result.trajectory->push_back({tick, state, command, std::move(scan)});
        }
        if (first_collision(track, footprint(state, vehicle))) {
            return finish(Terminal::Collision, tick);
        }
        if (point_distance(state.position(), track.destination()) <= reach) {
            return finish(Terminal::ReachedDestination, tick);
        }
    }
    return finish(Terminal::TimedOut, episode.max_ticks);
}

Evaluator make_evaluator(std::vector<Track> tracks, VehicleParams vehicle, SensorSpec sensor,
                         EpisodeConfig episode) {
    if (tracks.empty()) {
        throw std::invalid_argument("evaluator needs at least one track");
    }
    vehicle.validate();
    sensor.validate();
    episode.validate();
    episode.record_trajectory = false;
    auto shared = std::make_shared<const std::vector<Track>>(std::move(tracks));
    return [shared, vehicle, sensor, episode](const Chromosome& chromosome,
                                              std::uint64_t eval_seed) {
        const WeightMatrices weights = decode(chromosome);
        Evaluation total{0.0, true};
        for (std::size_t k = 0; k < shared->size(); ++k) {
            const EpisodeResult r = run_episode((*shared)[k], vehicle, sensor, weights, episode,
                                                episode_seed(eval_seed, k));
            total.fitness += r.fitness;
            total.solved = total.solved && r.outcome.terminal == Terminal::ReachedDestination;
        }
        return total;
    };
}

void write_trajectory_csv(const std::vector<TrajectoryPoint>& trajectory,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "tick,x,y,theta_rad,delta_rad,steer_cmd_rad\n";
    for (const TrajectoryPoint& p : trajectory) {
        out << p.tick << ',' << format_number(p.state.x) << ',' << format_number(p.state.y) << ','
            << format_number(p.state.theta) << ',' << format_number(p.state.delta) << ','
            << format_number(p.steer_command) << '\n';
    }
}

void write_scan_csv(const std::vector<TrajectoryPoint>& trajectory, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    const std::size_t beams = trajectory.empty() ? 0 : trajectory.front().scan.ranges.size();
    out << "tick";
    for (std::size_t i = 0; i < beams; ++i) {
        out << ",r" << i;
    }
    out << '\n';
    for (const TrajectoryPoint& p : trajectory) {
        out << p.tick;
        for (double r : p.scan.ranges) {
            out << ',' << format_number(r);
        }
        out << '\n';
    }
}

std::vector<TrajectoryPoint> read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "tick,x,y,theta_rad,delta_rad,steer_cmd_rad") {
        throw std::runtime_error(path + ": unexpected trajectory header");
    }
    std::vector<TrajectoryPoint> points;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 6) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " columns, expected 6");
        }
        try {
            TrajectoryPoint p;
            p.tick = static_cast<int>(parse_number(cells[0]));
            p.state = {parse_number(cells[1]), parse_number(cells[2]), parse_number(cells[3]),
                       parse_number(cells[4])};
            p.steer_command = parse_number(cells[5]);
            points.push_back(std::move(p));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(path + ": row " + std::to_string(row) + ": " + e.what());
        }
    }
    return points;
}

}  // namespace symnav
