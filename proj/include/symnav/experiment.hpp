#pragma once

// Experiment configuration, the run manifest, and the train / eval / sweep
// drivers behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symnav/evolution.hpp"
#include "symnav/network.hpp"
#include "symnav/sensors.hpp"
#include "symnav/simulation.hpp"
#include "symnav/track.hpp"
#include "symnav/vehicle.hpp"

namespace symnav {

inline constexpr std::string_view kVersion = "1.0.0";

/// Sensor block as written in a config; unset fields take the kind's preset.
struct SensorBlock {
    SensorKind kind = SensorKind::Basic;
    int beams = 25;
    std::optional<double> fov;  // radians
    std::optional<double> max_range;
    std::optional<double> noise_mean;
    std::optional<double> noise_std;

    SensorSpec resolve(double track_width) const;
};

struct NetworkBlock {
    std::vector<int> hidden;  // empty: one hidden layer as wide as the input
    bool symmetric = true;
    SymmetricDepth symmetric_depth = SymmetricDepth::AllLayers;

    NetworkSpec resolve(int inputs) const;
};

struct ExperimentConfig {
    std::vector<Track> tracks;
    VehicleParams vehicle;
    SensorBlock sensor;
    NetworkBlock network;
    EvolutionConfig evolution;
    EpisodeConfig episode;
    std::filesystem::path output = "runs/default";
    bool checkpoints = true;

    SensorSpec sensor_spec() const { return sensor.resolve(tracks.front().track_width()); }
    NetworkSpec network_spec() const { return network.resolve(sensor.beams); }

    /// Dimension and value checks; throws std::invalid_argument.
    void validate() const;
};

/// Parses a config document. Relative track paths resolve against
/// `base_dir`. Throws ParseError / ValidationError / std::invalid_argument.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Fully resolved config with tracks inlined; loading it with parse_config
/// reproduces the run exactly.
std::string write_manifest(const ExperimentConfig& config);

struct TrainResult {
    std::vector<GenerationStats> history;
    std::optional<int> generations_to_solve;
    double max_fitness = 0.0;
    Chromosome best;  // winning chromosome if solved, else fittest seen
};

/// Runs evolve and writes fitness.csv, manifest.json, best.chromosome and
/// (when enabled) checkpoints/gen_NNNN.chromosome into `out_dir`. An empty
/// `out_dir` skips all file output.
TrainResult run_training(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct EvalReport {
    std::string track_name;
    EpisodeResult result;
};

/// One recorded episode per track. Throws std::invalid_argument when the
/// chromosome's input width differs from the sensor's beam count.
std::vector<EvalReport> run_evaluation(const Chromosome& chromosome,
                                       const std::vector<Track>& tracks,
                                       const VehicleParams& vehicle, const SensorSpec& sensor,
                                       const EpisodeConfig& episode, std::uint64_t seed);

enum class SweepAxis { BeamCount, SensorKind, Selection, Symmetry };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view text);

struct SweepSpec {
    SweepAxis axis = SweepAxis::Symmetry;
    std::vector<std::string> values;
    int repetitions = 1;
};

struct SweepRow {
    std::string axis_value;
    std::uint64_t seed = 0;
    std::optional<int> generations_to_solve;
    double max_fitness = 0.0;
    bool solved = false;
    std::optional<std::string> error;
    std::vector<GenerationStats> history;
};

/// Applies one sweep value to a copy of the base config.
ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepAxis axis,
                                   const std::string& value);

/// Trains every (value, repetition) pair with seed = base seed + repetition.
/// A failing row is recorded with its error and the sweep continues. When
/// `out_dir` is non-empty, writes summary.csv plus one run directory per row.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepSpec& sweep,
                                const std::filesystem::path& out_dir, bool parallel_rows = false);

/// Generations-to-solve for a row, counting an unsolved row as budget + 1.
int effective_generations(const SweepRow& row, int max_generations);

/// Median of effective_generations over rows with the given axis value.
double median_generations(const std::vector<SweepRow>& rows, const std::string& value,
                          int max_generations);

double solve_rate(const std::vector<SweepRow>& rows, const std::string& value);

/// CSV `generation,best_fitness,mean_fitness,solved`.
std::string fitness_csv(const std::vector<GenerationStats>& history);

/// CSV `axis_value,seed,generations_to_solve,max_fitness,solved`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Locates a bundled track by name ("map1".."map10", "straight") under the
/// source tree's tracks/ directory.
std::filesystem::path bundled_track_path(std::string_view name);

}  // namespace symnav
