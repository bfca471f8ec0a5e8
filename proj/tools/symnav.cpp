// symnav: train, evaluate, sweep and render symmetric-network driving runs.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <omp.h>
#include <optional>
#include <sstream>

#include "symnav/experiment.hpp"
#include "symnav/number_format.hpp"
#include "symnav/render.hpp"

namespace fs = std::filesystem;
using namespace symnav;

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

ExperimentConfig load_with_overrides(const std::string& path, const GlobalOptions& g) {
    ExperimentConfig cfg = load_config_file(path);
    if (g.seed) cfg.evolution.master_seed = *g.seed;
    if (g.out) cfg.output = *g.out;
    return cfg;
}

Track resolve_track(const std::string& arg) {
    if (fs::exists(arg)) {
        return load_track_file(arg);
    }
    const fs::path bundled = bundled_track_path(arg);
    if (fs::exists(bundled)) {
        return load_track_file(bundled.string());
    }
    throw std::runtime_error("track not found: " + arg);
}

int cmd_train(const std::string& config_path, const GlobalOptions& g) {
    const ExperimentConfig cfg = load_with_overrides(config_path, g);
    std::cout << "training: " << cfg.tracks.size() << " track(s), sensor "
              << to_string(cfg.sensor.kind) << " x" << cfg.sensor.beams << ", "
              << (cfg.network.symmetric ? "symmetric" : "unconstrained") << " network, genome "
              << genome_length(cfg.network_spec()) << ", seed " << cfg.evolution.master_seed
              << "\n";
    const TrainResult r = run_training(cfg, cfg.output);
    for (const GenerationStats& s : r.history) {
        std::cout << "gen " << s.generation << " best " << format_number(s.best_fitness)
                  << " mean " << format_number(s.mean_fitness) << (s.solved ? " solved" : "")
                  << "\n";
    }
    std::cout << "output: " << cfg.output.string() << "\n";
    if (r.generations_to_solve) {
        std::cout << "solved in " << *r.generations_to_solve << " generation(s)\n";
        return 0;
    }
    std::cout << "not solved within " << cfg.evolution.max_generations << " generations\n";
    return 2;
}

struct EvalOptions {
    std::string chromosome;
    std::vector<std::string> tracks;
    std::string config;
    std::string sensor = "Basic";
    std::optional<int> beams;
    int max_ticks = 2000;
};

int cmd_eval(const EvalOptions& o, const GlobalOptions& g) {
    const Chromosome chromosome = load_chromosome_file(o.chromosome);
    std::vector<Track> tracks;
    for (const std::string& t : o.tracks) {
        tracks.push_back(resolve_track(t));
    }

    VehicleParams vehicle;
    EpisodeConfig episode;
    episode.max_ticks = o.max_ticks;
    SensorSpec sensor;
    if (!o.config.empty()) {
        const ExperimentConfig cfg = load_config_file(o.config);
        vehicle = cfg.vehicle;
        sensor = cfg.sensor_spec();
        episode = cfg.episode;
    } else {
        SensorBlock block;
        block.kind = sensor_kind_from_string(o.sensor);
        block.beams = o.beams.value_or(chromosome.spec.inputs());
        sensor = block.resolve(tracks.front().track_width());
    }
    if (o.beams && *o.beams != sensor.beam_count) {
        sensor.beam_count = *o.beams;
    }

    const auto reports =
        run_evaluation(chromosome, tracks, vehicle, sensor, episode, g.seed.value_or(0));
    const fs::path out = g.out.value_or("runs/eval");
    fs::create_directories(out);
    for (const EvalReport& rep : reports) {
        const auto& r = rep.result;
        std::cout << rep.track_name << ": " << to_string(r.outcome.terminal) << " after "
                  << r.outcome.ticks << " ticks, fitness " << format_number(r.fitness) << "\n";
        write_trajectory_csv(*r.trajectory, (out / (rep.track_name + ".trajectory.csv")).string());
        write_scan_csv(*r.trajectory, (out / (rep.track_name + ".scans.csv")).string());
    }
    return 0;
}

struct SweepOptions {
    std::string config;
    std::string axis;
    std::vector<std::string> values;
    int reps = 1;
    bool parallel = false;
};

int cmd_sweep(const SweepOptions& o, const GlobalOptions& g) {
    const ExperimentConfig cfg = load_with_overrides(o.config, g);
    SweepSpec spec{sweep_axis_from_string(o.axis), o.values, o.reps};
    const auto rows = run_sweep(cfg, spec, cfg.output, o.parallel);
    std::cout << sweep_csv(rows);
    for (const SweepRow& row : rows) {
        if (row.error) {
            std::cerr << "row " << row.axis_value << " seed " << row.seed << ": " << *row.error
                      << "\n";
        }
    }
    std::cout << "median generations-to-solve (unsolved counts as "
              << cfg.evolution.max_generations + 1 << "):\n";
    double previous = -1.0;
    bool monotone = true;
    for (const std::string& v : o.values) {
        const double m = median_generations(rows, v, cfg.evolution.max_generations);
        std::cout << "  " << v << ": " << format_number(m) << " (solve rate "
                  << format_number(solve_rate(rows, v)) << ")\n";
        if (previous >= 0.0 && m > previous) {
            monotone = false;
        }
        previous = m;
    }
    if (spec.axis == SweepAxis::BeamCount) {
        std::cout << "trend: generations " << (monotone ? "non-increasing" : "not monotone")
                  << " in beam count\n";
    }
    std::cout << "summary: " << (cfg.output / "summary.csv").string() << "\n";
    return 0;
}

struct RenderOptions {
    std::string trajectory;
    std::string track;
    std::string scans;
    double fov_deg = 180.0;
    int every = 10;
};

int cmd_render(const RenderOptions& o, const GlobalOptions& g) {
    const Track track = resolve_track(o.track);
    const auto trajectory = read_trajectory_csv(o.trajectory);
    std::optional<ScanOverlay> overlay;
    if (!o.scans.empty()) {
        overlay = ScanOverlay{read_scan_csv(o.scans), deg_to_rad(o.fov_deg), o.every};
    }
    fs::path prefix = g.out ? fs::path(*g.out) : fs::path(o.trajectory).replace_extension();
    const fs::path track_svg = prefix.string() + ".svg";
    const fs::path steer_svg = prefix.string() + "_steering.svg";
    if (prefix.has_parent_path()) {
        fs::create_directories(prefix.parent_path());
    }
    write_file(track_svg, render_track_svg(track, trajectory, overlay ? &*overlay : nullptr));
    write_file(steer_svg, render_steering_svg(trajectory));
    std::cout << "wrote " << track_svg.string() << " and " << steer_svg.string() << "\n";
    return 0;
}

int cmd_gen_track(const TrackDifficulty& d, const std::optional<std::string>& name,
                  const GlobalOptions& g) {
    const std::uint64_t seed = g.seed.value_or(1);
    Track t = generate_random_track(seed, d);
    if (name) {
        t = Track(*name, t.track_width(), t.start(), t.start_heading(), t.destination(), t.walls(),
                  t.obstacles());
    }
    if (g.out) {
        if (const fs::path parent = fs::path(*g.out).parent_path(); !parent.empty()) {
            fs::create_directories(parent);
        }
        save_track_file(t, *g.out);
        std::cout << "wrote " << *g.out << "\n";
    } else {
        std::cout << save_track(t);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution of odd-symmetric steering networks for a 2D rangefinder vehicle"};
    app.require_subcommand(1);

    GlobalOptions g;
    std::uint64_t seed = 0;
    std::string out;
    int threads = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides config)");
    auto* out_opt = app.add_option("--out", out, "Output directory or file");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads for evaluation")
                            ->check(CLI::PositiveNumber);

    std::string train_config;
    auto* train = app.add_subcommand("train", "Evolve a network on the configured tracks");
    train->add_option("config", train_config, "Experiment config or run manifest")->required();

    EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "Run a trained chromosome on tracks");
    eval->add_option("chromosome", eval_opts.chromosome, "Chromosome file")->required();
    eval->add_option("tracks", eval_opts.tracks, "Track files or bundled track names")->required();
    eval->add_option("--config", eval_opts.config, "Take vehicle/sensor/episode from a config");
    eval->add_option("--sensor", eval_opts.sensor, "Sensor kind when no config is given");
    eval->add_option("--beams", eval_opts.beams, "Sensor beam count");
    eval->add_option("--max-ticks", eval_opts.max_ticks, "Tick budget per episode");

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Train across values of one axis");
    sweep->add_option("config", sweep_opts.config, "Base experiment config")->required();
    sweep->add_option("--axis", sweep_opts.axis, "beams | sensor | selection | symmetry")
        ->required();
    sweep->add_option("--values", sweep_opts.values, "Comma-separated axis values")
        ->delimiter(',')
        ->required();
    sweep->add_option("--reps", sweep_opts.reps, "Seeds per value")->check(CLI::PositiveNumber);
    sweep->add_flag("--parallel", sweep_opts.parallel, "Run rows concurrently");

    RenderOptions render_opts;
    auto* render = app.add_subcommand("render", "Render a trajectory and steering chart to SVG");
    render->add_option("trajectory", render_opts.trajectory, "Trajectory CSV")->required();
    render->add_option("track", render_opts.track, "Track file or bundled name")->required();
    render->add_option("--scans", render_opts.scans, "Scan sidecar CSV to overlay");
    render->add_option("--fov-deg", render_opts.fov_deg, "Sensor field of view for the overlay");
    render->add_option("--every", render_opts.every, "Overlay every N ticks");

    TrackDifficulty difficulty;
    std::optional<std::string> track_name;
    auto* gen = app.add_subcommand("gen-track", "Generate a random rectilinear track");
    gen->add_option("--min-legs", difficulty.min_legs, "Fewest straight legs");
    gen->add_option("--max-legs", difficulty.max_legs, "Most straight legs");
    gen->add_option("--min-width", difficulty.min_width, "Narrowest corridor width");
    gen->add_option("--max-width", difficulty.max_width, "Widest corridor width");
    gen->add_option("--min-leg-length", difficulty.min_leg_length, "Shortest leg length");
    gen->add_option("--max-leg-length", difficulty.max_leg_length, "Longest leg length");
    gen->add_option("--obstacle-density", difficulty.obstacle_density, "Chance of an obstacle on each leg after the first");
    gen->add_option("--name", track_name, "Track name (default random_<seed>)");

    for (auto* sub : {train, eval, sweep, render, gen}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed = seed;
    if (*out_opt) g.out = out;
    if (*threads_opt) {
        g.threads = threads;
        omp_set_num_threads(threads);
    }

    try {
        if (*train) return cmd_train(train_config, g);
        if (*eval) return cmd_eval(eval_opts, g);
        if (*sweep) return cmd_sweep(sweep_opts, g);
        if (*render) return cmd_render(render_opts, g);
        if (*gen) return cmd_gen_track(difficulty, track_name, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
