#include "symnav/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "symnav/number_format.hpp"

namespace symnav {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

SensorSpec SensorBlock::resolve(double track_width) const {
    if (beams < 2) {
        throw std::invalid_argument("sensor.beams must be at least 2, got " +
                                    std::to_string(beams));
    }
    SensorSpec spec = make_sensor(kind, beams, track_width);
    if (fov) spec.fov = *fov;
    if (max_range) spec.max_range = *max_range;
    if (noise_mean) spec.noise_mean = *noise_mean;
    if (noise_std) spec.noise_std = *noise_std;
    spec.validate();
    return spec;
}

NetworkSpec NetworkBlock::resolve(int inputs) const {
    NetworkSpec spec;
    spec.layer_sizes.push_back(inputs);
    if (hidden.empty()) {
        spec.layer_sizes.push_back(inputs);
    } else {
        spec.layer_sizes.insert(spec.layer_sizes.end(), hidden.begin(), hidden.end());
    }
    spec.layer_sizes.push_back(2);
    spec.symmetric = symmetric;
    spec.symmetric_depth = symmetric_depth;
    spec.validate();
    return spec;
}

void ExperimentConfig::validate() const {
    if (tracks.empty()) {
        throw std::invalid_argument("config needs at least one track");
    }
    vehicle.validate();
    const SensorSpec s = sensor_spec();
    const NetworkSpec n = network_spec();
    if (n.inputs() != s.beam_count) {
        throw std::invalid_argument("sensor has " + std::to_string(s.beam_count) +
                                    " beams but the network has " + std::to_string(n.inputs()) +
                                    " inputs");
    }
    evolution.validate();
    episode.validate();
}

namespace {

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; })) {
            throw ParseError(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

std::optional<double> opt_number(const ordered_json& obj, const char* key,
                                 const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_number()) {
        throw ParseError(join(path, key), "expected a number");
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw ParseError(join(path, key), "expected a finite number");
    }
    return v;
}

template <typename T>
void read(const ordered_json& obj, const char* key, const std::string& path, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) throw ParseError(join(path, key), "expected true/false");
            out = it->get<bool>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) throw ParseError(join(path, key), "expected an integer");
            out = it->get<T>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) throw ParseError(join(path, key), "expected a string");
            out = it->get<std::string>();
        } else {
            if (!it->is_number()) throw ParseError(join(path, key), "expected a number");
            out = it->get<T>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(join(path, key), e.what());
    }
}

void read_degrees(const ordered_json& obj, const char* key, const std::string& path,
                  double& radians) {
    if (auto v = opt_number(obj, key, path)) {
        radians = deg_to_rad(*v);
    }
}

Track parse_track_entry(const ordered_json& entry, const fs::path& base_dir,
                        const std::string& path) {
    if (entry.is_string()) {
        fs::path p = entry.get<std::string>();
        if (p.is_relative()) {
            p = base_dir / p;
        }
        if (!fs::exists(p)) {
            throw ValidationError(path, "track file not found: " + p.string());
        }
        return load_track_file(p.string());
    }
    if (entry.is_object() && entry.contains("generate")) {
        const ordered_json& g = entry["generate"];
        const std::string gpath = path + ".generate";
        check_keys(g,
                   {"seed", "min_legs", "max_legs", "min_width", "max_width", "min_leg_length",
                    "max_leg_length", "obstacle_density"},
                   gpath);
        std::uint64_t seed = 0;
        read(g, "seed", gpath, seed);
        TrackDifficulty d;
        read(g, "min_legs", gpath, d.min_legs);
        read(g, "max_legs", gpath, d.max_legs);
        read(g, "min_width", gpath, d.min_width);
        read(g, "max_width", gpath, d.max_width);
        read(g, "min_leg_length", gpath, d.min_leg_length);
        read(g, "max_leg_length", gpath, d.max_leg_length);
        read(g, "obstacle_density", gpath, d.obstacle_density);
        return generate_random_track(seed, d);
    }
    if (entry.is_object()) {
        try {
            return load_track(entry.dump());
        } catch (const FormatError& e) {
            throw ParseError(path + "." + e.field(), e.what());
        }
    }
    throw ParseError(path, "expected a path, an inline track, or a generate block");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("document", e.what());
    }
    check_keys(doc,
               {"version", "master_seed", "output", "checkpoints", "tracks", "vehicle", "sensor",
                "network", "evolution", "episode"},
               "");

    ExperimentConfig cfg;
    read(doc, "master_seed", "", cfg.evolution.master_seed);
    std::string output = cfg.output.string();
    read(doc, "output", "", output);
    cfg.output = output;
    read(doc, "checkpoints", "", cfg.checkpoints);

    auto tracks = doc.find("tracks");
    if (tracks == doc.end() || !tracks->is_array() || tracks->empty()) {
        throw ParseError("tracks", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < tracks->size(); ++i) {
        cfg.tracks.push_back(
            parse_track_entry((*tracks)[i], base_dir, "tracks[" + std::to_string(i) + "]"));
    }

    if (auto v = doc.find("vehicle"); v != doc.end()) {
        check_keys(*v,
                   {"wheelbase", "body_length", "body_width", "speed", "max_steer_deg",
                    "max_steer_rate_deg"},
                   "vehicle");
        read(*v, "wheelbase", "vehicle", cfg.vehicle.wheelbase);
        read(*v, "body_length", "vehicle", cfg.vehicle.body_length);
        read(*v, "body_width", "vehicle", cfg.vehicle.body_width);
        read(*v, "speed", "vehicle", cfg.vehicle.speed);
        read_degrees(*v, "max_steer_deg", "vehicle", cfg.vehicle.max_steer);
        read_degrees(*v, "max_steer_rate_deg", "vehicle", cfg.vehicle.max_steer_rate);
    }

    if (auto s = doc.find("sensor"); s != doc.end()) {
        check_keys(*s, {"kind", "beams", "fov_deg", "max_range", "noise_mean", "noise_std"},
                   "sensor");
        std::string kind(to_string(cfg.sensor.kind));
        read(*s, "kind", "sensor", kind);
        try {
            cfg.sensor.kind = sensor_kind_from_string(kind);
        } catch (const std::invalid_argument& e) {
            throw ParseError("sensor.kind", e.what());
        }
        read(*s, "beams", "sensor", cfg.sensor.beams);
        if (auto fov = opt_number(*s, "fov_deg", "sensor")) cfg.sensor.fov = deg_to_rad(*fov);
        cfg.sensor.max_range = opt_number(*s, "max_range", "sensor");
        cfg.sensor.noise_mean = opt_number(*s, "noise_mean", "sensor");
        cfg.sensor.noise_std = opt_number(*s, "noise_std", "sensor");
    }

    if (auto n = doc.find("network"); n != doc.end()) {
        check_keys(*n, {"hidden", "symmetric", "symmetric_depth"}, "network");
        if (auto h = n->find("hidden"); h != n->end()) {
            if (!h->is_array()) throw ParseError("network.hidden", "expected an array");
            for (const auto& w : *h) {
                if (!w.is_number_integer() || w.get<int>() < 1) {
                    throw ParseError("network.hidden", "expected positive integers");
                }
                cfg.network.hidden.push_back(w.get<int>());
            }
        }
        read(*n, "symmetric", "network", cfg.network.symmetric);
        std::string depth(to_string(cfg.network.symmetric_depth));
        read(*n, "symmetric_depth", "network", depth);
        try {
            cfg.network.symmetric_depth = symmetric_depth_from_string(depth);
        } catch (const std::invalid_argument& e) {
            throw ParseError("network.symmetric_depth", e.what());
        }
    }

    if (auto e = doc.find("evolution"); e != doc.end()) {
        const std::string p = "evolution";
        check_keys(*e,
                   {"population_size", "mutation_prob", "mutation_mode", "crossover_prob",
                    "crossover_site_mean", "crossover_site_std", "selection", "selection_group",
                    "init_weight_range", "max_generations", "target_fitness", "stop_on_solved"},
                   p);
        EvolutionConfig& ev = cfg.evolution;
        read(*e, "population_size", p, ev.population_size);
        read(*e, "mutation_prob", p, ev.mutation_prob);
        read(*e, "crossover_prob", p, ev.crossover_prob);
        read(*e, "crossover_site_mean", p, ev.crossover_site_mean);
        read(*e, "crossover_site_std", p, ev.crossover_site_std);
        read(*e, "selection_group", p, ev.selection_group);
        read(*e, "init_weight_range", p, ev.init_weight_range);
        read(*e, "max_generations", p, ev.max_generations);
        read(*e, "stop_on_solved", p, ev.stop_on_solved);
        ev.target_fitness = opt_number(*e, "target_fitness", p);
        std::string selection(to_string(ev.selection));
        read(*e, "selection", p, selection);
        std::string mode(to_string(ev.mutation_mode));
        read(*e, "mutation_mode", p, mode);
        try {
            ev.selection = selection_from_string(selection);
            ev.mutation_mode = mutation_mode_from_string(mode);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(p, ex.what());
        }
    }

    if (auto ep = doc.find("episode"); ep != doc.end()) {
        check_keys(*ep, {"max_ticks", "distance_mode"}, "episode");
        read(*ep, "max_ticks", "episode", cfg.episode.max_ticks);
        std::string mode(to_string(cfg.episode.distance));
        read(*ep, "distance_mode", "episode", mode);
        try {
            cfg.episode.distance = distance_mode_from_string(mode);
        } catch (const std::invalid_argument& ex) {
            throw ParseError("episode.distance_mode", ex.what());
        }
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("file", "cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

std::string write_manifest(const ExperimentConfig& cfg) {
    const SensorSpec sensor = cfg.sensor_spec();
    const NetworkSpec net = cfg.network_spec();
    const EvolutionConfig& ev = cfg.evolution;

    ordered_json doc;
    doc["version"] = std::string(kVersion);
    doc["master_seed"] = ev.master_seed;
    doc["checkpoints"] = cfg.checkpoints;
    ordered_json tracks = ordered_json::array();
    for (const Track& t : cfg.tracks) {
        tracks.push_back(ordered_json::parse(save_track(t)));
    }
    doc["tracks"] = std::move(tracks);
    doc["vehicle"] = {{"wheelbase", cfg.vehicle.wheelbase},
                      {"body_length", cfg.vehicle.body_length},
                      {"body_width", cfg.vehicle.body_width},
                      {"speed", cfg.vehicle.speed},
                      {"max_steer_deg", exact_degrees(cfg.vehicle.max_steer)},
                      {"max_steer_rate_deg", exact_degrees(cfg.vehicle.max_steer_rate)}};
    doc["sensor"] = {{"kind", std::string(to_string(sensor.kind))},
                     {"beams", sensor.beam_count},
                     {"fov_deg", exact_degrees(sensor.fov)},
                     {"max_range", sensor.max_range},
                     {"noise_mean", sensor.noise_mean},
                     {"noise_std", sensor.noise_std}};
    std::vector<int> hidden(net.layer_sizes.begin() + 1, net.layer_sizes.end() - 1);
    doc["network"] = {{"hidden", hidden},
                      {"symmetric", net.symmetric},
                      {"symmetric_depth", std::string(to_string(net.symmetric_depth))}};
    doc["evolution"] = {{"population_size", ev.population_size},
                        {"mutation_prob", ev.mutation_prob},
                        {"mutation_mode", std::string(to_string(ev.mutation_mode))},
                        {"crossover_prob", ev.crossover_prob},
                        {"crossover_site_mean", ev.crossover_site_mean},
                        {"crossover_site_std", ev.crossover_site_std},
                        {"selection", std::string(to_string(ev.selection))},
                        {"selection_group", ev.selection_group},
                        {"init_weight_range", ev.init_weight_range},
                        {"max_generations", ev.max_generations},
                        {"target_fitness", ev.target_fitness ? ordered_json(*ev.target_fitness)
                                                             : ordered_json(nullptr)},
                        {"stop_on_solved", ev.stop_on_solved}};
    doc["episode"] = {{"max_ticks", cfg.episode.max_ticks},
                      {"distance_mode", std::string(to_string(cfg.episode.distance))}};
    return doc.dump(2) + "\n";
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string generation_file(int generation) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gen_%04d.chromosome", generation);
    return buf;
}

}  // namespace

std::string fitness_csv(const std::vector<GenerationStats>& history) {
    std::string csv = "generation,best_fitness,mean_fitness,solved\n";
    for (const GenerationStats& s : history) {
        csv += std::to_string(s.generation) + ',' + format_number(s.best_fitness) + ',' +
               format_number(s.mean_fitness) + ',' + (s.solved ? "true" : "false") + '\n';
    }
    return csv;
}

TrainResult run_training(const ExperimentConfig& config, const fs::path& out_dir) {
    config.validate();
    const bool write = !out_dir.empty();
    if (write) {
        fs::create_directories(out_dir);
        if (config.checkpoints) {
            fs::create_directories(out_dir / "checkpoints");
        }
        write_text(out_dir / "manifest.json", write_manifest(config));
    }

    const Evaluator evaluator =
        make_evaluator(config.tracks, config.vehicle, config.sensor_spec(), config.episode);
    GenerationCallback on_generation;
    if (write && config.checkpoints) {
        on_generation = [&](const GenerationStats& s) {
            save_chromosome_file(s.best_individual,
                                 (out_dir / "checkpoints" / generation_file(s.generation)).string());
        };
    }

    TrainResult result;
    result.history = evolve(config.evolution, config.network_spec(), evaluator, on_generation);
    result.generations_to_solve = generations_to_solve(result.history);

    const GenerationStats* fittest = &result.history.front();
    for (const GenerationStats& s : result.history) {
        if (s.best_fitness > fittest->best_fitness) {
            fittest = &s;
        }
    }
    result.max_fitness = fittest->best_fitness;
    result.best = fittest->best_individual;
    if (result.generations_to_solve) {
        result.best = *result.history[static_cast<std::size_t>(*result.generations_to_solve - 1)]
                           .winning_individual;
    }

    if (write) {
        write_text(out_dir / "fitness.csv", fitness_csv(result.history));
        save_chromosome_file(result.best, (out_dir / "best.chromosome").string());
    }
    return result;
}

std::vector<EvalReport> run_evaluation(const Chromosome& chromosome,
                                       const std::vector<Track>& tracks,
                                       const VehicleParams& vehicle, const SensorSpec& sensor,
                                       const EpisodeConfig& episode, std::uint64_t seed) {
    const WeightMatrices weights = decode(chromosome);
    if (weights.inputs() != sensor.beam_count) {
        throw std::invalid_argument("chromosome expects " + std::to_string(weights.inputs()) +
                                    " inputs but the sensor has " +
                                    std::to_string(sensor.beam_count) + " beams");
    }
    EpisodeConfig recorded = episode;
    recorded.record_trajectory = true;
    std::vector<EvalReport> reports;
    for (std::size_t k = 0; k < tracks.size(); ++k) {
        reports.push_back({tracks[k].name(), run_episode(tracks[k], vehicle, sensor, weights,
                                                         recorded, episode_seed(seed, k))});
    }
    return reports;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::BeamCount: return "beams";
        case SweepAxis::SensorKind: return "sensor";
        case SweepAxis::Selection: return "selection";
        case SweepAxis::Symmetry: return "symmetry";
    }
    return "?";
}

SweepAxis sweep_axis_from_string(std::string_view text) {
    for (SweepAxis a : {SweepAxis::BeamCount, SweepAxis::SensorKind, SweepAxis::Selection,
                        SweepAxis::Symmetry}) {
        if (text == to_string(a)) {
            return a;
        }
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(text) +
                                "' (expected beams, sensor, selection, symmetry)");
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepAxis axis,
                                   const std::string& value) {
    ExperimentConfig cfg = base;
    switch (axis) {
        case SweepAxis::BeamCount: {
            std::size_t used = 0;
            const int beams = std::stoi(value, &used);
            if (used != value.size()) {
                throw std::invalid_argument("beam count '" + value + "' is not an integer");
            }
            cfg.sensor.beams = beams;
            break;
        }
        case SweepAxis::SensorKind:
            cfg.sensor = SensorBlock{};
            cfg.sensor.kind = sensor_kind_from_string(value);
            cfg.sensor.beams = base.sensor.beams;
            break;
        case SweepAxis::Selection:
            cfg.evolution.selection = selection_from_string(value);
            break;
        case SweepAxis::Symmetry:
            if (value == "true" || value == "symmetric") {
                cfg.network.symmetric = true;
            } else if (value == "false" || value == "unconstrained") {
                cfg.network.symmetric = false;
            } else {
                throw std::invalid_argument("symmetry value must be true or false");
            }
            break;
    }
    cfg.validate();
    return cfg;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepSpec& sweep,
                                const fs::path& out_dir, bool parallel_rows) {
    if (sweep.values.empty()) {
        throw std::invalid_argument("sweep needs at least one value");
    }
    if (sweep.repetitions < 1) {
        throw std::invalid_argument("sweep repetitions must be >= 1");
    }
    std::vector<SweepRow> rows;
    for (const std::string& v : sweep.values) {
        for (int r = 0; r < sweep.repetitions; ++r) {
            SweepRow row;
            row.axis_value = v;
            row.seed = base.evolution.master_seed + static_cast<std::uint64_t>(r);
            rows.push_back(std::move(row));
        }
    }

    auto run_row = [&](SweepRow& row) {
        try {
            ExperimentConfig cfg = apply_sweep_value(base, sweep.axis, row.axis_value);
            cfg.evolution.master_seed = row.seed;
            const fs::path dir = out_dir.empty() ? fs::path{}
                                                 : out_dir / (std::string(to_string(sweep.axis)) +
                                                              "_" + row.axis_value) /
                                                       ("seed_" + std::to_string(row.seed));
            TrainResult r = run_training(cfg, dir);
            row.generations_to_solve = r.generations_to_solve;
            row.solved = r.generations_to_solve.has_value();
            row.max_fitness = r.max_fitness;
            row.history = std::move(r.history);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const auto n = static_cast<std::ptrdiff_t>(rows.size());
    if (parallel_rows) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            run_row(rows[static_cast<std::size_t>(i)]);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            run_row(rows[static_cast<std::size_t>(i)]);
        }
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(out_dir / "summary.csv", sweep_csv(rows));
    }
    return rows;
}

int effective_generations(const SweepRow& row, int max_generations) {
    return row.generations_to_solve ? *row.generations_to_solve : max_generations + 1;
}

double median_generations(const std::vector<SweepRow>& rows, const std::string& value,
                          int max_generations) {
    std::vector<int> g;
    for (const SweepRow& r : rows) {
        if (r.axis_value == value) {
            g.push_back(effective_generations(r, max_generations));
        }
    }
    if (g.empty()) {
        throw std::invalid_argument("no sweep rows for value '" + value + "'");
    }
    std::sort(g.begin(), g.end());
    const std::size_t m = g.size() / 2;
    return g.size() % 2 == 1 ? g[m] : 0.5 * (g[m - 1] + g[m]);
}

double solve_rate(const std::vector<SweepRow>& rows, const std::string& value) {
    int total = 0;
    int solved = 0;
    for (const SweepRow& r : rows) {
        if (r.axis_value == value) {
            ++total;
            solved += r.solved ? 1 : 0;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(solved) / total;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "axis_value,seed,generations_to_solve,max_fitness,solved\n";
    for (const SweepRow& r : rows) {
        csv += r.axis_value + ',' + std::to_string(r.seed) + ',' +
               (r.generations_to_solve ? std::to_string(*r.generations_to_solve) : "") + ',' +
               format_number(r.max_fitness) + ',' +
               (r.error ? "error" : (r.solved ? "true" : "false")) + '\n';
    }
    return csv;
}

fs::path bundled_track_path(std::string_view name) {
    return fs::path(SYMNAV_SOURCE_DIR) / "tracks" / (std::string(name) + ".json");
}

}  // namespace symnav
