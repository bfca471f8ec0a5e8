// Serial vs OpenMP population evaluation on a bundled track.
//
//   bench_evaluate [--track map6] [--population 200] [--repeats 3]

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "symnav/experiment.hpp"

using namespace symnav;

namespace {

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int run(const std::string& name, int population, int repeats) {
    const Track track = load_track_file(bundled_track_path(name).string());
    const SensorSpec sensor = make_sensor(SensorKind::Lidar, 25, track.track_width());
    const Evaluator evaluator = make_evaluator({track}, {}, sensor, {});
    EvolutionConfig config;
    config.population_size = population;
    config.master_seed = 7;
    const Population base = init_population(config, default_network(25, true));

    double serial = 0.0;
    Population reference;
    for (int r = 0; r < repeats; ++r) {
        reference = base;
        serial += seconds([&] { evaluate_population_serial(reference, evaluator, 1, 7); });
    }
    std::printf("track %s, population %d, %d repeats, %d hardware threads\n", name.c_str(),
                population, repeats, omp_get_num_procs());
    std::printf("serial     %8.3f s/generation\n", serial / repeats);

    for (int threads = 1; threads <= std::max(4, omp_get_num_procs()); threads *= 2) {
        omp_set_num_threads(threads);
        double parallel = 0.0;
        bool identical = true;
        for (int r = 0; r < repeats; ++r) {
            Population p = base;
            parallel += seconds([&] { evaluate_population(p, evaluator, 1, 7); });
            for (std::size_t i = 0; i < p.size(); ++i) {
                identical = identical && p[i].fitness == reference[i].fitness;
            }
        }
        std::printf("openmp %2d  %8.3f s/generation  speedup %5.2fx  %s\n", threads,
                    parallel / repeats, serial / parallel, identical ? "identical" : "MISMATCH");
    }
    return 0;
}

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP population evaluation"};
    std::string track = "map6";
    int population = 200;
    int repeats = 3;
    app.add_option("--track", track, "Bundled track name");
    app.add_option("--population", population, "Population size")->check(CLI::PositiveNumber);
    app.add_option("--repeats", repeats, "Timed repeats per mode")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);
    try {
        return run(track, population, repeats);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
