#include <doctest.h>

#include <filesystem>

#include "symnav/experiment.hpp"
#include "symnav/simulation.hpp"

using namespace symnav;
namespace fs = std::filesystem;

namespace {

Track bundled(const char* name) { return load_track_file(bundled_track_path(name).string()); }

WeightMatrices zero_net(int inputs) {
    const NetworkSpec spec = default_network(inputs, true);
    return decode({std::vector<double>(genome_length(spec), 0.0), spec});
}

}  // namespace

TEST_CASE("fitness_of") {
    CHECK(fitness_of({3, 4}, {3, 4}, 17) == 0.0);
    CHECK(fitness_of({10, 0}, {0, 0}, 4) == 25.0);
    CHECK(fitness_of({100, 0}, {0, 0}, 20) == 500.0);
    CHECK(fitness_of({20, 0}, {0, 0}, 4) == 4 * fitness_of({10, 0}, {0, 0}, 4));
    CHECK_THROWS_AS(fitness_of({1, 1}, {0, 0}, 0), std::invalid_argument);
}

TEST_CASE("vehicle starting in collision") {
    const Track t("bad", 100, {0, 0}, 0, {300, 0}, {Segment({0, -50}, {0, 50})}, {});
    const SensorSpec s = make_sensor(SensorKind::Basic, 5, 100);
    EpisodeConfig ep;
    ep.record_trajectory = true;
    const EpisodeResult r = run_episode(t, {}, s, zero_net(5), ep, 0);
    CHECK(r.outcome.terminal == Terminal::Collision);
    CHECK(r.outcome.ticks == 1);
    CHECK(r.fitness == 0.0);
    CHECK(r.trajectory->size() == 1);
}

TEST_CASE("zero network drives straight down a straight corridor") {
    const Track t = bundled("straight");
    const SensorSpec s = make_sensor(SensorKind::Basic, 25, t.track_width());
    EpisodeConfig ep;
    ep.record_trajectory = true;
    for (int ticks : {10, 50, 100}) {
        ep.max_ticks = ticks;
        const EpisodeResult r = run_episode(t, {}, s, zero_net(25), ep, 0);
        CHECK(r.outcome.terminal == Terminal::TimedOut);
        CHECK(r.outcome.ticks == ticks);
        CHECK(r.fitness == doctest::Approx(25.0 * ticks));
        CHECK(r.trajectory->size() == static_cast<std::size_t>(ticks));
        for (const auto& p : *r.trajectory) {
            CHECK(p.steer_command == 0.0);
            CHECK(p.state.y == 0.0);
        }
    }
    ep.max_ticks = 2000;
    const EpisodeResult full = run_episode(t, {}, s, zero_net(25), ep, 0);
    CHECK(full.outcome.terminal == Terminal::ReachedDestination);
}

TEST_CASE("dimension mismatch names both sizes") {
    const Track t = bundled("straight");
    const SensorSpec s = make_sensor(SensorKind::Basic, 7, t.track_width());
    try {
        run_episode(t, {}, s, zero_net(5), {}, 0);
        FAIL("expected a mismatch");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find('7') != std::string::npos);
        CHECK(what.find('5') != std::string::npos);
    }
}

TEST_CASE("path length mode") {
    const Track t = bundled("straight");
    const SensorSpec s = make_sensor(SensorKind::Basic, 5, t.track_width());
    EpisodeConfig ep;
    ep.max_ticks = 40;
    ep.distance = DistanceMode::PathLength;
    const EpisodeResult r = run_episode(t, {}, s, zero_net(5), ep, 0);
    CHECK(r.path_length == doctest::Approx(200));
    CHECK(r.fitness == doctest::Approx(200.0 * 200.0 / 40));
}

TEST_CASE("make_evaluator") {
    const Track t = bundled("map1");
    const SensorSpec s = make_sensor(SensorKind::Basic, 9, t.track_width());
    const NetworkSpec spec = default_network(9, true);
    Rng rng(5);
    const Chromosome c = random_chromosome(spec, 1.0, rng);
    const EpisodeResult single = run_episode(t, {}, s, decode(c), {}, 0);

    const Evaluator one = make_evaluator({t}, {}, s, {});
    const Evaluator two = make_evaluator({t, t}, {}, s, {});
    CHECK(one(c, 3).fitness == single.fitness);
    CHECK(two(c, 3).fitness == 2.0 * single.fitness);

    const SensorSpec lidar = make_sensor(SensorKind::Lidar, 9, t.track_width());
    const Evaluator noisy = make_evaluator({t}, {}, lidar, {});
    CHECK(noisy(c, 11).fitness == noisy(c, 11).fitness);
    const EpisodeResult direct = run_episode(t, {}, lidar, decode(c), {}, episode_seed(11, 0));
    CHECK(noisy(c, 11).fitness == direct.fitness);
}

TEST_CASE("fitness is non-negative and zero only at the start") {
    const Track t = bundled("map6");
    const SensorSpec s = make_sensor(SensorKind::Basic, 11, t.track_width());
    const NetworkSpec spec = default_network(11, false);
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const EpisodeResult r =
            run_episode(t, {}, s, decode(random_chromosome(spec, 1.0, rng)), {}, 0);
        CHECK(r.fitness >= 0.0);
        CHECK((r.fitness == 0.0) == (r.outcome.final_position == t.start()));
    }
}

TEST_CASE("trajectory CSV round trip") {
    const Track t = bundled("map1");
    const SensorSpec s = make_sensor(SensorKind::Basic, 9, t.track_width());
    Rng rng(2);
    EpisodeConfig ep;
    ep.record_trajectory = true;
    const EpisodeResult r =
        run_episode(t, {}, s, decode(random_chromosome(default_network(9, true), 1.0, rng)), ep, 0);
    fs::create_directories(SYMNAV_TEST_TMP);
    const std::string path = std::string(SYMNAV_TEST_TMP) + "/traj.csv";
    write_trajectory_csv(*r.trajectory, path);
    const auto back = read_trajectory_csv(path);
    REQUIRE(back.size() == r.trajectory->size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].tick == (*r.trajectory)[i].tick);
        CHECK(back[i].state.x == (*r.trajectory)[i].state.x);
        CHECK(back[i].state.y == (*r.trajectory)[i].state.y);
        CHECK(back[i].steer_command == (*r.trajectory)[i].steer_command);
    }
}
