#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symnav/vehicle.hpp"

using namespace symnav;
using std::numbers::pi;

TEST_CASE("default parameters") {
    const VehicleParams p;
    CHECK(p.wheelbase == 20.0);
    CHECK(p.body_length == 30.0);
    CHECK(p.body_width == 16.0);
    CHECK(p.speed == 5.0);
    CHECK(p.max_steer == doctest::Approx(35.0 * pi / 180));
    CHECK(p.max_steer_rate == doctest::Approx(5.0 * pi / 180));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("validate rejects bad parameters") {
    VehicleParams p;
    p.speed = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.max_steer = pi / 2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.wheelbase = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("straight step") {
    const VehicleParams p;
    const VehicleState s = step({0, 0, 0, 0}, 0.0, p);
    CHECK(s.x == 5.0);
    CHECK(s.y == 0.0);
    CHECK(s.theta == 0.0);
    CHECK(s.delta == 0.0);
}

TEST_CASE("steering slews at the rate limit and clamps") {
    const VehicleParams p;
    VehicleState s{};
    s = step(s, 1.0, p);
    CHECK(s.delta == doctest::Approx(p.max_steer_rate));
    for (int i = 0; i < 20; ++i) {
        s = step(s, 1.0, p);
    }
    CHECK(s.delta == p.max_steer);
    s = step(s, -1.0, p);
    CHECK(s.delta == doctest::Approx(p.max_steer - p.max_steer_rate));
    s = step({0, 0, 0, 0.01}, 0.0, p);
    CHECK(s.delta == 0.0);
}

TEST_CASE("per-tick displacement equals speed") {
    const VehicleParams p;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    VehicleState s{};
    for (int i = 0; i < 500; ++i) {
        const VehicleState n = step(s, u(rng), p);
        CHECK(point_distance(s.position(), n.position()) == doctest::Approx(p.speed).epsilon(1e-12));
        CHECK(std::abs(n.delta) <= p.max_steer);
        CHECK(n.theta > -pi);
        CHECK(n.theta <= pi);
        s = n;
    }
}

TEST_CASE("saturated steering circles with radius wheelbase / sin(max_steer)") {
    const VehicleParams p;
    VehicleState s{};
    for (int i = 0; i < 50; ++i) {
        s = step(s, p.max_steer, p);
    }
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i) {
        s = step(s, p.max_steer, p);
        pts.push_back(s.position());
    }
    const double expected = p.wheelbase / std::sin(p.max_steer);
    CHECK(oracle::fit_circle_radius(pts) == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("negated commands mirror the trajectory") {
    const VehicleParams p;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    VehicleState a{}, b{};
    for (int i = 0; i < 400; ++i) {
        const double cmd = u(rng);
        a = step(a, cmd, p);
        b = step(b, -cmd, p);
        CHECK(b.x == doctest::Approx(a.x).epsilon(1e-12).scale(1.0));
        CHECK(b.y == doctest::Approx(-a.y).epsilon(1e-12).scale(1.0));
        CHECK(b.delta == -a.delta);
    }
}

TEST_CASE("reflected state with negated command gives the reflected step") {
    const VehicleParams p;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 1000; ++i) {
        const VehicleState s{100 * u(rng), 100 * u(rng), 3 * u(rng), p.max_steer * u(rng)};
        const double cmd = u(rng);
        const VehicleState a = step(s, cmd, p);
        const VehicleState b = step({s.x, -s.y, -s.theta, -s.delta}, -cmd, p);
        CHECK(std::abs(b.x - a.x) < 1e-12 * std::max(1.0, std::abs(a.x)));
        CHECK(std::abs(b.y + a.y) < 1e-12 * std::max(1.0, std::abs(a.y)));
        CHECK(std::abs(normalize_angle(b.theta + a.theta)) < 1e-12);
    }
}

TEST_CASE("footprint") {
    const VehicleParams p;
    const OrientedRect r = footprint({0, 0, 0, 0}, p);
    CHECK(r.center == Point{0, 0});
    CHECK(r.half_length == 15.0);
    CHECK(r.half_width == 8.0);
    CHECK(r.heading == 0.0);
    const auto c = r.corners();
    CHECK(c[0] == Point{15, 8});

    const auto up = footprint({0, 0, pi / 2, 0}, p).corners();
    CHECK(up[0].x == doctest::Approx(-8));
    CHECK(up[0].y == doctest::Approx(15));

    const double h = pi / 6;
    const auto tilted = footprint({3, 4, h, 0}, p).corners();
    const double lx[4] = {15, -15, -15, 15}, ly[4] = {8, 8, -8, -8};
    for (int i = 0; i < 4; ++i) {
        CHECK(tilted[i].x == doctest::Approx(3 + lx[i] * std::cos(h) - ly[i] * std::sin(h)));
        CHECK(tilted[i].y == doctest::Approx(4 + lx[i] * std::sin(h) + ly[i] * std::cos(h)));
    }
}
