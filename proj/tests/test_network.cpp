#include <doctest.h>

#include <cmath>
#include <random>

#include "symnav/evolution.hpp"
#include "symnav/network.hpp"

using namespace symnav;

namespace {

std::vector<double> random_inputs(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    return x;
}

}  // namespace

TEST_CASE("activation") {
    CHECK(activation(0.0) == 0.0);
    CHECK(activation(1.2) == doctest::Approx(1.0 / (1.0 + std::exp(-1.2)) - 0.5).epsilon(1e-15));
    CHECK(activation(1.2) == doctest::Approx(0.268525).epsilon(1e-5));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        CHECK(activation(-x) == -activation(x));
        CHECK(std::abs(activation(x)) <= 0.5);
        if (std::abs(x) < 30) CHECK(std::abs(activation(x)) < 0.5);
    }
}

TEST_CASE("genome_length") {
    CHECK(genome_length({{4, 4, 2}, false}) == 24);
    CHECK(genome_length({{4, 4, 2}, true}) == 12);
    CHECK(genome_length({{5, 4, 2}, true}) == 12);
    CHECK(genome_length({{25, 25, 2}, true}) == 25 * 12 + 2 * 12);
    CHECK(genome_length({{4, 4, 2}, true, SymmetricDepth::FirstLayerOnly}) == 8 + 8);
    for (int a = 2; a <= 40; a += 2) {
        for (int b = 2; b <= 20; b += 2) {
            CHECK(genome_length({{a, b, 2}, true}) * 2 == genome_length({{a, b, 2}, false}));
        }
    }
}

TEST_CASE("NetworkSpec validation") {
    CHECK_THROWS_AS(NetworkSpec({{4, 2}, true}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(NetworkSpec({{4, 4, 3}, true}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(NetworkSpec({{4, 0, 2}, true}).validate(), std::invalid_argument);
    CHECK_NOTHROW(NetworkSpec({{4, 4, 4, 2}, true}).validate());
    CHECK(default_network(25, true).layer_sizes == std::vector<int>{25, 25, 2});
    CHECK(default_network(7, false, 3).layer_sizes == std::vector<int>{7, 3, 2});
}

TEST_CASE("decode examples") {
    SUBCASE("mirrored constrained row") {
        const Chromosome c{{0.3, -0.7, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {{4, 4, 2}, true}};
        const WeightMatrices w = decode(c);
        const auto row = w.layers[0].row(0);
        CHECK(std::vector<double>(row.begin(), row.end()) ==
              std::vector<double>{0.3, -0.7, 0.7, -0.3});
    }
    SUBCASE("odd fan_in center is zero") {
        std::vector<double> genes(12);
        for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = i + 1.0;
        const WeightMatrices w = decode({genes, {{5, 4, 2}, true}});
        const auto row = w.layers[0].row(1);
        CHECK(std::vector<double>(row.begin(), row.end()) ==
              std::vector<double>{3, 4, 0, -4, -3});
    }
    SUBCASE("unconstrained layout") {
        std::vector<double> genes(24);
        for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = static_cast<double>(i);
        const WeightMatrices w = decode({genes, {{4, 4, 2}, false}});
        REQUIRE(w.layers.size() == 2);
        for (int n = 0; n < 4; ++n) {
            for (int k = 0; k < 4; ++k) {
                CHECK(w.layers[0].row(n)[k] == 4 * n + k);
            }
        }
        for (int n = 0; n < 2; ++n) {
            for (int k = 0; k < 4; ++k) {
                CHECK(w.layers[1].row(n)[k] == 16 + 4 * n + k);
            }
        }
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(decode({{1, 2, 3}, {{4, 4, 2}, true}}), std::invalid_argument);
    }
}

TEST_CASE("decode and encode round trip; constrained rows are odd") {
    Rng rng(7);
    for (auto depth : {SymmetricDepth::AllLayers, SymmetricDepth::FirstLayerOnly}) {
        for (bool sym : {true, false}) {
            for (int n : {3, 4, 9, 25}) {
                const NetworkSpec spec{{n, n + 1, 5, 2}, sym, depth};
                const Chromosome c = random_chromosome(spec, 1.0, rng);
                const WeightMatrices w = decode(c);
                CHECK(encode(w) == c.genes);
                for (const WeightLayer& l : w.layers) {
                    if (!l.constrained) continue;
                    for (int j = 0; j < l.fan_out; ++j) {
                        const auto row = l.row(j);
                        for (int k = 0; k < l.fan_in; ++k) {
                            CHECK(row[k] == -row[l.fan_in - 1 - k]);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("forward basics") {
    const NetworkSpec spec{{6, 6, 2}, true};
    const std::vector<double> x{0.1, 0.5, 0.9, 0.2, 0.3, 0.8};
    const auto zero = forward(decode({std::vector<double>(genome_length(spec), 0.0), spec}), x);
    CHECK(zero.left == 0.0);
    CHECK(zero.right == 0.0);

    Rng rng(3);
    const WeightMatrices w = decode(random_chromosome(spec, 1.0, rng));
    const std::vector<double> pal{0.2, 0.7, 0.4, 0.4, 0.7, 0.2};
    const auto out = forward(w, pal);
    CHECK(out.left == 0.0);
    CHECK(out.right == 0.0);

    CHECK_THROWS_AS(forward(w, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("reversed inputs negate outputs") {
    Rng rng(17);
    std::mt19937_64 xr(18);
    std::uniform_int_distribution<int> size(4, 40);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = size(xr);
        const auto depth = trial % 2 ? SymmetricDepth::AllLayers : SymmetricDepth::FirstLayerOnly;
        const NetworkSpec spec{{n, size(xr), size(xr), 2}, true, depth};
        const WeightMatrices w = decode(random_chromosome(spec, 1.0, rng));
        auto x = random_inputs(n, xr);
        const auto a = forward(w, x);
        std::reverse(x.begin(), x.end());
        const auto b = forward(w, x);
        CHECK(b.left == -a.left);
        CHECK(b.right == -a.right);
    }
}

TEST_CASE("negated inputs negate an unconstrained network") {
    Rng rng(23);
    std::mt19937_64 xr(24);
    for (int trial = 0; trial < 100; ++trial) {
        const NetworkSpec spec{{10, 8, 2}, false};
        const WeightMatrices w = decode(random_chromosome(spec, 1.0, rng));
        auto x = random_inputs(10, xr);
        const auto a = forward(w, x);
        for (double& v : x) v = -v;
        const auto b = forward(w, x);
        CHECK(std::abs(a.left + b.left) < 1e-12);
        CHECK(std::abs(a.right + b.right) < 1e-12);
    }
}

TEST_CASE("steering_command") {
    const double m = 0.6;
    CHECK(steering_command(0, 0, m) == 0.0);
    CHECK(steering_command(0.5, -0.5, m) == m);
    CHECK(steering_command(-0.5, 0.5, m) == -m);
    CHECK(steering_command(0.1, 0.0, m) == doctest::Approx(0.12));
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 500; ++i) {
        const double l = u(rng), r = u(rng);
        CHECK(steering_command(r, l, m) == -steering_command(l, r, m));
        CHECK(std::abs(steering_command(l, r, m)) <= m);
    }
}

TEST_CASE("chromosome text form") {
    Rng rng(31);
    const NetworkSpec spec{{7, 5, 2}, true, SymmetricDepth::FirstLayerOnly};
    const Chromosome c = random_chromosome(spec, 1.0, rng);
    const std::string text = save_chromosome(c);
    CHECK(text.rfind("layers 7 5 2 symmetric 1 depth first\n", 0) == 0);
    const Chromosome back = load_chromosome(text);
    CHECK(back == c);
    CHECK(save_chromosome(back) == text);
    CHECK_THROWS(load_chromosome("layers 7 5 2 symmetric 1 depth first\n0.1 0.2\n"));
    CHECK_THROWS(load_chromosome("garbage\n"));
}
