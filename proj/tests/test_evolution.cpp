#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <set>

#include "symnav/evolution.hpp"

using namespace symnav;

namespace {

const NetworkSpec kSpec{{4, 4, 2}, true};  // 12 genes

Evaluation neg_sphere(const Chromosome& c, std::uint64_t) {
    double s = 0.0;
    for (double g : c.genes) s += g * g;
    return {-s, false};
}

Chromosome filled(double v, std::size_t n = 24) {
    return {std::vector<double>(n, v), {{4, 4, 2}, false}};
}

Population scored(std::size_t n, Rng& rng, const NetworkSpec& spec = kSpec) {
    Population p;
    for (std::size_t i = 0; i < n; ++i) {
        Individual ind;
        ind.chromosome = random_chromosome(spec, 1.0, rng);
        ind.fitness = static_cast<double>(i);
        p.push_back(ind);
    }
    return p;
}

}  // namespace

TEST_CASE("default configuration") {
    const EvolutionConfig c;
    CHECK(c.population_size == 200);
    CHECK(c.mutation_prob == 0.1);
    CHECK(c.crossover_prob == 1.0);
    CHECK(c.crossover_site_mean == 0.95);
    CHECK(c.crossover_site_std == 0.05);
    CHECK(c.selection_group == 10);
    CHECK(c.selection == Selection::Tournament);
    CHECK(c.mutation_mode == MutationMode::PerChromosome);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config validation") {
    EvolutionConfig c;
    c.population_size = 201;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.mutation_prob = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.selection_group = 300;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("strategy names") {
    for (auto s : {Selection::Tournament, Selection::Elitism, Selection::Roulette}) {
        CHECK(selection_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(selection_from_string("lottery"), std::invalid_argument);
}

TEST_CASE("derive_seed mixes all coordinates") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t m : {0ull, 1ull}) {
        for (std::uint64_t a = 0; a < 20; ++a) {
            for (std::uint64_t b = 0; b < 20; ++b) {
                seen.insert(derive_seed(m, a, b));
            }
        }
    }
    CHECK(seen.size() == 800);
    CHECK(derive_seed(5, 6, 7) == derive_seed(5, 6, 7));
}

TEST_CASE("init_population") {
    EvolutionConfig c;
    c.master_seed = 9;
    c.init_weight_range = 0.5;
    const Population a = init_population(c, kSpec);
    const Population b = init_population(c, kSpec);
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].chromosome == b[i].chromosome);
        CHECK(a[i].chromosome.genes.size() == 12);
        for (double g : a[i].chromosome.genes) {
            CHECK(std::abs(g) <= 0.5);
        }
    }
    c.master_seed = 10;
    const Population d = init_population(c, kSpec);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].chromosome != d[i].chromosome;
    CHECK(differs);
}

TEST_CASE("crossover sites") {
    CHECK(crossover_site(0.95, 24) == 23);
    CHECK(crossover_site(1.3, 24) == 24);
    CHECK(crossover_site(-0.2, 24) == 0);
    const Chromosome a = filled(1.0), b = filled(2.0);
    {
        auto [x, y] = crossover_at(a, b, 24);
        CHECK(x == a);
        CHECK(y == b);
    }
    {
        auto [x, y] = crossover_at(a, b, 0);
        CHECK(x == b);
        CHECK(y == a);
    }
    {
        auto [x, y] = crossover_at(a, b, 23);
        for (int i = 0; i < 23; ++i) {
            CHECK(x.genes[i] == 1.0);
            CHECK(y.genes[i] == 2.0);
        }
        CHECK(x.genes[23] == 2.0);
        CHECK(y.genes[23] == 1.0);
    }
}

TEST_CASE("crossover respects crossover_prob and the site distribution") {
    EvolutionConfig c;
    Rng rng(1);
    const Chromosome a = filled(1.0, 100), b = filled(2.0, 100);
    c.crossover_prob = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto [x, y] = crossover(a, b, c, rng);
        CHECK(x == a);
        CHECK(y == b);
    }
    c.crossover_prob = 1.0;
    double mean_site = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        auto [x, y] = crossover(a, b, c, rng);
        const auto site = std::find(x.genes.begin(), x.genes.end(), 2.0) - x.genes.begin();
        mean_site += static_cast<double>(site);
    }
    mean_site /= trials;
    // Clamping at 1 pulls the mean slightly below 95.
    CHECK(mean_site > 92.0);
    CHECK(mean_site < 95.5);
}

TEST_CASE("mutation") {
    EvolutionConfig c;
    Rng rng(2);
    const Chromosome base = filled(5.0);
    c.mutation_prob = 0.0;
    Chromosome m = base;
    mutate(m, c, rng);
    CHECK(m == base);

    c.mutation_prob = 1.0;
    for (int i = 0; i < 100; ++i) {
        Chromosome x = base;
        mutate(x, c, rng);
        CHECK(x.genes.size() == base.genes.size());
        int changed = 0;
        for (std::size_t k = 0; k < x.genes.size(); ++k) {
            if (x.genes[k] != 5.0) {
                ++changed;
                CHECK(std::abs(x.genes[k]) <= 1.0);
            }
        }
        CHECK(changed == 1);
    }

    // Seeded replay of index and value.
    Rng r1(77), r2(77);
    Chromosome p = base, q = base;
    mutate(p, c, r1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CHECK(unit(r2) < 1.0);
    const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, 23)(r2);
    const double val = std::uniform_real_distribution<double>(-1.0, 1.0)(r2);
    q.genes[idx] = val;
    CHECK(p == q);

    c.mutation_mode = MutationMode::PerGene;
    c.mutation_prob = 0.5;
    Chromosome g = filled(5.0, 2000);
    mutate(g, c, rng);
    const auto kept = std::count(g.genes.begin(), g.genes.end(), 5.0);
    CHECK(kept > 850);
    CHECK(kept < 1150);
}

TEST_CASE("rank_by_fitness is stable and descending") {
    Population p(5);
    const double f[5] = {1, 3, 3, 0, 2};
    for (int i = 0; i < 5; ++i) p[i].fitness = f[i];
    CHECK(rank_by_fitness(p) == std::vector<std::size_t>{1, 2, 4, 0, 3});
}

TEST_CASE("roulette favours a dominant individual") {
    std::vector<double> f(100, 1e-3 / 99);
    f[17] = 0.999;
    Rng rng(12);
    int pairs_with = 0;
    for (int i = 0; i < 1000; ++i) {
        const bool a = roulette_pick(f, rng) == 17;
        const bool b = roulette_pick(f, rng) == 17;
        pairs_with += a || b;
    }
    CHECK(pairs_with >= 950);
    // All-zero fitness still yields valid picks.
    std::vector<double> zero(10, 0.0);
    std::set<std::size_t> picked;
    for (int i = 0; i < 500; ++i) picked.insert(roulette_pick(zero, rng));
    CHECK(picked.size() == 10);
}

TEST_CASE("next_generation") {
    Rng rng(4);
    EvolutionConfig c;
    c.population_size = 40;
    const Population p = scored(40, rng);
    const Chromosome best = p[39].chromosome;

    SUBCASE("sizes and genome lengths") {
        for (auto s : {Selection::Tournament, Selection::Elitism, Selection::Roulette}) {
            c.selection = s;
            const Population n = next_generation(p, c, kSpec, rng);
            CHECK(n.size() == 40);
            for (const auto& ind : n) {
                CHECK(ind.chromosome.genes.size() == 12);
                CHECK_FALSE(ind.fitness.has_value());
            }
        }
    }
    SUBCASE("elitism keeps the best verbatim, tournament replaces it") {
        c.selection = Selection::Elitism;
        const Population e = next_generation(p, c, kSpec, rng);
        for (int i = 0; i < 10; ++i) {
            CHECK(e[i].chromosome == p[39 - i].chromosome);
        }
        c.selection = Selection::Tournament;
        c.mutation_prob = 1.0;
        const Population t = next_generation(p, c, kSpec, rng);
        CHECK(std::none_of(t.begin(), t.end(),
                           [&](const Individual& i) { return i.chromosome == best; }));
    }
    SUBCASE("missing fitness is rejected") {
        Population bad = p;
        bad[3].fitness.reset();
        CHECK_THROWS_AS(next_generation(bad, c, kSpec, rng), std::invalid_argument);
    }
    SUBCASE("deterministic given rng state") {
        Rng r1(50), r2(50);
        const Population a = next_generation(p, c, kSpec, r1);
        const Population b = next_generation(p, c, kSpec, r2);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].chromosome == b[i].chromosome);
    }
}

TEST_CASE("parallel evaluation matches the serial reference") {
    EvolutionConfig c;
    c.population_size = 64;
    c.master_seed = 3;
    const Population base = init_population(c, kSpec);
    const Evaluator noisy = [](const Chromosome& ch, std::uint64_t seed) {
        Rng r(seed);
        return Evaluation{ch.genes[0] + std::uniform_real_distribution<double>(0, 1)(r), false};
    };
    Population serial = base;
    evaluate_population_serial(serial, noisy, 2, 3);
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        Population par = base;
        evaluate_population(par, noisy, 2, 3);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(par[i].fitness == serial[i].fitness);
            CHECK(par[i].eval_seed == serial[i].eval_seed);
            CHECK(par[i].eval_seed == derive_seed(3, 2, i));
        }
    }
    omp_set_num_threads(1);
}

TEST_CASE("evaluation errors carry generation and index") {
    Population p = init_population(EvolutionConfig{}, kSpec);
    const Evaluator failing = [](const Chromosome& ch, std::uint64_t) -> Evaluation {
        if (ch.genes[0] > 0.9) throw std::runtime_error("boom");
        return {0.0, false};
    };
    std::size_t first = 0;
    while (!(p[first].chromosome.genes[0] > 0.9)) ++first;
    try {
        evaluate_population(p, failing, 7, 0);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.generation() == 7);
        CHECK(e.index() == first);
    }
}

TEST_CASE("evolve") {
    EvolutionConfig c;
    c.population_size = 100;
    c.max_generations = 50;
    c.master_seed = 1;
    SUBCASE("constant evaluator") {
        c.max_generations = 5;
        const auto h = evolve(c, kSpec, [](const Chromosome&, std::uint64_t) {
            return Evaluation{3.0, false};
        });
        REQUIRE(h.size() == 5);
        for (const auto& s : h) {
            CHECK(s.best_fitness == 3.0);
            CHECK(s.mean_fitness == 3.0);
        }
        CHECK(h.front().generation == 1);
        CHECK_FALSE(generations_to_solve(h));
    }
    SUBCASE("negative sphere improves") {
        for (auto s : {Selection::Tournament, Selection::Elitism, Selection::Roulette}) {
            c.selection = s;
            const auto h = evolve(c, kSpec, neg_sphere);
            REQUIRE(h.size() == 50);
            double best_so_far = h.front().best_fitness;
            for (const auto& g : h) {
                best_so_far = std::max(best_so_far, g.best_fitness);
                CHECK(g.best_fitness >= g.mean_fitness);
            }
            CHECK(best_so_far > h.front().best_fitness);
            if (s == Selection::Elitism) {
                for (std::size_t i = 1; i < h.size(); ++i) {
                    CHECK(h[i].best_fitness >= h[i - 1].best_fitness);
                }
            }
        }
    }
    SUBCASE("stops at the first solving generation") {
        const auto h = evolve(c, kSpec, [](const Chromosome& ch, std::uint64_t) {
            return Evaluation{ch.genes[0], ch.genes[0] > 0.99};
        });
        REQUIRE(generations_to_solve(h));
        CHECK(h.back().solved);
        CHECK(h.back().winning_individual.has_value());
        CHECK(static_cast<int>(h.size()) == *generations_to_solve(h));
    }
    SUBCASE("target fitness stops early") {
        c.target_fitness = -2.0;
        const auto h = evolve(c, kSpec, neg_sphere);
        CHECK(h.back().best_fitness >= -2.0);
        CHECK(h.size() < 50);
    }
    SUBCASE("reruns reproduce the history") {
        c.max_generations = 10;
        const auto a = evolve(c, kSpec, neg_sphere);
        const auto b = evolve(c, kSpec, neg_sphere);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].best_fitness == b[i].best_fitness);
            CHECK(a[i].mean_fitness == b[i].mean_fitness);
            CHECK(a[i].best_individual == b[i].best_individual);
        }
    }
    SUBCASE("symmetric genomes keep their length") {
        const NetworkSpec spec{{7, 6, 2}, true};
        c.max_generations = 3;
        const auto h = evolve(c, spec, neg_sphere);
        for (const auto& g : h) CHECK(g.best_individual.genes.size() == genome_length(spec));
    }
}
