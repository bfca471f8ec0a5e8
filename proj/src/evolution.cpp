#include "symnav/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

namespace symnav {

std::string_view to_string(Selection s) {
    switch (s) {
        case Selection::Tournament: return "Tournament";
        case Selection::Elitism: return "Elitism";
        case Selection::Roulette: return "Roulette";
    }
    return "?";
}

Selection selection_from_string(std::string_view text) {
    if (text == "Tournament" || text == "tournament") return Selection::Tournament;
    if (text == "Elitism" || text == "elitism") return Selection::Elitism;
    if (text == "Roulette" || text == "roulette") return Selection::Roulette;
    throw std::invalid_argument("unknown selection '" + std::string(text) + "'");
}

std::string_view to_string(MutationMode m) {
    return m == MutationMode::PerGene ? "per_gene" : "per_chromosome";
}

MutationMode mutation_mode_from_string(std::string_view text) {
    if (text == "per_chromosome") return MutationMode::PerChromosome;
    if (text == "per_gene") return MutationMode::PerGene;
    throw std::invalid_argument("unknown mutation_mode '" + std::string(text) + "'");
}

void EvolutionConfig::validate() const {
    auto probability = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string("evolution.") + name + " must be in [0, 1]");
        }
    };
    probability(mutation_prob, "mutation_prob");
    probability(crossover_prob, "crossover_prob");
    if (population_size < 2 || population_size % 2 != 0) {
        throw std::invalid_argument("evolution.population_size must be even and >= 2");
    }
    if (selection_group < 2 || selection_group > population_size) {
        throw std::invalid_argument(
            "evolution.selection_group must be in [2, population_size]");
    }
    if (!(init_weight_range > 0.0)) {
        throw std::invalid_argument("evolution.init_weight_range must be positive");
    }
    if (!(crossover_site_std >= 0.0)) {
        throw std::invalid_argument("evolution.crossover_site_std must be non-negative");
    }
    if (max_generations < 1) {
        throw std::invalid_argument("evolution.max_generations must be >= 1");
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master) ^ a) ^ b);
}

Chromosome random_chromosome(const NetworkSpec& spec, double range, Rng& rng) {
    std::uniform_real_distribution<double> gene(-range, range);
    Chromosome c;
    c.spec = spec;
    c.genes.resize(genome_length(spec));
    for (double& g : c.genes) {
        g = gene(rng);
    }
    return c;
}

Population init_population(const EvolutionConfig& config, const NetworkSpec& spec, Rng& rng) {
    Population pop(static_cast<std::size_t>(config.population_size));
    for (Individual& ind : pop) {
        ind.chromosome = random_chromosome(spec, config.init_weight_range, rng);
    }
    return pop;
}

Population init_population(const EvolutionConfig& config, const NetworkSpec& spec) {
    Rng rng(config.master_seed);
    return init_population(config, spec, rng);
}

std::size_t crossover_site(double fraction, std::size_t length) {
    const double s = std::clamp(fraction, 0.0, 1.0);
    return static_cast<std::size_t>(std::llround(s * static_cast<double>(length)));
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t site) {
    if (a.genes.size() != b.genes.size()) {
        throw std::invalid_argument("crossover parents differ in genome length");
    }
    Chromosome ca = a;
    Chromosome cb = b;
    for (std::size_t i = std::min(site, a.genes.size()); i < a.genes.size(); ++i) {
        std::swap(ca.genes[i], cb.genes[i]);
    }
    return {std::move(ca), std::move(cb)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            const EvolutionConfig& config, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) >= config.crossover_prob) {
        return {a, b};
    }
    double fraction = config.crossover_site_mean;
    if (config.crossover_site_std > 0.0) {
        fraction = std::normal_distribution<double>(config.crossover_site_mean,
                                                    config.crossover_site_std)(rng);
    }
    return crossover_at(a, b, crossover_site(fraction, a.genes.size()));
}

void mutate(Chromosome& chromosome, const EvolutionConfig& config, Rng& rng) {
    if (chromosome.genes.empty()) {
        return;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> gene(-config.init_weight_range,
                                                config.init_weight_range);
    if (config.mutation_mode == MutationMode::PerGene) {
        for (double& g : chromosome.genes) {
            if (unit(rng) < config.mutation_prob) {
                g = gene(rng);
            }
        }
        return;
    }
    if (unit(rng) < config.mutation_prob) {
        std::uniform_int_distribution<std::size_t> index(0, chromosome.genes.size() - 1);
        const std::size_t i = index(rng);
        chromosome.genes[i] = gene(rng);
    }
}

std::vector<std::size_t> rank_by_fitness(const Population& population) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *population[a].fitness > *population[b].fitness;
    });
    return order;
}

std::size_t roulette_pick(std::span<const double> fitness, Rng& rng) {
    constexpr double kFloor = 1e-9;
    double total = 0.0;
    for (double f : fitness) {
        total += std::max(f, kFloor);
    }
    double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        r -= std::max(fitness[i], kFloor);
        if (r < 0.0) {
            return i;
        }
    }
    return fitness.size() - 1;
}

namespace {

Individual fresh(Chromosome c) {
    Individual ind;
    ind.chromosome = std::move(c);
    return ind;
}

// Adjacent pairs of the ranked group, (0,1), (2,3), ..., wrapping around the
// group until `quota` children exist.
std::vector<Individual> breed_group(const Population& population,
                                    std::span<const std::size_t> group, std::size_t quota,
                                    const EvolutionConfig& config, Rng& rng) {
    std::vector<Individual> children;
    const std::size_t g = group.size();
    for (std::size_t p = 0; children.size() < quota; ++p) {
        const auto& a = population[group[(2 * p) % g]].chromosome;
        const auto& b = population[group[(2 * p + 1) % g]].chromosome;
        auto [ca, cb] = crossover(a, b, config, rng);
        mutate(ca, config, rng);
        mutate(cb, config, rng);
        children.push_back(fresh(std::move(ca)));
        if (children.size() < quota) {
            children.push_back(fresh(std::move(cb)));
        }
    }
    return children;
}

}  // namespace

Population next_generation(const Population& population, const EvolutionConfig& config,
                           const NetworkSpec& spec, Rng& rng) {
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!population[i].fitness) {
            throw std::invalid_argument("individual " + std::to_string(i) + " has no fitness");
        }
    }
    const auto size = static_cast<std::size_t>(config.population_size);
    Population next;
    next.reserve(size);

    if (config.selection == Selection::Roulette) {
        std::vector<double> fitness(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) {
            fitness[i] = *population[i].fitness;
        }
        while (next.size() < size) {
            const auto& a = population[roulette_pick(fitness, rng)].chromosome;
            const auto& b = population[roulette_pick(fitness, rng)].chromosome;
            auto [ca, cb] = crossover(a, b, config, rng);
            mutate(ca, config, rng);
            mutate(cb, config, rng);
            next.push_back(fresh(std::move(ca)));
            if (next.size() < size) {
                next.push_back(fresh(std::move(cb)));
            }
        }
        return next;
    }

    const auto ranked = rank_by_fitness(population);
    const std::size_t group_size =
        std::min(static_cast<std::size_t>(config.selection_group), ranked.size());
    const std::span<const std::size_t> group(ranked.data(), group_size);

    if (config.selection == Selection::Elitism) {
        for (std::size_t idx : group) {
            next.push_back(fresh(population[idx].chromosome));
        }
    }
    for (Individual& child : breed_group(population, group, group_size, config, rng)) {
        if (next.size() < size) {
            next.push_back(std::move(child));
        }
    }
    while (next.size() < size) {
        next.push_back(fresh(random_chromosome(spec, config.init_weight_range, rng)));
    }
    return next;
}

namespace {

void evaluate_one(Individual& ind, const Evaluator& evaluator, int generation, std::size_t index,
                  std::uint64_t master_seed) {
    ind.eval_seed = derive_seed(master_seed, static_cast<std::uint64_t>(generation), index);
    const Evaluation e = evaluator(ind.chromosome, ind.eval_seed);
    if (!std::isfinite(e.fitness)) {
        throw std::runtime_error("evaluator returned a non-finite fitness");
    }
    ind.fitness = e.fitness;
    ind.solved = e.solved;
}

}  // namespace

void evaluate_population_serial(Population& population, const Evaluator& evaluator,
                                int generation, std::uint64_t master_seed) {
    for (std::size_t i = 0; i < population.size(); ++i) {
        try {
            evaluate_one(population[i], evaluator, generation, i, master_seed);
        } catch (const std::exception& e) {
            throw EvaluationError(generation, i, e.what());
        }
    }
}

void evaluate_population(Population& population, const Evaluator& evaluator, int generation,
                         std::uint64_t master_seed) {
    const auto n = static_cast<std::ptrdiff_t>(population.size());
    std::vector<std::string> errors(population.size());
    std::vector<char> failed(population.size(), 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            evaluate_one(population[idx], evaluator, generation, idx, master_seed);
        } catch (const std::exception& e) {
            failed[idx] = 1;
            errors[idx] = e.what();
        } catch (...) {
            failed[idx] = 1;
            errors[idx] = "unknown error";
        }
    }

    for (std::size_t i = 0; i < population.size(); ++i) {
        if (failed[i]) {
            throw EvaluationError(generation, i, errors[i]);
        }
    }
}

GenerationStats summarize(const Population& population, int generation) {
    GenerationStats stats;
    stats.generation = generation;
    std::size_t best = 0;
    std::optional<std::size_t> winner;
    double sum = 0.0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        const double f = *population[i].fitness;
        sum += f;
        if (f > *population[best].fitness) {
            best = i;
        }
        if (population[i].solved && (!winner || f > *population[*winner].fitness)) {
            winner = i;
        }
    }
    stats.solved = winner.has_value();
    if (winner) {
        stats.winning_individual = population[*winner].chromosome;
    }
    stats.best_fitness = *population[best].fitness;
    stats.mean_fitness = sum / static_cast<double>(population.size());
    stats.best_individual = population[best].chromosome;
    return stats;
}

std::vector<GenerationStats> evolve(const EvolutionConfig& config, const NetworkSpec& spec,
                                    const Evaluator& evaluator,
                                    const GenerationCallback& on_generation) {
    config.validate();
    spec.validate();
    Rng rng(config.master_seed);
    Population population = init_population(config, spec, rng);
    std::vector<GenerationStats> history;

    for (int generation = 1; generation <= config.max_generations; ++generation) {
        evaluate_population(population, evaluator, generation, config.master_seed);
        history.push_back(summarize(population, generation));
        const GenerationStats& stats = history.back();
        if (on_generation) {
            on_generation(stats);
        }
        if ((config.stop_on_solved && stats.solved) ||
            (config.target_fitness && stats.best_fitness >= *config.target_fitness)) {
            break;
        }
        if (generation < config.max_generations) {
            population = next_generation(population, config, spec, rng);
        }
    }
    return history;
}

std::optional<int> generations_to_solve(std::span<const GenerationStats> history) {
    for (const GenerationStats& s : history) {
        if (s.solved) {
            return s.generation;
        }
    }
    return std::nullopt;
}

}  // namespace symnav
