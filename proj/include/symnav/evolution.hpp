#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symnav/network.hpp"

namespace symnav {

enum class Selection { Tournament, Elitism, Roulette };
enum class MutationMode { PerChromosome, PerGene };

std::string_view to_string(Selection s);
Selection selection_from_string(std::string_view text);
std::string_view to_string(MutationMode m);
MutationMode mutation_mode_from_string(std::string_view text);

struct EvolutionConfig {
    int population_size = 200;
    double mutation_prob = 0.1;
    MutationMode mutation_mode = MutationMode::PerChromosome;
    double crossover_prob = 1.0;
    double crossover_site_mean = 0.95;
    double crossover_site_std = 0.05;
    Selection selection = Selection::Tournament;
    int selection_group = 10;
    double init_weight_range = 1.0;
    int max_generations = 50;
    std::optional<double> target_fitness;
    bool stop_on_solved = true;
    std::uint64_t master_seed = 0;

    void validate() const;
};

using Rng = std::mt19937_64;

/// Result of evaluating one chromosome.
struct Evaluation {
    double fitness = 0.0;
    bool solved = false;
};

/// Must be deterministic per (chromosome, eval_seed) and safe to call
/// concurrently.
using Evaluator = std::function<Evaluation(const Chromosome&, std::uint64_t eval_seed)>;

struct Individual {
    Chromosome chromosome;
    std::optional<double> fitness;
    bool solved = false;
    std::uint64_t eval_seed = 0;
};

using Population = std::vector<Individual>;

struct GenerationStats {
    int generation = 0;  // 1-based; generation 1 is the initial population
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    Chromosome best_individual;
    bool solved = false;
    /// Fittest individual that solved, when any did; may differ from
    /// best_individual since fitness does not reward reaching the goal.
    std::optional<Chromosome> winning_individual;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(int generation, std::size_t index, const std::string& what)
        : std::runtime_error("generation " + std::to_string(generation) + ", individual " +
                             std::to_string(index) + ": " + what),
          generation_(generation),
          index_(index) {}
    int generation() const { return generation_; }
    std::size_t index() const { return index_; }

private:
    int generation_;
    std::size_t index_;
};

/// SplitMix64-style mixing of a master seed with two stream coordinates.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

Chromosome random_chromosome(const NetworkSpec& spec, double range, Rng& rng);

/// Uniform genes in [-init_weight_range, init_weight_range].
Population init_population(const EvolutionConfig& config, const NetworkSpec& spec, Rng& rng);
/// Same, drawn from a fresh stream seeded with config.master_seed.
Population init_population(const EvolutionConfig& config, const NetworkSpec& spec);

/// Cut point for a site fraction: round(clamp(s, 0, 1) * length).
std::size_t crossover_site(double fraction, std::size_t length);

/// Single-point exchange of the tails starting at `site`.
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               std::size_t site);

/// With probability crossover_prob, draws the site fraction from
/// Normal(crossover_site_mean, crossover_site_std) and exchanges tails;
/// otherwise returns copies.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            const EvolutionConfig& config, Rng& rng);

/// Per-chromosome mode: with probability mutation_prob one uniformly chosen
/// gene is redrawn. Per-gene mode: every gene is redrawn independently with
/// that probability.
void mutate(Chromosome& chromosome, const EvolutionConfig& config, Rng& rng);

/// Indices sorted by descending fitness; ties keep population order.
std::vector<std::size_t> rank_by_fitness(const Population& population);

/// Fitness-proportional pick with a 1e-9 floor per individual.
std::size_t roulette_pick(std::span<const double> fitness, Rng& rng);

/// Builds the next population from an evaluated one. Throws
/// std::invalid_argument if any individual lacks a fitness.
Population next_generation(const Population& population, const EvolutionConfig& config,
                           const NetworkSpec& spec, Rng& rng);

/// Fills fitness/solved/eval_seed for every individual, evaluating in
/// parallel with OpenMP. Results are independent of the thread count.
void evaluate_population(Population& population, const Evaluator& evaluator, int generation,
                         std::uint64_t master_seed);

/// Single-threaded reference for evaluate_population.
void evaluate_population_serial(Population& population, const Evaluator& evaluator,
                                int generation, std::uint64_t master_seed);

GenerationStats summarize(const Population& population, int generation);

using GenerationCallback = std::function<void(const GenerationStats&)>;

/// Evaluate, record, breed; stops at max_generations, at target_fitness, or
/// (with stop_on_solved) at the first generation containing a solver.
std::vector<GenerationStats> evolve(const EvolutionConfig& config, const NetworkSpec& spec,
                                    const Evaluator& evaluator,
                                    const GenerationCallback& on_generation = {});

/// 1-based generation of the first solved record, if any.
std::optional<int> generations_to_solve(std::span<const GenerationStats> history);

}  // namespace symnav
