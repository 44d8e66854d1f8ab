#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "dispatchopt/domain.hpp"
#include "dispatchopt/random.hpp"
#include "dispatchopt/stats.hpp"

namespace dispatchopt {

struct GaParams {
    int population_size = 100;
    int generations = 1000;
    double crossover_probability = 1.0;
    double mutation_probability = 0.2;
    int tournament_size = 3;
    double gaussian_sigma = 10.0;
};

/// Throws std::invalid_argument when a parameter is out of range.
void validate_ga_params(const GaParams& params);

struct FitnessRecord {
    double fitness = 0.0;     // TC / max(FR, 0.01)
    double total_cost = 0.0;
    double fill_rate = 0.0;
    int replicates = 0;
    bool precise = true;
};

inline constexpr double kFillRateFloor = 0.01;

FitnessRecord make_fitness(double total_cost, double fill_rate, int replicates = 1,
                           bool precise = true);

struct Individual {
    Chromosome chromosome;
    FitnessRecord record;
};

struct Population {
    std::vector<Individual> members;
    Individual global_best;

    std::size_t best_index() const;
    std::size_t worst_index() const;  // first member with the largest fitness
};

/// Genes -> fitness. The seed identifies the evaluation so noisy evaluators stay
/// reproducible.
using FitnessFunction = std::function<FitnessRecord(const std::vector<int>& genes,
                                                    std::uint64_t seed)>;

/// Each gene uniform over its grid {lower, lower + step, ..., grid_max}.
Chromosome random_chromosome(const DecisionBounds& bounds, RandomStream& rng);

/// N random chromosomes, not yet evaluated.
std::vector<Chromosome> init_population(const DecisionBounds& bounds, int size,
                                        RandomStream& rng);

/// Samples k distinct members and returns the index of the lowest fitness;
/// ties go to the lower index. Throws std::invalid_argument when size < k.
std::size_t tournament_select(const std::vector<Individual>& members, int k,
                              RandomStream& rng);

/// round(v1 * alpha + v2 * (1 - alpha)), then clamped onto the variable's grid.
int linear_crossover(int v1, int v2, double alpha, const VariableBounds& bounds);

/// alpha > 0.5 keeps the first parent's threshold, otherwise the second's.
inline int uniform_crossover_gene(int m1, int m2, double alpha) { return alpha > 0.5 ? m1 : m2; }

/// Linear crossover on r, Q and interval genes, uniform crossover on thresholds,
/// one alpha drawn per gene. With probability 1 - crossover_probability the
/// first parent is copied instead.
Chromosome crossover(const Chromosome& first, const Chromosome& second,
                     const DecisionBounds& bounds, double crossover_probability,
                     RandomStream& rng);

int gaussian_mutation(int value, double draw, const VariableBounds& bounds);
int step_mutation(int value, bool increment, const VariableBounds& bounds);

/// Each gene mutates with probability pm: r and Q by a rounded Normal(0, sigma)
/// draw, intervals by +-1 day, thresholds by +-one step (its order size).
void mutate(Chromosome& chromosome, double pm, double sigma, const DecisionBounds& bounds,
            RandomStream& rng);

/// Unconditionally swaps the worst member for the offspring and refreshes the
/// global best.
void replace_worst(Population& population, Individual offspring);

struct GenerationLog {
    int generation = 0;
    double best_fitness = 0.0;   // global best so far
    double worst_fitness = 0.0;  // current population
    double spread = 0.0;         // worst - best within the current population
};

struct GaResult {
    Individual best;
    std::vector<GenerationLog> log;  // generation 0 is the initial population
    long evaluations = 0;            // distinct chromosomes evaluated
};

/// Steady-state GA: one offspring per generation replaces the current worst.
/// Genes already evaluated during the run reuse their cached fitness.
GaResult run_ssga(const DecisionBounds& bounds, const GaParams& params,
                  const FitnessFunction& fitness, std::uint64_t seed);

/// Mean TC and FR over replications of the simulator, replicate count chosen by
/// run_until_precise on total cost.
FitnessRecord evaluate_policy(const NetworkConfig& config, const Scenario& scenario,
                              const PolicyParams& policy, const PrecisionPolicy& precision,
                              std::uint64_t seed);

FitnessFunction simulation_fitness(const NetworkConfig& config, const Scenario& scenario,
                                   const PrecisionPolicy& precision);

GaResult run_ssga(const Scenario& scenario, const NetworkConfig& config, const GaParams& params,
                  const PrecisionPolicy& precision, std::uint64_t seed);

void write_convergence_csv(std::ostream& out, const std::vector<GenerationLog>& log);

}  // namespace dispatchopt
