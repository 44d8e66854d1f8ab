#include "dispatchopt/ssga.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>

#include "dispatchopt/simulation.hpp"

namespace dispatchopt {

void validate_ga_params(const GaParams& params) {
    if (params.population_size < 2) throw std::invalid_argument("population size must be >= 2");
    if (params.generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (!(params.crossover_probability >= 0 && params.crossover_probability <= 1)) {
        throw std::invalid_argument("crossover probability must lie in [0, 1]");
    }
    if (!(params.mutation_probability >= 0 && params.mutation_probability <= 1)) {
        throw std::invalid_argument("mutation probability must lie in [0, 1]");
    }
    if (params.tournament_size < 2) throw std::invalid_argument("tournament size must be >= 2");
    if (params.tournament_size > params.population_size) {
        throw std::invalid_argument("tournament size exceeds population size");
    }
    if (!(params.gaussian_sigma >= 0)) throw std::invalid_argument("sigma must be >= 0");
}

FitnessRecord make_fitness(double total_cost, double fill_rate, int replicates, bool precise) {
    return {total_cost / std::max(fill_rate, kFillRateFloor), total_cost, fill_rate, replicates,
            precise};
}

std::size_t Population::best_index() const {
    if (members.empty()) throw std::logic_error("empty population");
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i].record.fitness < members[best].record.fitness) best = i;
    }
    return best;
}

std::size_t Population::worst_index() const {
    if (members.empty()) throw std::logic_error("empty population");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i].record.fitness > members[worst].record.fitness) worst = i;
    }
    return worst;
}

Chromosome random_chromosome(const DecisionBounds& bounds, RandomStream& rng) {
    Chromosome chromosome;
    chromosome.genes.reserve(bounds.size());
    for (const auto& b : bounds) {
        const auto k = rng.uniform_int(0, b.grid_size() - 1);
        chromosome.genes.push_back(b.lower + static_cast<int>(k) * b.step);
    }
    return chromosome;
}

std::vector<Chromosome> init_population(const DecisionBounds& bounds, int size,
                                        RandomStream& rng) {
    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) population.push_back(random_chromosome(bounds, rng));
    return population;
}

std::size_t tournament_select(const std::vector<Individual>& members, int k,
                              RandomStream& rng) {
    if (k < 1 || members.size() < static_cast<std::size_t>(k)) {
        throw std::invalid_argument("tournament needs at least k members");
    }
    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(k));
    const auto last = static_cast<std::int64_t>(members.size()) - 1;
    while (picked.size() < static_cast<std::size_t>(k)) {
        const auto i = static_cast<std::size_t>(rng.uniform_int(0, last));
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }
    std::size_t winner = picked.front();
    for (std::size_t i : picked) {
        const double fi = members[i].record.fitness;
        const double fw = members[winner].record.fitness;
        if (fi < fw || (fi == fw && i < winner)) winner = i;
    }
    return winner;
}

int linear_crossover(int v1, int v2, double alpha, const VariableBounds& bounds) {
    const double mixed = v1 * alpha + v2 * (1.0 - alpha);
    return bounds.clamp(static_cast<int>(std::lround(mixed)));
}

Chromosome crossover(const Chromosome& first, const Chromosome& second,
                     const DecisionBounds& bounds, double crossover_probability,
                     RandomStream& rng) {
    if (first.genes.size() != bounds.size() || second.genes.size() != bounds.size()) {
        throw std::invalid_argument("crossover: chromosome length does not match bounds");
    }
    Chromosome child;
    if (crossover_probability < 1.0 && rng.uniform01() >= crossover_probability) {
        child.genes = first.genes;
        return child;
    }
    child.genes.resize(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double alpha = rng.uniform01();
        child.genes[i] = bounds[i].kind == VariableKind::Threshold
                             ? uniform_crossover_gene(first.genes[i], second.genes[i], alpha)
                             : linear_crossover(first.genes[i], second.genes[i], alpha, bounds[i]);
    }
    return child;
}

int gaussian_mutation(int value, double draw, const VariableBounds& bounds) {
    return bounds.clamp(value + static_cast<int>(std::lround(draw)));
}

int step_mutation(int value, bool increment, const VariableBounds& bounds) {
    return bounds.clamp(increment ? value + bounds.step : value - bounds.step);
}

void mutate(Chromosome& chromosome, double pm, double sigma, const DecisionBounds& bounds,
            RandomStream& rng) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(rng.uniform01() < pm)) continue;
        auto& gene = chromosome.genes[i];
        switch (bounds[i].kind) {
        case VariableKind::ReorderPoint:
        case VariableKind::ReorderQuantity:
            gene = gaussian_mutation(gene, rng.normal(0.0, sigma), bounds[i]);
            break;
        case VariableKind::Interval:
        case VariableKind::Threshold:
            gene = step_mutation(gene, rng.coin(), bounds[i]);
            break;
        }
    }
    chromosome.fitness.reset();
}

void replace_worst(Population& population, Individual offspring) {
    if (population.members.empty()) throw std::logic_error("replace_worst: empty population");
    const bool improves = offspring.record.fitness < population.global_best.record.fitness;
    if (improves) population.global_best = offspring;
    population.members[population.worst_index()] = std::move(offspring);
}

namespace {

constexpr std::uint64_t kOperatorStream = 0;
constexpr std::uint64_t kEvaluationStream = 1;

class CachedFitness {
public:
    CachedFitness(const FitnessFunction& fitness, std::uint64_t seed)
        : fitness_(fitness), seed_(derive_seed(seed, kEvaluationStream)) {}

    FitnessRecord operator()(const std::vector<int>& genes) {
        if (auto it = cache_.find(genes); it != cache_.end()) return it->second;
        const auto record = fitness_(genes, derive_seed(seed_, cache_.size()));
        cache_.emplace(genes, record);
        return record;
    }

    long evaluations() const { return static_cast<long>(cache_.size()); }

private:
    const FitnessFunction& fitness_;
    std::uint64_t seed_;
    std::map<std::vector<int>, FitnessRecord> cache_;
};

GenerationLog snapshot(const Population& population, int generation) {
    const double best = population.members[population.best_index()].record.fitness;
    const double worst = population.members[population.worst_index()].record.fitness;
    return {generation, population.global_best.record.fitness, worst, worst - best};
}

}  // namespace

GaResult run_ssga(const DecisionBounds& bounds, const GaParams& params,
                  const FitnessFunction& fitness, std::uint64_t seed) {
    validate_ga_params(params);
    RandomStream rng(seed, kOperatorStream);
    CachedFitness evaluate(fitness, seed);

    Population population;
    for (auto& chromosome : init_population(bounds, params.population_size, rng)) {
        const auto record = evaluate(chromosome.genes);
        chromosome.fitness = record.fitness;
        population.members.push_back({std::move(chromosome), record});
    }
    population.global_best = population.members[population.best_index()];

    GaResult result;
    result.log.reserve(static_cast<std::size_t>(params.generations) + 1);
    result.log.push_back(snapshot(population, 0));

    for (int g = 1; g <= params.generations; ++g) {
        const auto& p1 = population.members[tournament_select(population.members,
                                                              params.tournament_size, rng)];
        const auto& p2 = population.members[tournament_select(population.members,
                                                              params.tournament_size, rng)];
        Chromosome child = crossover(p1.chromosome, p2.chromosome, bounds,
                                     params.crossover_probability, rng);
        mutate(child, params.mutation_probability, params.gaussian_sigma, bounds, rng);
        if (!within_bounds(child.genes, bounds)) {
            throw std::logic_error("offspring left its decision bounds");
        }
        const auto record = evaluate(child.genes);
        child.fitness = record.fitness;
        replace_worst(population, {std::move(child), record});
        result.log.push_back(snapshot(population, g));
    }

    result.best = population.global_best;
    result.evaluations = evaluate.evaluations();
    return result;
}

FitnessRecord evaluate_policy(const NetworkConfig& config, const Scenario& scenario,
                              const PolicyParams& policy, const PrecisionPolicy& precision,
                              std::uint64_t seed) {
    std::vector<double> fill_rates;
    const auto summary = run_until_precise(
        [&](std::uint64_t replicate) {
            const auto result = run_replication(config, policy, scenario, replicate);
            fill_rates.push_back(result.fill_rate);
            return result.total_cost;
        },
        precision, seed);
    double fill_rate = 0.0;
    for (double fr : fill_rates) fill_rate += fr;
    fill_rate /= static_cast<double>(fill_rates.size());
    return make_fitness(summary.mean, fill_rate, summary.n, summary.precise);
}

FitnessFunction simulation_fitness(const NetworkConfig& config, const Scenario& scenario,
                                   const PrecisionPolicy& precision) {
    return [config, scenario, precision](const std::vector<int>& genes, std::uint64_t seed) {
        const auto policy = policy_from_genes(genes, scenario, config);
        return evaluate_policy(config, scenario, policy, precision, seed);
    };
}

GaResult run_ssga(const Scenario& scenario, const NetworkConfig& config, const GaParams& params,
                  const PrecisionPolicy& precision, std::uint64_t seed) {
    return run_ssga(bounds_for_scenario(scenario, config), params,
                    simulation_fitness(config, scenario, precision), seed);
}

void write_convergence_csv(std::ostream& out, const std::vector<GenerationLog>& log) {
    out << std::setprecision(12) << "generation,best_F,worst_F,spread\n";
    for (const auto& row : log) {
        out << row.generation << ',' << row.best_fitness << ',' << row.worst_fitness << ','
            << row.spread << '\n';
    }
}

}  // namespace dispatchopt
