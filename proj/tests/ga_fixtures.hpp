#pragma once

#include <cstdint>
#include <vector>

#include "dispatchopt/ssga.hpp"

namespace dispatchopt::testing {

/// r in [50, 300], Q in [200, 1000], unit steps: the r/Q part of every scenario.
inline DecisionBounds rq_bounds() {
    return {{"r", VariableKind::ReorderPoint, 50, 300, 1},
            {"Q", VariableKind::ReorderQuantity, 200, 1000, 1}};
}

/// Deterministic bowl with its minimum at (100, 500); fill rate fixed at 1.
inline FitnessRecord quadratic_fitness(const std::vector<int>& genes, std::uint64_t) {
    const double dr = genes[0] - 100.0;
    const double dq = genes[1] - 500.0;
    return make_fitness(dr * dr + dq * dq, 1.0);
}

/// Brute-force minimiser of quadratic_fitness over rq_bounds().
inline std::vector<int> quadratic_grid_minimum() {
    const auto bounds = rq_bounds();
    std::vector<int> best;
    double best_f = 0.0;
    for (int r = bounds[0].lower; r <= bounds[0].upper; ++r) {
        for (int q = bounds[1].lower; q <= bounds[1].upper; ++q) {
            const double f = quadratic_fitness({r, q}, 0).fitness;
            if (best.empty() || f < best_f) {
                best = {r, q};
                best_f = f;
            }
        }
    }
    return best;
}

/// Probability that the member with the (rank)-th smallest of n distinct
/// fitness values wins a k = 3 tournament drawn without replacement:
/// it must be drawn and the other two must come from the n - 1 - rank worse ones.
inline double tournament_win_probability(int rank, int n) {
    const double worse = n - 1 - rank;
    const double pairs = worse * (worse - 1) / 2.0;
    const double triples = double(n) * (n - 1) * (n - 2) / 6.0;
    return pairs / triples;
}

inline std::vector<Individual> population_with_fitness(const std::vector<double>& values) {
    std::vector<Individual> members;
    for (double f : values) {
        Individual ind;
        ind.record = make_fitness(f, 1.0);
        members.push_back(ind);
    }
    return members;
}

}  // namespace dispatchopt::testing
