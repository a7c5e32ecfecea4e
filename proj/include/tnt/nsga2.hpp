#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace tnt {

struct Nsga2Options {
    int population = 20;    ///< even, at least 4
    int generations = 25;
    std::uint64_t seed = 0;
    double crossover_prob = 0.9;
    double crossover_eta = 15.0;   ///< SBX distribution index
    double mutation_eta = 20.0;    ///< polynomial-mutation distribution index
    double mutation_rate = -1.0;   ///< per-gene probability; default 1/n_genes
};

struct Nsga2Individual {
    std::vector<double> genes;
    std::vector<double> objectives;  ///< all maximized
    int rank = 0;                    ///< 0 = non-dominated
    double crowding = 0.0;
};

/// True when a is at least as good as b on every objective and strictly
/// better on one (maximization).
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

/// Fast non-dominated sort; returns fronts of indices, best first.
std::vector<std::vector<int>> non_dominated_sort(
    const std::vector<std::vector<double>>& objectives);

/// Crowding distance of each member of one front (index-aligned with `front`).
std::vector<double> crowding_distances(const std::vector<std::vector<double>>& objectives,
                                       const std::vector<int>& front);

/// Runs NSGA-II over a box-bounded gene vector, maximizing every objective
/// returned by `evaluate`. Returns the final population's first front.
std::vector<Nsga2Individual> nsga2_maximize(
    const std::function<std::vector<double>(const std::vector<double>&)>& evaluate,
    const std::vector<double>& lower, const std::vector<double>& upper,
    const Nsga2Options& opts);

} // namespace tnt
