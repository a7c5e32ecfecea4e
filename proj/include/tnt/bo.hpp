#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnt/gp.hpp"
#include "tnt/problems.hpp"
#include "tnt/rng.hpp"
#include "tnt/search_space.hpp"

namespace tnt {

struct Evaluation {
    std::vector<double> x;
    double value = 0.0;
};

/// Full record of a sequential optimization run.
struct BoTrace {
    std::vector<Evaluation> evaluations;   ///< initial design first, then BO picks
    std::vector<double> incumbent_history; ///< best value after each evaluation
    std::vector<double> incumbent_x;
    double incumbent_value = 0.0;
    GpModel model;                         ///< final surrogate over all evaluations
    int iterations = 0;                    ///< acquisition-driven evaluations
    int initial_design_size = 0;
    bool aborted = false;
    std::string abort_reason;
};

struct BoOptions {
    int iterations = 100;
    std::uint64_t seed = 0;
    int acquisition_candidates = 1000;
    int refine_top = 5;
    int refine_steps = 50;
};

/// Closed-form expected improvement for minimization.
double expected_improvement(double mean, double std, double f_best);
double expected_improvement(const GpModel& model, const std::vector<double>& x, double f_best);

/// Latin hypercube design: n points, one per stratum along every dimension.
std::vector<std::vector<double>> latin_hypercube(const SearchSpace& space, int n, Rng& rng);

/// Runs the optimization loop: Latin-hypercube initial design of size
/// max(5, 2d), then `iterations` rounds of fit -> maximize EI -> evaluate.
/// A non-finite objective value aborts and returns the partial trace.
BoTrace run_bo(const Objective& objective, const BoOptions& opts);

} // namespace tnt
