#pragma once

#include <cstdint>
#include <string>

#include "tnt/linkage.hpp"
#include "tnt/rules.hpp"

namespace tnt {

enum class PruningKind { Variance, Distance };
enum class TuneMode { Fixed, Scalar, Pareto };

PruningKind pruning_from_string(const std::string& s);
TuneMode tune_mode_from_string(const std::string& s);
std::string to_string(PruningKind p);
std::string to_string(TuneMode m);

/// Full run configuration. Negative numeric fields mean "use the problem's
/// default", filled in by apply_problem_defaults.
struct RunConfig {
    std::string problem = "booth";
    std::uint64_t seed = 0;

    int bo_iterations = -1;
    int explanation_samples = -1;
    double t_s = -1.0;
    double t_alpha = -1.0;
    double t_dist = -1.0;  ///< distance-pruning cut; -1 = pick by grid scan of mean interestingness

    LinkageMethod linkage = LinkageMethod::Ward;
    DistanceMetric distance = DistanceMetric::Mahalanobis;
    PruningKind pruning = PruningKind::Variance;
    TuneMode tune_mode = TuneMode::Fixed;

    int min_cluster_size = 5;
    Weights weights;
    int fidelity_samples = 300;
    int nsga_generations = 25;
    int nsga_population = 20;

    void validate() const;
};

/// Fills every negative field from the per-problem defaults table
/// (booth: 100 iterations / 200 samples / t_s 0.1; matyas: 100/200/0.001;
/// himmelblau: 200/400/0.05; holder: 800/1600/0.002; cross: 800/1600/2e-6;
/// toy-hpo: 60/500/0.7 with retention threshold 0.7). t_alpha defaults to 0.4
/// elsewhere.
void apply_problem_defaults(RunConfig& config);

/// key = value file, '#' comments. Unknown keys are rejected.
RunConfig load_config(const std::string& path);

/// Applies one "key=value" override (same keys as the config file).
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

} // namespace tnt
