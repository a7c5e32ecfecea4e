#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tnt/search_space.hpp"

namespace tnt {

struct KnownMinimum {
    std::vector<double> location;
    double value = 0.0;
};

/// A bounded black-box minimization problem. Evaluation rejects points
/// outside the domain with std::domain_error. Benchmark evaluators are pure
/// and thread-safe.
class Objective {
public:
    Objective(std::string name, SearchSpace space,
              std::function<double(const std::vector<double>&)> fn,
              std::vector<KnownMinimum> minima = {}, bool cheap_ground_truth = true);

    const std::string& name() const { return name_; }
    const SearchSpace& space() const { return space_; }
    const std::vector<KnownMinimum>& known_minima() const { return minima_; }
    /// false for objectives too expensive to sample densely (toy HPO)
    bool cheap_ground_truth() const { return cheap_ground_truth_; }

    double operator()(const std::vector<double>& x) const;

private:
    std::string name_;
    SearchSpace space_;
    std::function<double(const std::vector<double>&)> fn_;
    std::vector<KnownMinimum> minima_;
    bool cheap_ground_truth_;
};

// Benchmark evaluators. Each validates its canonical domain.
double eval_booth(const std::vector<double>& x);          // [-10,10]^2, min 0 at (1,3)
double eval_matyas(const std::vector<double>& x);         // [-10,10]^2, min 0 at (0,0)
double eval_himmelblau(const std::vector<double>& x);     // [-5,5]^2, four zeros
double eval_holder_table(const std::vector<double>& x);   // [-10,10]^2, four symmetric minima
double eval_cross_in_tray(const std::vector<double>& x);  // [-10,10]^2, four symmetric minima

/// Validation loss of a tiny two-layer network trained on a fixed synthetic
/// binary classification set. h = (log10 learning rate, hidden units, epochs,
/// batch fraction, log10 L2, momentum); deterministic in h.
double eval_toy_hpo(const std::vector<double>& h);

/// problem registry
Objective make_objective(const std::string& name);  // throws ConfigError for unknown names
std::vector<std::string> problem_names();

} // namespace tnt
