#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnt/gp.hpp"
#include "tnt/search_space.hpp"

namespace tnt {

/// Uniform samples of the search space joined with the surrogate's posterior:
/// the substrate all clustering and rule construction operate on.
struct ExplanationDataset {
    std::vector<std::vector<double>> inputs;  ///< N_e x d, inside the space
    std::vector<double> mean;                 ///< posterior mean per row
    std::vector<double> std;                  ///< posterior std per row
    std::vector<double> mean_normalized;      ///< min-max of mean into [0,1]
    SearchSpace space;

    std::size_t size() const { return inputs.size(); }
    std::size_t dims() const { return space.dims(); }
};

/// Samples n points uniformly and annotates them with the model's posterior.
ExplanationDataset generate_dataset(const GpModel& model, const SearchSpace& space, int n,
                                    std::uint64_t seed);

/// Builds a dataset from direct objective values (mean := value, std := 0),
/// used when explanations are computed on ground truth instead of a surrogate.
ExplanationDataset dataset_from_values(std::vector<std::vector<double>> inputs,
                                       std::vector<double> values, SearchSpace space);

/// Feature rows used for clustering: inputs rescaled to the unit box, joined
/// with normalized mean and std (std scaled by its max). `inputs_only` drops
/// the posterior columns for comparison runs.
std::vector<std::vector<double>> clustering_features(const ExplanationDataset& dataset,
                                                     bool inputs_only = false);

void write_dataset_csv(const ExplanationDataset& dataset, const std::string& path);
ExplanationDataset read_dataset_csv(const std::string& path, SearchSpace space);

} // namespace tnt
