#pragma once

#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/linkage.hpp"

namespace tnt {

/// Flat clusters cut out of a linkage tree. Leaves not covered by any kept
/// cluster were either singletons or fell below the minimum cluster size.
struct Clustering {
    std::vector<std::vector<int>> clusters;  ///< leaf indices, each sorted
    double threshold_used = 0.0;
    int discarded_leaves = 0;
};

inline constexpr int kDefaultMinClusterSize = 5;

/// Population variance of the normalized posterior mean over a set of leaves.
double normalized_cluster_variance(const std::vector<double>& mean_normalized,
                                   const std::vector<int>& leaves);

/// Cuts the tree top-down: a subtree whose target variance is at most t_s
/// times the whole dataset's variance becomes one cluster, otherwise both
/// children are visited. Clusters smaller than min_cluster_size are discarded.
Clustering variance_prune(const LinkageTree& tree, const ExplanationDataset& dataset, double t_s,
                          int min_cluster_size = kDefaultMinClusterSize);

/// Conventional dendrogram cut: a subtree all of whose internal merges lie at
/// distance <= t_dist becomes one cluster.
Clustering distance_prune(const LinkageTree& tree, double t_dist,
                          int min_cluster_size = kDefaultMinClusterSize);

} // namespace tnt
