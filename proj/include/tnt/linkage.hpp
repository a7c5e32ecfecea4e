#pragma once

#include <string>
#include <vector>

#include "tnt/dataset.hpp"

namespace tnt {

enum class LinkageMethod { Ward, Complete, Average, Single, Weighted, Centroid, Median };
enum class DistanceMetric { Euclidean, Mahalanobis };

LinkageMethod linkage_from_string(const std::string& s);
DistanceMetric distance_from_string(const std::string& s);
std::string to_string(LinkageMethod m);
std::string to_string(DistanceMetric m);

/// One agglomeration step. Cluster ids follow the usual convention: leaves are
/// 0..n-1 and the merge recorded in row i creates cluster n+i.
struct MergeStep {
    int left = 0;
    int right = 0;
    double distance = 0.0;
    int size = 0;  ///< leaves under the new cluster
};

struct LinkageTree {
    std::vector<MergeStep> merges;  ///< n-1 rows
    int leaf_count = 0;

    int root_id() const { return 2 * leaf_count - 2; }
    /// Leaf indices under a cluster id (a single leaf for id < leaf_count).
    std::vector<int> leaves_of(int cluster_id) const;
};

/// Agglomerates the given feature rows bottom-up, always merging the current
/// closest pair, with cluster-to-cluster distances maintained by the
/// Lance-Williams recurrences. Mahalanobis whitens the features by the
/// Cholesky factor of their sample covariance (diagonal jitter 1e-8) and then
/// proceeds exactly like the euclidean case.
LinkageTree agglomerate(const std::vector<std::vector<double>>& features, LinkageMethod method,
                        DistanceMetric metric);

/// Clusters the explanation dataset's feature rows (inputs + posterior blocks).
LinkageTree build_linkage(const ExplanationDataset& dataset, LinkageMethod method,
                          DistanceMetric metric);

void write_linkage_csv(const LinkageTree& tree, const std::string& path);

} // namespace tnt
