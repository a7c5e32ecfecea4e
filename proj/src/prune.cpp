#include "tnt/prune.hpp"

#include <algorithm>
#include <cmath>

#include "tnt/errors.hpp"
#include "tnt/stats.hpp"

namespace tnt {

double normalized_cluster_variance(const std::vector<double>& mean_normalized,
                                   const std::vector<int>& leaves) {
    std::vector<double> values;
    values.reserve(leaves.size());
    for (int i : leaves) values.push_back(mean_normalized[static_cast<std::size_t>(i)]);
    return population_variance(values);
}

namespace {

struct NodeStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    int count = 0;

    double variance() const {
        const double m = sum / count;
        return std::max(sum_sq / count - m * m, 0.0);
    }
};

/// Per-node aggregates of mean_normalized, bottom-up over the merge rows.
std::vector<NodeStats> accumulate_stats(const LinkageTree& tree,
                                        const std::vector<double>& values) {
    const int n = tree.leaf_count;
    std::vector<NodeStats> stats(static_cast<std::size_t>(2 * n - 1));
    for (int i = 0; i < n; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        stats[static_cast<std::size_t>(i)] = {v, v * v, 1};
    }
    for (std::size_t m = 0; m < tree.merges.size(); ++m) {
        const NodeStats& a = stats[static_cast<std::size_t>(tree.merges[m].left)];
        const NodeStats& b = stats[static_cast<std::size_t>(tree.merges[m].right)];
        stats[static_cast<std::size_t>(n) + m] = {a.sum + b.sum, a.sum_sq + b.sum_sq,
                                                  a.count + b.count};
    }
    return stats;
}

template <typename AcceptNode>
Clustering cut_top_down(const LinkageTree& tree, double threshold, int min_cluster_size,
                        AcceptNode accept) {
    Clustering result;
    result.threshold_used = threshold;
    std::vector<int> stack{tree.root_id()};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (accept(id)) {
            std::vector<int> leaves = tree.leaves_of(id);
            if (static_cast<int>(leaves.size()) >= min_cluster_size) {
                result.clusters.push_back(std::move(leaves));
            } else {
                result.discarded_leaves += static_cast<int>(leaves.size());
            }
        } else {
            const MergeStep& m = tree.merges[static_cast<std::size_t>(id - tree.leaf_count)];
            stack.push_back(m.right);
            stack.push_back(m.left);
        }
    }
    return result;
}

} // namespace

Clustering variance_prune(const LinkageTree& tree, const ExplanationDataset& dataset, double t_s,
                          int min_cluster_size) {
    if (t_s < 0.0 || t_s > 1.0) throw ConfigError("variance threshold must lie in [0,1]");
    if (static_cast<int>(dataset.size()) != tree.leaf_count) {
        throw ConfigError("dataset size does not match the linkage tree's leaf count");
    }
    const std::vector<NodeStats> stats = accumulate_stats(tree, dataset.mean_normalized);
    // The per-cluster variance is compared to t_s on the scale of the whole
    // dataset's variance (equivalently: predictions are standardized to unit
    // variance before the cut). This keeps t_s meaningful across objectives
    // whose prediction spreads differ by orders of magnitude, and makes the
    // cut invariant under any affine rescaling of the raw predictions.
    const double root_var = stats[static_cast<std::size_t>(tree.root_id())].variance();
    return cut_top_down(tree, t_s, min_cluster_size, [&](int id) {
        return id < tree.leaf_count ||
               stats[static_cast<std::size_t>(id)].variance() <= t_s * root_var;
    });
}

Clustering distance_prune(const LinkageTree& tree, double t_dist, int min_cluster_size) {
    if (t_dist < 0.0) throw ConfigError("distance threshold must be non-negative");
    const int n = tree.leaf_count;
    // largest merge distance inside each subtree (0 for leaves)
    std::vector<double> max_inner(static_cast<std::size_t>(2 * n - 1), 0.0);
    for (std::size_t m = 0; m < tree.merges.size(); ++m) {
        const MergeStep& step = tree.merges[m];
        max_inner[static_cast<std::size_t>(n) + m] =
            std::max({step.distance, max_inner[static_cast<std::size_t>(step.left)],
                      max_inner[static_cast<std::size_t>(step.right)]});
    }
    return cut_top_down(tree, t_dist, min_cluster_size, [&](int id) {
        return id < n || max_inner[static_cast<std::size_t>(id)] <= t_dist;
    });
}

} // namespace tnt
