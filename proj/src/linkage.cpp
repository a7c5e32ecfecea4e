#include "tnt/linkage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <Eigen/Dense>

#include "tnt/errors.hpp"

namespace tnt {

LinkageMethod linkage_from_string(const std::string& s) {
    if (s == "ward") return LinkageMethod::Ward;
    if (s == "complete") return LinkageMethod::Complete;
    if (s == "average") return LinkageMethod::Average;
    if (s == "single") return LinkageMethod::Single;
    if (s == "weighted") return LinkageMethod::Weighted;
    if (s == "centroid") return LinkageMethod::Centroid;
    if (s == "median") return LinkageMethod::Median;
    throw ConfigError("unknown linkage method '" + s + "'");
}

DistanceMetric distance_from_string(const std::string& s) {
    if (s == "euclidean") return DistanceMetric::Euclidean;
    if (s == "mahalanobis") return DistanceMetric::Mahalanobis;
    throw ConfigError("unknown distance metric '" + s + "'");
}

std::string to_string(LinkageMethod m) {
    switch (m) {
        case LinkageMethod::Ward: return "ward";
        case LinkageMethod::Complete: return "complete";
        case LinkageMethod::Average: return "average";
        case LinkageMethod::Single: return "single";
        case LinkageMethod::Weighted: return "weighted";
        case LinkageMethod::Centroid: return "centroid";
        case LinkageMethod::Median: return "median";
    }
    return "?";
}

std::string to_string(DistanceMetric m) {
    return m == DistanceMetric::Euclidean ? "euclidean" : "mahalanobis";
}

std::vector<int> LinkageTree::leaves_of(int cluster_id) const {
    std::vector<int> leaves;
    std::vector<int> stack{cluster_id};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (id < leaf_count) {
            leaves.push_back(id);
        } else {
            const MergeStep& m = merges[static_cast<std::size_t>(id - leaf_count)];
            stack.push_back(m.left);
            stack.push_back(m.right);
        }
    }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

namespace {

/// Whether the Lance-Williams recurrence for this method runs on squared
/// distances (with a square root applied to reported merge heights).
bool squared_family(LinkageMethod m) {
    return m == LinkageMethod::Ward || m == LinkageMethod::Centroid ||
           m == LinkageMethod::Median;
}

double lance_williams(LinkageMethod method, double dik, double djk, double dij, double ni,
                      double nj, double nk) {
    switch (method) {
        case LinkageMethod::Single:
            return std::min(dik, djk);
        case LinkageMethod::Complete:
            return std::max(dik, djk);
        case LinkageMethod::Average:
            return (ni * dik + nj * djk) / (ni + nj);
        case LinkageMethod::Weighted:
            return 0.5 * (dik + djk);
        case LinkageMethod::Centroid: {
            const double s = ni + nj;
            return (ni * dik + nj * djk) / s - ni * nj * dij / (s * s);
        }
        case LinkageMethod::Median:
            return 0.5 * dik + 0.5 * djk - 0.25 * dij;
        case LinkageMethod::Ward: {
            const double s = ni + nj + nk;
            return ((ni + nk) * dik + (nj + nk) * djk - nk * dij) / s;
        }
    }
    return 0.0;
}

Eigen::MatrixXd whiten_mahalanobis(const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(x.rows());
    cov.diagonal().array() += 1e-8;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericError("feature covariance is singular; mahalanobis distance unavailable");
    }
    // Solve L z = (x - mean)^T per row: rows become unit-covariance coordinates.
    return llt.matrixL().solve(centered.transpose()).transpose();
}

} // namespace

LinkageTree agglomerate(const std::vector<std::vector<double>>& features, LinkageMethod method,
                        DistanceMetric metric) {
    const int n = static_cast<int>(features.size());
    if (n < 2) throw ConfigError("clustering needs at least 2 rows");
    const int dims = static_cast<int>(features.front().size());
    Eigen::MatrixXd x(n, dims);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dims; ++j) x(i, j) = features[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    if (metric == DistanceMetric::Mahalanobis) x = whiten_mahalanobis(x);

    const bool squared = squared_family(method);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // dist(i,j) between the clusters currently stored in slots i and j.
    std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), kInf));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (x.row(i) - x.row(j)).squaredNorm();
            dist[i][j] = dist[j][i] = squared ? d2 : std::sqrt(d2);
        }
    }

    std::vector<bool> active(static_cast<std::size_t>(n), true);
    std::vector<int> cluster_id(static_cast<std::size_t>(n));
    std::vector<double> cluster_size(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i < n; ++i) cluster_id[i] = i;

    // nearest active neighbour per slot, kept exact after every merge
    std::vector<int> nn(static_cast<std::size_t>(n), -1);
    std::vector<double> nn_dist(static_cast<std::size_t>(n), kInf);
    auto rescan = [&](int i) {
        nn[i] = -1;
        nn_dist[i] = kInf;
        for (int j = 0; j < n; ++j) {
            if (j == i || !active[j]) continue;
            if (dist[i][j] < nn_dist[i]) {
                nn_dist[i] = dist[i][j];
                nn[i] = j;
            }
        }
    };
    for (int i = 0; i < n; ++i) rescan(i);

    LinkageTree tree;
    tree.leaf_count = n;
    tree.merges.reserve(static_cast<std::size_t>(n - 1));

    for (int step = 0; step < n - 1; ++step) {
        int best_i = -1;
        double best = kInf;
        for (int i = 0; i < n; ++i) {
            if (active[i] && nn_dist[i] < best) {
                best = nn_dist[i];
                best_i = i;
            }
        }
        if (best_i < 0) throw NumericError("clustering lost track of active clusters");
        int a = best_i, b = nn[best_i];
        if (a > b) std::swap(a, b);

        const double dij = dist[a][b];
        const double na = cluster_size[a], nb = cluster_size[b];
        MergeStep merge;
        merge.left = std::min(cluster_id[a], cluster_id[b]);
        merge.right = std::max(cluster_id[a], cluster_id[b]);
        merge.distance = squared ? std::sqrt(std::max(dij, 0.0)) : dij;
        merge.size = static_cast<int>(na + nb);
        tree.merges.push_back(merge);

        // merged cluster lives in slot a; slot b retires
        active[b] = false;
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == a) continue;
            const double updated =
                lance_williams(method, dist[a][k], dist[b][k], dij, na, nb, cluster_size[k]);
            dist[a][k] = dist[k][a] = updated;
        }
        cluster_size[a] = na + nb;
        cluster_id[a] = n + step;

        rescan(a);
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == a) continue;
            if (nn[k] == a || nn[k] == b) {
                rescan(k);  // its old nearest neighbour changed or vanished
            } else if (dist[k][a] < nn_dist[k]) {
                nn_dist[k] = dist[k][a];  // merged cluster moved closer
                nn[k] = a;
            }
        }
    }
    return tree;
}

LinkageTree build_linkage(const ExplanationDataset& dataset, LinkageMethod method,
                          DistanceMetric metric) {
    return agglomerate(clustering_features(dataset), method, metric);
}

void write_linkage_csv(const LinkageTree& tree, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(17);
    out << "left,right,distance,size\n";
    for (const MergeStep& m : tree.merges) {
        out << m.left << ',' << m.right << ',' << m.distance << ',' << m.size << '\n';
    }
}

} // namespace tnt
