#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "deeptraj/matrix.hpp"
#include "deeptraj/partition.hpp"

namespace deeptraj {

/**
 * Calinski-Harabasz index (BGSS / (k - 1)) / (WGSS / (N - k)), with
 * dispersions taken around member means of `points` (partition centers are
 * ignored). Returns +infinity when WGSS is zero. Throws DegeneratePartition
 * when k < 2, N <= k, or a cluster is empty.
 */
double calinski_harabasz(const Matrix& points, const Partition& partition);

/// Ridge added to each cluster covariance, relative to its mean diagonal.
inline constexpr double kCovarianceRidge = 1e-6;

/**
 * Posterior membership under a Gaussian mixture whose components are fitted
 * to the clusters of `partition` (member mean and covariance, weight n_j/N).
 * Covariances get kCovarianceRidge * (mean diagonal) on the diagonal; a
 * cluster with zero spread borrows the pooled mean diagonal instead.
 * Throws DegeneratePartition on empty clusters.
 */
MembershipMatrix gaussian_membership(const Matrix& points, const Partition& partition,
                                     const std::string& method = "gauss");

/// Pair-counting adjusted Rand index. Defined as 1 when both partitions are
/// trivial in the same way (zero denominator). Throws SizeMismatch.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);
double adjusted_rand_index(const Partition& a, const Partition& b);

/// Converts integer group labels (any values) to dense cluster indices in
/// order of first appearance.
std::vector<std::size_t> dense_labels(std::span<const int> labels);

struct ClusterRef {
  std::size_t method = 0;
  std::size_t cluster = 0;
};

struct MatchedPair {
  ClusterRef a;
  ClusterRef b;
  double correlation = 0.0;
};

/// A cluster left without a partner in the matching against one other method.
struct UnmatchedCluster {
  ClusterRef cluster;
  std::size_t against = 0;  ///< method index of the other side of the pair
};

struct CoherenceReport {
  std::vector<std::string> column_labels;  ///< one per cluster column, all methods
  std::vector<ClusterRef> columns;
  Matrix correlation;                      ///< Pearson, symmetric, unit diagonal
  std::vector<MatchedPair> matches;
  std::vector<UnmatchedCluster> unmatched; ///< clusters left over when k differs
  std::optional<double> mean_matched;      ///< absent with fewer than two methods
};

/**
 * Correlates every cluster-probability column with every other across all
 * methods. For each pair of methods, clusters are matched greedily: the
 * highest remaining cross-method correlation is taken first and neither
 * column is reused. Throws SizeMismatch or ConstantColumn.
 */
CoherenceReport membership_correlation(std::span<const MembershipMatrix> matrices);

}  // namespace deeptraj
