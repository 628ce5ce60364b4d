#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deeptraj/matrix.hpp"

namespace deeptraj {

/**
 * Hard assignment of N items to k clusters.
 *
 * `centers` has one row per cluster; rows are points or whole trajectories
 * depending on what was clustered.
 */
struct Partition {
  std::vector<std::size_t> assignments;
  std::size_t k = 0;
  Matrix centers;

  std::size_t size() const noexcept { return assignments.size(); }
  std::vector<std::size_t> cluster_sizes() const;
  /// Throws DegeneratePartition if an index is out of range or centers are
  /// inconsistent with k.
  void validate() const;
};

/// Partition with centers set to the member means of `points`; empty
/// clusters keep a zero center.
Partition partition_from_assignments(const Matrix& points, std::vector<std::size_t> assignments,
                                     std::size_t k);

/// Within-cluster sum of squared Euclidean distances to `partition.centers`.
double within_cluster_sse(const Matrix& points, const Partition& partition);

/// Posterior cluster probabilities, one row per item.
struct MembershipMatrix {
  Matrix probabilities;               ///< N x k, rows sum to 1
  std::string method;                 ///< e.g. "encod", "kml", "traj"
  std::vector<std::string> cluster_labels;

  std::size_t items() const noexcept { return probabilities.rows(); }
  std::size_t clusters() const noexcept { return probabilities.cols(); }
  /// Row-wise argmax, lowest index on ties.
  std::vector<std::size_t> hard_assignments() const;
  /// Throws InvalidArgument if entries leave [0,1] or a row sum is off by
  /// more than 1e-12.
  void validate() const;
};

/// Default labels "<method>.0", "<method>.1", ...
std::vector<std::string> default_cluster_labels(const std::string& method, std::size_t k);

}  // namespace deeptraj
