#include "deeptraj/partition.hpp"

#include <cmath>

#include "deeptraj/error.hpp"

namespace deeptraj {

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments)
    if (a < k) ++sizes[a];
  return sizes;
}

void Partition::validate() const {
  for (std::size_t a : assignments)
    require(a < k, ErrorKind::DegeneratePartition, "cluster index out of range");
  require(centers.rows() == k, ErrorKind::DegeneratePartition, "partition must have k centers");
}

Partition partition_from_assignments(const Matrix& points, std::vector<std::size_t> assignments,
                                     std::size_t k) {
  require(assignments.size() == points.rows(), ErrorKind::SizeMismatch,
          "assignment count does not match point count");
  Partition p{std::move(assignments), k, Matrix(k, points.cols())};
  p.validate();
  const auto sizes = p.cluster_sizes();
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto c = p.centers.row(p.assignments[i]);
    const auto x = points.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) c[j] += x[j];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (sizes[c] > 0)
      for (double& v : p.centers.row(c)) v /= static_cast<double>(sizes[c]);
  return p;
}

double within_cluster_sse(const Matrix& points, const Partition& partition) {
  double sse = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    sse += squared_distance(points.row(i), partition.centers.row(partition.assignments[i]));
  return sse;
}

std::vector<std::size_t> MembershipMatrix::hard_assignments() const {
  std::vector<std::size_t> out(items(), 0);
  for (std::size_t i = 0; i < items(); ++i) {
    const auto row = probabilities.row(i);
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] > row[out[i]]) out[i] = j;
  }
  return out;
}

void MembershipMatrix::validate() const {
  for (std::size_t i = 0; i < items(); ++i) {
    double sum = 0.0;
    for (double p : probabilities.row(i)) {
      require(p >= 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "membership outside [0, 1]");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
            "membership row " + std::to_string(i) + " does not sum to 1");
  }
  require(cluster_labels.empty() || cluster_labels.size() == clusters(), ErrorKind::SizeMismatch,
          "cluster label count does not match membership columns");
}

std::vector<std::string> default_cluster_labels(const std::string& method, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(method + "." + std::to_string(j));
  return out;
}

}  // namespace deeptraj
