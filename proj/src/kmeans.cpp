#include "deeptraj/kmeans.hpp"

#include <cmath>
#include <limits>

#include "deeptraj/error.hpp"
#include "deeptraj/evaluation.hpp"
#include "deeptraj/rng.hpp"

namespace deeptraj {

namespace {

// Assignment distance; L2 compares squared distances (same ordering).
double assign_distance(std::span<const double> a, std::span<const double> b, TrajectoryMetric metric) {
  if (metric == TrajectoryMetric::L2) return squared_distance(a, b);
  return traj_distance(a, b, metric);
}

std::vector<std::size_t> assign_all(const Matrix& points, const Matrix& centers, TrajectoryMetric metric) {
  std::vector<std::size_t> out(points.rows(), 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.rows(); ++c) {
      const double d = assign_distance(points.row(i), centers.row(c), metric);
      if (d < best) {
        best = d;
        out[i] = c;
      }
    }
  }
  return out;
}

void reseed_empty_clusters(const Matrix& points, std::vector<std::size_t>& assign, Matrix& centers,
                           TrajectoryMetric metric) {
  const std::size_t k = centers.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assign) ++sizes[a];
  for (std::size_t j = 0; j < k; ++j) {
    if (sizes[j] > 0) continue;
    std::size_t far = points.rows();
    double far_dist = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (sizes[assign[i]] <= 1) continue;
      const double d = assign_distance(points.row(i), centers.row(assign[i]), metric);
      if (d > far_dist) {
        far_dist = d;
        far = i;
      }
    }
    if (far == points.rows()) continue;  // only reachable when k > N
    --sizes[assign[far]];
    assign[far] = j;
    sizes[j] = 1;
    const auto src = points.row(far);
    std::copy(src.begin(), src.end(), centers.row(j).begin());
  }
}

Partition best_of_restarts(const Matrix& points, std::size_t k, TrajectoryMetric metric,
                           std::size_t n_restarts, std::uint64_t seed) {
  require(n_restarts >= 1, ErrorKind::InvalidArgument, "need at least one restart");
  require(k >= 1, ErrorKind::InvalidArgument, "k must be positive");
  require(k <= points.rows(), ErrorKind::KTooLarge, "k exceeds the number of items");
  const RngStream root(seed);
  Partition best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (std::size_t r = 0; r < n_restarts; ++r) {
    RngStream rng = root.child(r);
    Matrix centers(k, points.cols());
    const auto picks = rng.sample_without_replacement(points.rows(), k);
    for (std::size_t c = 0; c < k; ++c) {
      const auto src = points.row(picks[c]);
      std::copy(src.begin(), src.end(), centers.row(c).begin());
    }
    LloydRun run = lloyd(points, std::move(centers), metric);
    const double score = restart_score(points, run.partition);
    // Strict improvement keeps the lowest restart index on ties.
    if (!have_best || score > best_score) {
      best = std::move(run.partition);
      best_score = score;
      have_best = true;
    }
  }
  return best;
}

}  // namespace

LloydRun lloyd(const Matrix& points, Matrix centers, TrajectoryMetric metric, std::size_t max_iterations) {
  require(centers.cols() == points.cols(), ErrorKind::ShapeMismatch,
          "centers and points differ in dimension");
  require(centers.rows() >= 1 && centers.rows() <= points.rows(), ErrorKind::KTooLarge,
          "k must lie in [1, N]");
  const std::size_t k = centers.rows();
  LloydRun run;
  std::vector<std::size_t> assign = assign_all(points, centers, metric);
  for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
    reseed_empty_clusters(points, assign, centers, metric);
    run.partition = partition_from_assignments(points, assign, k);
    centers = run.partition.centers;
    run.sse_history.push_back(within_cluster_sse(points, run.partition));
    run.iterations = iter;
    auto next = assign_all(points, centers, metric);
    if (next == assign) return run;
    assign = std::move(next);
  }
  reseed_empty_clusters(points, assign, centers, metric);
  run.partition = partition_from_assignments(points, assign, k);
  return run;
}

double restart_score(const Matrix& points, const Partition& partition) {
  const auto sizes = partition.cluster_sizes();
  bool empty = false;
  for (std::size_t s : sizes) empty = empty || s == 0;
  if (partition.k >= 2 && partition.k < points.rows() && !empty)
    return calinski_harabasz(points, partition);
  return -within_cluster_sse(points, partition);
}

Partition kmeans_fit(const Matrix& points, std::size_t k, std::size_t n_restarts, std::uint64_t seed) {
  require(points.rows() > 0, ErrorKind::EmptyInput, "no points to cluster");
  return best_of_restarts(points, k, TrajectoryMetric::L2, n_restarts, seed);
}

Partition kml_fit(const Matrix& trajectories, std::size_t k, TrajectoryMetric metric,
                  std::size_t n_restarts, std::uint64_t seed) {
  require(trajectories.rows() > 0 && trajectories.cols() > 0, ErrorKind::EmptyDataset,
          "no trajectories to cluster");
  return best_of_restarts(trajectories, k, metric, n_restarts, seed);
}

namespace {

template <typename Fit>
KmlSweep sweep(const Matrix& items, std::size_t k_min, std::size_t k_max, Fit&& fit) {
  require(k_min >= 2 && k_min <= k_max, ErrorKind::InvalidArgument,
          "sweep needs 2 <= k_min <= k_max");
  require(k_max < items.rows(), ErrorKind::KTooLarge, "k_max must be below the number of items");
  KmlSweep out;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    Partition p = fit(k);
    out.ks.push_back(k);
    out.criterion.push_back(restart_score(items, p));
    out.partitions.push_back(std::move(p));
    if (out.criterion.back() > out.criterion[out.best]) out.best = out.ks.size() - 1;
  }
  return out;
}

}  // namespace

KmlSweep kml_sweep(const Matrix& trajectories, std::size_t k_min, std::size_t k_max,
                   TrajectoryMetric metric, std::size_t n_restarts, std::uint64_t seed) {
  return sweep(trajectories, k_min, k_max, [&](std::size_t k) {
    return kml_fit(trajectories, k, metric, n_restarts, derive_seed(seed, k));
  });
}

KmlSweep kmeans_sweep(const Matrix& points, std::size_t k_min, std::size_t k_max,
                      std::size_t n_restarts, std::uint64_t seed) {
  return sweep(points, k_min, k_max, [&](std::size_t k) {
    return kmeans_fit(points, k, n_restarts, derive_seed(seed, k));
  });
}

}  // namespace deeptraj
