#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deeptraj/distance.hpp"
#include "deeptraj/matrix.hpp"
#include "deeptraj/partition.hpp"

namespace deeptraj {

inline constexpr std::size_t kDefaultMaxIterations = 100;

/// Outcome of one Lloyd run from fixed initial centers.
struct LloydRun {
  Partition partition;
  std::size_t iterations = 0;
  std::vector<double> sse_history;  ///< within-cluster SSE after each update
};

/**
 * Alternates nearest-center assignment (under `metric`, lowest index wins
 * ties) and pointwise-mean center updates until assignments are stable or
 * `max_iterations` is reached. An empty cluster is reseeded with the point
 * farthest from its current center.
 */
LloydRun lloyd(const Matrix& points, Matrix initial_centers, TrajectoryMetric metric,
               std::size_t max_iterations = kDefaultMaxIterations);

/// Score used to rank restarts: Calinski-Harabasz when defined
/// (2 <= k < N, no empty cluster), otherwise minus the within-cluster SSE.
double restart_score(const Matrix& points, const Partition& partition);

/**
 * Euclidean K-means with `n_restarts` random initializations (k distinct
 * points each); returns the restart with the best Calinski-Harabasz value,
 * lowest restart index on ties. Restart r draws from the child stream r of
 * `seed`. Throws EmptyInput or KTooLarge.
 */
Partition kmeans_fit(const Matrix& points, std::size_t k, std::size_t n_restarts, std::uint64_t seed);

/**
 * Longitudinal K-means: as kmeans_fit, with trajectories (rows) as objects,
 * `metric` for assignment and the pointwise mean trajectory as center. The
 * criterion treats trajectories as flat T-vectors. Throws EmptyDataset or
 * KTooLarge.
 */
Partition kml_fit(const Matrix& trajectories, std::size_t k, TrajectoryMetric metric,
                  std::size_t n_restarts, std::uint64_t seed);

struct KmlSweep {
  std::vector<std::size_t> ks;
  std::vector<double> criterion;  ///< Calinski-Harabasz of each k's best partition
  std::vector<Partition> partitions;
  std::size_t best = 0;           ///< index into ks with the largest criterion
};

/// kml_fit for each k in [k_min, k_max]; k uses child stream k of `seed`.
KmlSweep kml_sweep(const Matrix& trajectories, std::size_t k_min, std::size_t k_max,
                   TrajectoryMetric metric, std::size_t n_restarts, std::uint64_t seed);

/// Same sweep with Euclidean K-means on points.
KmlSweep kmeans_sweep(const Matrix& points, std::size_t k_min, std::size_t k_max,
                      std::size_t n_restarts, std::uint64_t seed);

}  // namespace deeptraj
