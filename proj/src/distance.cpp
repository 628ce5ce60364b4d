#include "deeptraj/distance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "deeptraj/error.hpp"

namespace deeptraj {

std::string_view to_string(TrajectoryMetric metric) {
  switch (metric) {
    case TrajectoryMetric::L1: return "L1";
    case TrajectoryMetric::L2: return "L2";
    case TrajectoryMetric::DTW: return "DTW";
    case TrajectoryMetric::Frechet: return "Frechet";
  }
  return "?";
}

TrajectoryMetric parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "l1" || lower == "manhattan") return TrajectoryMetric::L1;
  if (lower == "l2" || lower == "euclidean") return TrajectoryMetric::L2;
  if (lower == "dtw") return TrajectoryMetric::DTW;
  if (lower == "frechet") return TrajectoryMetric::Frechet;
  throw Error(ErrorKind::InvalidArgument, "unknown trajectory metric '" + std::string(name) + "'");
}

namespace {

void require_non_empty(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::EmptyTrajectory, "trajectory has no values");
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  require(a.size() == b.size(), ErrorKind::LengthMismatch,
          "L1/L2 distances need trajectories of equal length");
}

}  // namespace

double l1_distance(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double dtw_distance(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Rolling rows of the (n+1) x (m+1) cumulative cost table.
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = std::abs(a[i - 1] - b[j - 1]) + std::min({prev[j], cur[j - 1], prev[j - 1]});
    std::swap(prev, cur);
  }
  return prev[m];
}

double frechet_distance(std::span<const double> a, std::span<const double> b) {
  require_non_empty(a, b);
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> table(n * m);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return table[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::abs(a[i] - b[j]);
      if (i == 0 && j == 0)
        at(i, j) = d;
      else if (i == 0)
        at(i, j) = std::max(at(0, j - 1), d);
      else if (j == 0)
        at(i, j) = std::max(at(i - 1, 0), d);
      else
        at(i, j) = std::max(std::min({at(i - 1, j), at(i - 1, j - 1), at(i, j - 1)}), d);
    }
  }
  return at(n - 1, m - 1);
}

double traj_distance(std::span<const double> a, std::span<const double> b, TrajectoryMetric metric) {
  switch (metric) {
    case TrajectoryMetric::L1: return l1_distance(a, b);
    case TrajectoryMetric::L2: return l2_distance(a, b);
    case TrajectoryMetric::DTW: return dtw_distance(a, b);
    case TrajectoryMetric::Frechet: return frechet_distance(a, b);
  }
  return 0.0;
}

}  // namespace deeptraj
