#include "deeptraj/agglomerative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "deeptraj/error.hpp"

namespace deeptraj {

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
  }
  return "?";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  if (name == "average") return Linkage::Average;
  throw Error(ErrorKind::InvalidArgument, "unknown linkage '" + std::string(name) + "'");
}

Partition agglomerative_fit(const Matrix& points, std::size_t k, Linkage linkage) {
  const std::size_t n = points.rows();
  require(n > 0, ErrorKind::EmptyInput, "no points to cluster");
  require(k >= 1, ErrorKind::InvalidArgument, "k must be positive");
  require(k <= n, ErrorKind::KTooLarge, "k exceeds the number of points");

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist(i, j) = dist(j, i) = std::sqrt(squared_distance(points.row(i), points.row(j)));

  // Each active cluster is represented by its lowest member index.
  std::vector<std::size_t> parent(n);
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;

  for (std::size_t clusters = n; clusters > k; --clusters) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    // Lance-Williams update of distances to the merged cluster (kept at bi).
    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == bi || m == bj) continue;
      double d = 0.0;
      switch (linkage) {
        case Linkage::Single: d = std::min(dist(bi, m), dist(bj, m)); break;
        case Linkage::Complete: d = std::max(dist(bi, m), dist(bj, m)); break;
        case Linkage::Average:
          d = (static_cast<double>(size[bi]) * dist(bi, m) + static_cast<double>(size[bj]) * dist(bj, m)) /
              static_cast<double>(size[bi] + size[bj]);
          break;
      }
      dist(bi, m) = dist(m, bi) = d;
    }
    size[bi] += size[bj];
    active[bj] = false;
    parent[bj] = bi;
  }

  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i];
    return i;
  };
  std::vector<std::size_t> label_of(n, n);
  std::size_t next_label = 0;
  std::vector<std::size_t> assignments(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    if (label_of[r] == n) label_of[r] = next_label++;
    assignments[i] = label_of[r];
  }
  return partition_from_assignments(points, std::move(assignments), k);
}

}  // namespace deeptraj
