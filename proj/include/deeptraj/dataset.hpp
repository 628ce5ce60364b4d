#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deeptraj/matrix.hpp"

namespace deeptraj {

/// Affine map applied to every value before training: (x - mean) / sd.
struct Normalization {
  double mean = 0.0;
  double sd = 1.0;

  double apply(double x) const noexcept { return (x - mean) / sd; }
  double invert(double z) const noexcept { return z * sd + mean; }

  friend bool operator==(const Normalization&, const Normalization&) = default;
};

/**
 * N subjects observed at the same T time points.
 *
 * `values` holds one trajectory per row. Labels, when present, carry the
 * ground-truth group of each subject (e.g. from a simulation).
 */
struct TrajectoryDataset {
  std::vector<std::string> subject_ids;
  Matrix values;
  std::optional<std::vector<int>> labels;

  std::size_t subjects() const noexcept { return values.rows(); }
  std::size_t timesteps() const noexcept { return values.cols(); }

  /// Checks rectangular shape, finite values and unique IDs; throws on failure.
  void validate() const;
};

/// Builds a dataset from a matrix with IDs "s0", "s1", ...
TrajectoryDataset make_dataset(Matrix values, std::optional<std::vector<int>> labels = std::nullopt);

/// Global mean and population standard deviation of all values (sd = 1 for
/// constant data).
Normalization fit_normalization(const Matrix& values);
Matrix normalize(const Matrix& values, const Normalization& norm);

}  // namespace deeptraj
