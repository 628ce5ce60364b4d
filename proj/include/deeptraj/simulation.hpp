#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "deeptraj/dataset.hpp"
#include "deeptraj/matrix.hpp"

namespace deeptraj {

/// Simulated quality-of-life study: group A oscillates, group B is flat.
///   A: amplitude * sin(angular * t + phi_i) + baseline + eps,  phi_i ~ U(-phase_range, phase_range)
///   B: baseline + eps,  eps ~ N(0, noise_sd^2)
/// at t_j = j * dt. Phase is drawn once per subject (radians).
struct SimulationConfig {
  std::size_t n_a = 100;
  std::size_t n_b = 100;
  std::size_t timesteps = 20;
  double dt = 0.25;
  double amplitude = 5.0;
  double baseline = 10.0;
  double angular = std::numbers::pi / 2.0;
  double phase_range = 2.0;
  double noise_sd = 1.0;
  bool noise = true;
  bool phase = true;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr int kGroupA = 0;
inline constexpr int kGroupB = 1;

/// Group A subjects come first (label 0), then group B (label 1). Subject i
/// draws from child stream i of the seed. Throws EmptyConfig when
/// n_a + n_b == 0.
TrajectoryDataset simulate_qol(const SimulationConfig& config);

/// Groups of flat trajectories: level + N(0, sd^2) noise, `per_group` each,
/// labels 0..levels-1.
TrajectoryDataset simulate_constant_groups(std::span<const double> levels, std::size_t per_group,
                                           std::size_t timesteps, double sd, std::uint64_t seed);

/// Groups of straight lines slope * t + N(0, sd^2) at t = 0..T-1.
TrajectoryDataset simulate_linear_groups(std::span<const double> slopes, std::size_t per_group,
                                         std::size_t timesteps, double sd, std::uint64_t seed);

/// n samples of a zero-mean Gaussian whose covariance has the given
/// eigenvalues along a random orthonormal basis (returned in `basis`,
/// column j pairs with eigenvalues[j]).
Matrix sample_gaussian(std::span<const double> eigenvalues, std::size_t n, std::uint64_t seed,
                       Matrix* basis = nullptr);

/// Two interleaved half-moons of `per_moon` points each (labels 0, 1). The
/// lower moon is shifted so the noise-free arcs are `gap` apart at their
/// closest; each point gets isotropic jitter of at most `jitter`.
struct LabeledPoints {
  Matrix points;
  std::vector<int> labels;
};
LabeledPoints make_half_moons(std::size_t per_moon, double gap, double jitter, std::uint64_t seed);

/// Isotropic Gaussian blobs around the given centers (rows).
LabeledPoints make_blobs(const Matrix& centers, std::size_t per_blob, double sd, std::uint64_t seed);

}  // namespace deeptraj
