#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deeptraj/matrix.hpp"
#include "deeptraj/partition.hpp"

namespace deeptraj {

/**
 * Group-based trajectory model: a finite mixture of polynomial mean
 * trajectories with Gaussian noise,
 *
 *   y_i(t) | class j  ~  N(sum_p beta_jp * s_t^p, sigma_j^2)
 *
 * on the rescaled time grid s_t = t / (T - 1) in [0, 1].
 */
struct GbtmModel {
  std::size_t k = 0;
  std::size_t order = 0;
  Vector weights;      ///< mixing proportions, sum to 1
  Matrix coefficients; ///< k x (order + 1), lowest power first
  Vector variances;    ///< per-class noise variance, >= floor

  /// Mean of class j at time index t on a grid of `timesteps` points.
  double mean_at(std::size_t j, std::size_t t, std::size_t timesteps) const;
  /// k x T matrix of class mean trajectories.
  Matrix mean_trajectories(std::size_t timesteps) const;
};

struct GbtmFit {
  GbtmModel model;
  MembershipMatrix memberships;      ///< responsibilities from the final E-step
  std::vector<double> loglik_history;
  std::size_t attempts = 1;          ///< initializations used (restarts on degeneracy)
};

inline constexpr double kGbtmVarianceFloor = 1e-6;
inline constexpr double kGbtmTolerance = 1e-8;
inline constexpr std::size_t kGbtmMaxAttempts = 5;

/// Rescaled time of index t on a grid of `timesteps` points.
double gbtm_time(std::size_t t, std::size_t timesteps);

/**
 * Fits the mixture by EM. Initial class means are polynomial fits to k
 * distinct subjects drawn k-means++ style (squared-distance weighting).
 * Iterates until the log-likelihood gain
 * drops below 1e-8 or `max_iters` M-steps have run. A class whose
 * responsibility mass falls below 1e-8 triggers a restart from a fresh
 * seed (child stream of `seed`); DegenerateCluster after 5 attempts.
 * Throws SingularDesign when poly_order + 1 > T or the normal equations are
 * singular, KTooLarge when k > N.
 */
GbtmFit gbtm_fit(const Matrix& trajectories, std::size_t k, std::size_t poly_order, std::uint64_t seed,
                 std::size_t max_iters = 500);

}  // namespace deeptraj
