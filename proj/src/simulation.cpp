#include "deeptraj/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deeptraj/error.hpp"
#include "deeptraj/rng.hpp"
#include "deeptraj/stats.hpp"

namespace deeptraj {

void SimulationConfig::validate() const {
  require(n_a + n_b >= 1, ErrorKind::EmptyConfig, "simulation needs at least one subject");
  require(timesteps >= 2, ErrorKind::InvalidArgument, "simulation needs T >= 2");
  require(noise_sd >= 0.0, ErrorKind::InvalidArgument, "noise sd must be non-negative");
}

TrajectoryDataset simulate_qol(const SimulationConfig& config) {
  config.validate();
  const std::size_t n = config.n_a + config.n_b;
  const RngStream root(config.seed);
  Matrix values(n, config.timesteps);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng = root.child(i);
    const bool group_a = i < config.n_a;
    labels[i] = group_a ? kGroupA : kGroupB;
    // The phase is drawn first so a subject's phase does not depend on the noise flag.
    const double phase_draw = rng.uniform(-config.phase_range, config.phase_range);
    const double phi = config.phase ? phase_draw : 0.0;
    for (std::size_t j = 0; j < config.timesteps; ++j) {
      const double t = static_cast<double>(j) * config.dt;
      double v = config.baseline;
      if (group_a) v += config.amplitude * std::sin(config.angular * t + phi);
      if (config.noise) v += config.noise_sd * rng.normal();
      values(i, j) = v;
    }
  }
  return make_dataset(std::move(values), std::move(labels));
}

TrajectoryDataset simulate_constant_groups(std::span<const double> levels, std::size_t per_group,
                                           std::size_t timesteps, double sd, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix values(levels.size() * per_group, timesteps);
  std::vector<int> labels;
  for (std::size_t g = 0; g < levels.size(); ++g)
    for (std::size_t s = 0; s < per_group; ++s) {
      const std::size_t i = g * per_group + s;
      labels.push_back(static_cast<int>(g));
      for (std::size_t t = 0; t < timesteps; ++t) values(i, t) = levels[g] + sd * rng.normal();
    }
  return make_dataset(std::move(values), std::move(labels));
}

TrajectoryDataset simulate_linear_groups(std::span<const double> slopes, std::size_t per_group,
                                         std::size_t timesteps, double sd, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix values(slopes.size() * per_group, timesteps);
  std::vector<int> labels;
  for (std::size_t g = 0; g < slopes.size(); ++g)
    for (std::size_t s = 0; s < per_group; ++s) {
      const std::size_t i = g * per_group + s;
      labels.push_back(static_cast<int>(g));
      for (std::size_t t = 0; t < timesteps; ++t)
        values(i, t) = slopes[g] * static_cast<double>(t) + sd * rng.normal();
    }
  return make_dataset(std::move(values), std::move(labels));
}

Matrix sample_gaussian(std::span<const double> eigenvalues, std::size_t n, std::uint64_t seed, Matrix* basis) {
  const std::size_t d = eigenvalues.size();
  RngStream rng(seed);
  Matrix raw(d, d);
  for (double& v : raw.values()) v = rng.normal();
  const Matrix q = orthonormal_basis(raw);
  Matrix out(n, d);
  Vector z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z[j] = std::sqrt(eigenvalues[j]) * rng.normal();
    auto row = out.row(i);
    gemv_acc(q, z, row);
  }
  if (basis) *basis = q;
  return out;
}

namespace {

constexpr std::size_t kArcSamples = 4000;

// Distance from q to the unit upper half circle centred at the origin.
double distance_to_upper_arc(double x, double y) {
  if (y >= 0.0) return std::abs(std::hypot(x, y) - 1.0);
  return std::min(std::hypot(x - 1.0, y), std::hypot(x + 1.0, y));
}

// Closest approach of the lower arc (1 + cos t, offset + sin t), t in [pi, 2 pi].
double arc_gap(double offset) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s <= kArcSamples; ++s) {
    const double t = std::numbers::pi * (1.0 + static_cast<double>(s) / kArcSamples);
    best = std::min(best, distance_to_upper_arc(1.0 + std::cos(t), offset + std::sin(t)));
  }
  return best;
}

}  // namespace

LabeledPoints make_half_moons(std::size_t per_moon, double gap, double jitter, std::uint64_t seed) {
  // The gap shrinks as the lower moon rises; bisect for the requested value.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (arc_gap(mid) > gap ? lo : hi) = mid;
  }
  const double offset = 0.5 * (lo + hi);

  RngStream rng(seed);
  LabeledPoints out{Matrix(2 * per_moon, 2), {}};
  for (std::size_t moon = 0; moon < 2; ++moon)
    for (std::size_t s = 0; s < per_moon; ++s) {
      const double frac = per_moon > 1 ? static_cast<double>(s) / static_cast<double>(per_moon - 1) : 0.5;
      const double t = std::numbers::pi * frac;
      const std::size_t i = moon * per_moon + s;
      double x = moon == 0 ? std::cos(t) : 1.0 - std::cos(t);
      double y = moon == 0 ? std::sin(t) : offset - std::sin(t);
      const double r = jitter * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
      x += r * std::cos(a);
      y += r * std::sin(a);
      out.points(i, 0) = x;
      out.points(i, 1) = y;
      out.labels.push_back(static_cast<int>(moon));
    }
  return out;
}

LabeledPoints make_blobs(const Matrix& centers, std::size_t per_blob, double sd, std::uint64_t seed) {
  RngStream rng(seed);
  LabeledPoints out{Matrix(centers.rows() * per_blob, centers.cols()), {}};
  for (std::size_t b = 0; b < centers.rows(); ++b)
    for (std::size_t s = 0; s < per_blob; ++s) {
      const std::size_t i = b * per_blob + s;
      for (std::size_t j = 0; j < centers.cols(); ++j) out.points(i, j) = centers(b, j) + sd * rng.normal();
      out.labels.push_back(static_cast<int>(b));
    }
  return out;
}

}  // namespace deeptraj
