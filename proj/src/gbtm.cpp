#include "deeptraj/gbtm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deeptraj/error.hpp"
#include "deeptraj/rng.hpp"
#include "deeptraj/stats.hpp"

namespace deeptraj {

double gbtm_time(std::size_t t, std::size_t timesteps) {
  return timesteps > 1 ? static_cast<double>(t) / static_cast<double>(timesteps - 1) : 0.0;
}

double GbtmModel::mean_at(std::size_t j, std::size_t t, std::size_t timesteps) const {
  const double s = gbtm_time(t, timesteps);
  double value = 0.0;
  double power = 1.0;
  for (std::size_t p = 0; p <= order; ++p) {
    value += coefficients(j, p) * power;
    power *= s;
  }
  return value;
}

Matrix GbtmModel::mean_trajectories(std::size_t timesteps) const {
  Matrix out(k, timesteps);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < timesteps; ++t) out(j, t) = mean_at(j, t, timesteps);
  return out;
}

namespace {

struct DegenerateAttempt {};

/// Least-squares polynomial through a mean trajectory, via the Cholesky
/// factor of X^T X (shared by every class since the time grid is common).
Vector fit_polynomial(const Matrix& design, const Matrix& gram_factor, std::span<const double> y) {
  Vector rhs(design.cols(), 0.0);
  gemv_t_acc(design, y, rhs);
  return cholesky_solve(gram_factor, rhs);
}

class EmRun {
 public:
  EmRun(const Matrix& y, std::size_t k, std::size_t order, std::size_t max_iters)
      : y_(y), k_(k), order_(order), max_iters_(max_iters), n_(y.rows()), t_(y.cols()) {
    design_ = Matrix(t_, order_ + 1);
    for (std::size_t t = 0; t < t_; ++t) {
      double power = 1.0;
      for (std::size_t p = 0; p <= order_; ++p) {
        design_(t, p) = power;
        power *= gbtm_time(t, t_);
      }
    }
    gram_factor_ = cholesky(design_.transpose() * design_);
    require(!gram_factor_.empty(), ErrorKind::SingularDesign,
            "polynomial design matrix is singular on this time grid");
  }

  GbtmFit run(RngStream& rng) {
    GbtmFit fit;
    GbtmModel& model = fit.model;
    model.k = k_;
    model.order = order_;
    model.weights.assign(k_, 1.0 / static_cast<double>(k_));
    model.coefficients = Matrix(k_, order_ + 1);

    double grand_mean = 0.0;
    for (double v : y_.values()) grand_mean += v;
    grand_mean /= static_cast<double>(y_.size());
    double total_var = 0.0;
    for (double v : y_.values()) total_var += (v - grand_mean) * (v - grand_mean);
    total_var /= static_cast<double>(y_.size());
    model.variances.assign(k_, std::max(total_var, kGbtmVarianceFloor));

    const auto picks = spread_picks(rng);
    for (std::size_t j = 0; j < k_; ++j) {
      const Vector beta = fit_polynomial(design_, gram_factor_, y_.row(picks[j]));
      std::copy(beta.begin(), beta.end(), model.coefficients.row(j).begin());
    }

    Matrix resp(n_, k_);
    for (std::size_t iter = 0;; ++iter) {
      const double loglik = e_step(model, resp);
      fit.loglik_history.push_back(loglik);
      const std::size_t h = fit.loglik_history.size();
      if (h >= 2 && loglik - fit.loglik_history[h - 2] < kGbtmTolerance) break;
      if (iter >= max_iters_) break;
      m_step(model, resp);
    }
    fit.memberships.probabilities = std::move(resp);
    fit.memberships.method = "traj";
    fit.memberships.cluster_labels = default_cluster_labels("traj", k_);
    return fit;
  }

 private:
  /// Starting subjects drawn k-means++ style: the first uniformly, each next
  /// one with probability proportional to its squared distance from the
  /// closest subject already drawn.
  std::vector<std::size_t> spread_picks(RngStream& rng) const {
    std::vector<std::size_t> picks{rng.index(n_)};
    Vector nearest(n_, std::numeric_limits<double>::infinity());
    while (picks.size() < k_) {
      double total = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        nearest[i] = std::min(nearest[i], squared_distance(y_.row(i), y_.row(picks.back())));
        total += nearest[i];
      }
      std::size_t next = n_;
      if (total > 0.0) {
        double u = rng.uniform(0.0, total);
        for (std::size_t i = 0; i < n_ && next == n_; ++i) {
          if (nearest[i] > 0.0 && u < nearest[i]) next = i;
          u -= nearest[i];
        }
      }
      if (next == n_) {
        // Remaining subjects coincide with drawn ones (or rounding left u
        // past the end); fall back to the first subject not yet drawn.
        for (std::size_t i = 0; i < n_ && next == n_; ++i)
          if (std::find(picks.begin(), picks.end(), i) == picks.end()) next = i;
      }
      picks.push_back(next);
    }
    return picks;
  }

  double e_step(const GbtmModel& model, Matrix& resp) const {
    const Matrix means = model.mean_trajectories(t_);
    Vector log_norm(k_);
    for (std::size_t j = 0; j < k_; ++j)
      log_norm[j] = std::log(model.weights[j]) -
                    0.5 * static_cast<double>(t_) * std::log(2.0 * std::numbers::pi * model.variances[j]);
    double loglik = 0.0;
    Vector logp(k_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto yi = y_.row(i);
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k_; ++j) {
        logp[j] = log_norm[j] - 0.5 * squared_distance(yi, means.row(j)) / model.variances[j];
        peak = std::max(peak, logp[j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < k_; ++j) {
        resp(i, j) = std::exp(logp[j] - peak);
        sum += resp(i, j);
      }
      for (std::size_t j = 0; j < k_; ++j) resp(i, j) /= sum;
      loglik += peak + std::log(sum);
    }
    for (std::size_t j = 0; j < k_; ++j) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n_; ++i) mass += resp(i, j);
      if (mass < 1e-8) throw DegenerateAttempt{};
    }
    return loglik;
  }

  void m_step(GbtmModel& model, const Matrix& resp) const {
    Vector mean_traj(t_);
    for (std::size_t j = 0; j < k_; ++j) {
      double mass = 0.0;
      std::fill(mean_traj.begin(), mean_traj.end(), 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        const double r = resp(i, j);
        mass += r;
        const auto yi = y_.row(i);
        for (std::size_t t = 0; t < t_; ++t) mean_traj[t] += r * yi[t];
      }
      for (double& v : mean_traj) v /= mass;
      model.weights[j] = mass / static_cast<double>(n_);
      // With a shared design, weighted least squares reduces to OLS on the
      // responsibility-weighted mean trajectory.
      const Vector beta = fit_polynomial(design_, gram_factor_, mean_traj);
      require(std::all_of(beta.begin(), beta.end(), [](double b) { return std::isfinite(b); }),
              ErrorKind::SingularDesign, "weighted least squares produced non-finite coefficients");
      std::copy(beta.begin(), beta.end(), model.coefficients.row(j).begin());

      double ss = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const auto yi = y_.row(i);
        double si = 0.0;
        for (std::size_t t = 0; t < t_; ++t) {
          const double d = yi[t] - model.mean_at(j, t, t_);
          si += d * d;
        }
        ss += resp(i, j) * si;
      }
      model.variances[j] = std::max(ss / (mass * static_cast<double>(t_)), kGbtmVarianceFloor);
    }
    // Renormalize mixing weights against rounding drift.
    double total = 0.0;
    for (double w : model.weights) total += w;
    for (double& w : model.weights) w /= total;
  }

  const Matrix& y_;
  std::size_t k_, order_, max_iters_, n_, t_;
  Matrix design_;
  Matrix gram_factor_;
};

}  // namespace

GbtmFit gbtm_fit(const Matrix& trajectories, std::size_t k, std::size_t poly_order, std::uint64_t seed,
                 std::size_t max_iters) {
  require(trajectories.rows() > 0 && trajectories.cols() > 0, ErrorKind::EmptyDataset,
          "no trajectories to model");
  require(k >= 1, ErrorKind::InvalidArgument, "k must be positive");
  require(k <= trajectories.rows(), ErrorKind::KTooLarge, "k exceeds the number of subjects");
  require(poly_order + 1 <= trajectories.cols(), ErrorKind::SingularDesign,
          "polynomial order needs order + 1 <= T time points");
  EmRun em(trajectories, k, poly_order, max_iters);
  const RngStream root(seed);
  for (std::size_t attempt = 0; attempt < kGbtmMaxAttempts; ++attempt) {
    RngStream rng = root.child(attempt);
    try {
      GbtmFit fit = em.run(rng);
      fit.attempts = attempt + 1;
      return fit;
    } catch (const DegenerateAttempt&) {
    }
  }
  throw Error(ErrorKind::DegenerateCluster,
              "a trajectory class lost all responsibility mass in every initialization");
}

}  // namespace deeptraj
