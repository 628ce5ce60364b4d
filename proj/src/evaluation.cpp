#include "deeptraj/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "deeptraj/error.hpp"
#include "deeptraj/stats.hpp"

namespace deeptraj {

double calinski_harabasz(const Matrix& points, const Partition& partition) {
  const std::size_t n = points.rows();
  const std::size_t k = partition.k;
  require(partition.size() == n, ErrorKind::SizeMismatch, "partition size differs from point count");
  require(k >= 2, ErrorKind::DegeneratePartition, "Calinski-Harabasz needs k >= 2");
  require(n > k, ErrorKind::DegeneratePartition, "Calinski-Harabasz needs N > k");
  const auto sizes = partition.cluster_sizes();
  for (std::size_t s : sizes) require(s > 0, ErrorKind::DegeneratePartition, "empty cluster");

  const Partition means = partition_from_assignments(points, partition.assignments, k);
  Vector grand(points.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < points.cols(); ++j) grand[j] += points(i, j);
  for (double& g : grand) g /= static_cast<double>(n);

  double bgss = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    bgss += static_cast<double>(sizes[c]) * squared_distance(means.centers.row(c), grand);
  const double wgss = within_cluster_sse(points, means);
  if (wgss == 0.0) return std::numeric_limits<double>::infinity();
  return (bgss / static_cast<double>(k - 1)) / (wgss / static_cast<double>(n - k));
}

MembershipMatrix gaussian_membership(const Matrix& points, const Partition& partition,
                                     const std::string& method) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  const std::size_t k = partition.k;
  require(partition.size() == n, ErrorKind::SizeMismatch, "partition size differs from point count");
  require(k >= 1, ErrorKind::DegeneratePartition, "partition has no clusters");
  const auto sizes = partition.cluster_sizes();
  for (std::size_t s : sizes) require(s > 0, ErrorKind::DegeneratePartition, "empty cluster");

  // Pooled spread is the fallback scale for clusters with no spread of their own.
  double pooled_diag = 0.0;
  if (n >= 2) {
    const auto all = mean_and_covariance(points);
    for (std::size_t j = 0; j < d; ++j) pooled_diag += all.covariance(j, j);
    pooled_diag /= static_cast<double>(d);
  }
  if (!(pooled_diag > 0.0)) pooled_diag = 1.0;

  struct Component {
    Vector mean;
    Matrix chol;
    double log_weight = 0.0;
    double half_log_det = 0.0;
  };
  std::vector<Component> comps(k);
  for (std::size_t c = 0; c < k; ++c) {
    Matrix members(sizes[c], d);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (partition.assignments[i] == c) {
        const auto src = points.row(i);
        std::copy(src.begin(), src.end(), members.row(r++).begin());
      }
    Matrix cov(d, d);
    Vector mean(d, 0.0);
    if (sizes[c] >= 2) {
      auto mc = mean_and_covariance(members);
      mean = std::move(mc.mean);
      cov = std::move(mc.covariance);
    } else {
      const auto src = members.row(0);
      mean.assign(src.begin(), src.end());
    }
    double mean_diag = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean_diag += cov(j, j);
    mean_diag /= static_cast<double>(d);
    double ridge = kCovarianceRidge * (mean_diag > 0.0 ? mean_diag : pooled_diag);
    Matrix chol;
    for (int tries = 0; tries < 20; ++tries, ridge *= 10.0) {
      Matrix reg = cov;
      for (std::size_t j = 0; j < d; ++j) reg(j, j) += ridge;
      chol = cholesky(reg);
      if (!chol.empty()) break;
    }
    require(!chol.empty(), ErrorKind::DegenerateCovariance, "cluster covariance cannot be regularized");
    double half_log_det = 0.0;
    for (std::size_t j = 0; j < d; ++j) half_log_det += std::log(chol(j, j));
    comps[c] = {std::move(mean), std::move(chol),
                std::log(static_cast<double>(sizes[c]) / static_cast<double>(n)), half_log_det};
  }

  MembershipMatrix out{Matrix(n, k), method, default_cluster_labels(method, k)};
  Vector logp(k), diff(d), z(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = points.row(i);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const Component& comp = comps[c];
      // Mahalanobis term via forward substitution with the Cholesky factor.
      for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - comp.mean[j];
      double maha = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double s = diff[j];
        for (std::size_t m = 0; m < j; ++m) s -= comp.chol(j, m) * z[m];
        z[j] = s / comp.chol(j, j);
        maha += z[j] * z[j];
      }
      logp[c] = comp.log_weight - comp.half_log_det - 0.5 * maha;
      peak = std::max(peak, logp[c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) sum += (out.probabilities(i, c) = std::exp(logp[c] - peak));
    for (std::size_t c = 0; c < k; ++c) out.probabilities(i, c) /= sum;
  }
  return out;
}

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  require(a.size() == b.size(), ErrorKind::SizeMismatch, "partitions cover different item counts");
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += choose2(count);
  for (const auto& [key, count] : rows) sum_rows += choose2(count);
  for (const auto& [key, count] : cols) sum_cols += choose2(count);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index - expected == 0.0) return 1.0;
  return (index - expected) / (max_index - expected);
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  return adjusted_rand_index(a.assignments, b.assignments);
}

std::vector<std::size_t> dense_labels(std::span<const int> labels) {
  std::map<int, std::size_t> index;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = index.try_emplace(l, index.size());
    out.push_back(it->second);
  }
  return out;
}

CoherenceReport membership_correlation(std::span<const MembershipMatrix> matrices) {
  require(!matrices.empty(), ErrorKind::EmptyInput, "no membership matrices");
  const std::size_t n = matrices.front().items();
  CoherenceReport report;
  std::vector<Vector> columns;
  for (std::size_t m = 0; m < matrices.size(); ++m) {
    const auto& mm = matrices[m];
    require(mm.items() == n, ErrorKind::SizeMismatch, "membership matrices cover different subjects");
    const auto labels = mm.cluster_labels.size() == mm.clusters()
                            ? mm.cluster_labels
                            : default_cluster_labels(mm.method.empty() ? "m" + std::to_string(m) : mm.method,
                                                     mm.clusters());
    for (std::size_t c = 0; c < mm.clusters(); ++c) {
      columns.push_back(mm.probabilities.col(c));
      report.columns.push_back({m, c});
      report.column_labels.push_back(labels[c]);
    }
  }

  const std::size_t total = columns.size();
  for (std::size_t i = 0; i < total; ++i) {
    const auto& c = columns[i];
    require(std::any_of(c.begin(), c.end(), [&](double v) { return v != c.front(); }),
            ErrorKind::ConstantColumn, "membership column '" + report.column_labels[i] + "' is constant");
  }
  report.correlation = Matrix(total, total);
  for (std::size_t i = 0; i < total; ++i) {
    report.correlation(i, i) = 1.0;
    for (std::size_t j = i + 1; j < total; ++j)
      report.correlation(i, j) = report.correlation(j, i) = pearson_correlation(columns[i], columns[j]);
  }

  std::vector<std::size_t> offset(matrices.size() + 1, 0);
  for (std::size_t m = 0; m < matrices.size(); ++m) offset[m + 1] = offset[m] + matrices[m].clusters();

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t ma = 0; ma < matrices.size(); ++ma) {
    for (std::size_t mb = ma + 1; mb < matrices.size(); ++mb) {
      struct Candidate {
        double r;
        std::size_t ca, cb;
      };
      std::vector<Candidate> cands;
      for (std::size_t ca = 0; ca < matrices[ma].clusters(); ++ca)
        for (std::size_t cb = 0; cb < matrices[mb].clusters(); ++cb)
          cands.push_back({report.correlation(offset[ma] + ca, offset[mb] + cb), ca, cb});
      std::stable_sort(cands.begin(), cands.end(),
                       [](const Candidate& x, const Candidate& y) { return x.r > y.r; });
      std::vector<bool> used_a(matrices[ma].clusters(), false), used_b(matrices[mb].clusters(), false);
      for (const auto& cand : cands) {
        if (used_a[cand.ca] || used_b[cand.cb]) continue;
        used_a[cand.ca] = used_b[cand.cb] = true;
        report.matches.push_back({{ma, cand.ca}, {mb, cand.cb}, cand.r});
        sum += cand.r;
        ++count;
      }
      for (std::size_t ca = 0; ca < used_a.size(); ++ca)
        if (!used_a[ca]) report.unmatched.push_back({{ma, ca}, mb});
      for (std::size_t cb = 0; cb < used_b.size(); ++cb)
        if (!used_b[cb]) report.unmatched.push_back({{mb, cb}, ma});
    }
  }
  if (count > 0) report.mean_matched = sum / static_cast<double>(count);
  return report;
}

}  // namespace deeptraj
