#include "deeptraj/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "deeptraj/error.hpp"

namespace deeptraj {

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::SizeMismatch, "correlation inputs differ in length");
  require(a.size() >= 2, ErrorKind::TooFewPoints, "correlation needs at least two observations");
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  require(saa > 0.0 && sbb > 0.0, ErrorKind::ConstantVector, "correlation input has zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

MeanCovariance mean_and_covariance(const Matrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  require(n >= 2, ErrorKind::TooFewPoints, "covariance needs at least two points");
  MeanCovariance out{Vector(d, 0.0), Matrix(d, d)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.mean[j] += points(i, j);
  for (double& m : out.mean) m /= static_cast<double>(n);

  Vector centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centered[j] = points(i, j) - out.mean[j];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r; c < d; ++c) out.covariance(r, c) += centered[r] * centered[c];
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c) {
      out.covariance(r, c) /= denom;
      out.covariance(c, r) = out.covariance(r, c);
    }
  return out;
}

EigenDecomposition symmetric_eigen(const Matrix& symmetric, double tolerance, int max_sweeps) {
  require(symmetric.rows() == symmetric.cols(), ErrorKind::ShapeMismatch,
          "eigendecomposition needs a square matrix");
  const std::size_t n = symmetric.rows();
  Matrix a = symmetric;
  Matrix v = Matrix::identity(n);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return s;
  };
  double scale = 0.0;
  for (double x : a.values()) scale += x * x;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal() <= tolerance * tolerance * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

Matrix top_principal_directions(const Matrix& points, std::size_t m) {
  const std::size_t d = points.cols();
  require(m >= 1 && m <= d, ErrorKind::InvalidArgument, "need 1 <= m <= dimension");
  const auto stats = mean_and_covariance(points);
  const auto eig = symmetric_eigen(stats.covariance);
  const double largest = std::max(eig.values.front(), 0.0);
  require(eig.values[m - 1] > 1e-12 * largest && eig.values[m - 1] > 0.0,
          ErrorKind::DegenerateCovariance, "covariance has fewer positive eigenvalues than requested");

  Matrix out(d, m);
  for (std::size_t j = 0; j < m; ++j) {
    // Sign convention: the largest-magnitude component is positive.
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < d; ++k)
      if (std::abs(eig.vectors(k, j)) > std::abs(eig.vectors(pivot, j))) pivot = k;
    const double sign = eig.vectors(pivot, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < d; ++k) out(k, j) = sign * eig.vectors(k, j);
  }
  return out;
}

Matrix orthonormal_basis(const Matrix& a) {
  Matrix q = a;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    const double original = norm(a.col(j));
    // Two passes of modified Gram-Schmidt keep orthogonality at machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        double proj = 0.0;
        for (std::size_t k = 0; k < q.rows(); ++k) proj += q(k, i) * q(k, j);
        for (std::size_t k = 0; k < q.rows(); ++k) q(k, j) -= proj * q(k, i);
      }
    }
    const double len = norm(q.col(j));
    require(len > 1e-12 * std::max(original, 1e-300), ErrorKind::DegenerateCovariance,
            "columns are linearly dependent");
    for (std::size_t k = 0; k < q.rows(); ++k) q(k, j) /= len;
  }
  return q;
}

double largest_principal_angle(const Matrix& basis_a, const Matrix& basis_b) {
  require(basis_a.rows() == basis_b.rows(), ErrorKind::ShapeMismatch,
          "subspace bases live in different ambient dimensions");
  const Matrix cross = basis_a.transpose() * basis_b;
  const auto eig = symmetric_eigen(cross.transpose() * cross);
  const double smallest = std::max(eig.values.back(), 0.0);
  return std::acos(std::clamp(std::sqrt(smallest), 0.0, 1.0));
}

Matrix cholesky(const Matrix& spd) {
  const std::size_t n = spd.rows();
  Matrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) return {};
    lower(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / lower(j, j);
    }
  }
  return lower;
}

Vector cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= lower(k, i) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

}  // namespace deeptraj
