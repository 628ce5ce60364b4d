#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace deeptraj {

using Vector = std::vector<double>;

/**
 * Dense row-major matrix of doubles.
 *
 * Used for every weight tensor (biases are n x 1 matrices) and for point
 * sets, where each row is one observation.
 */
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of row-major `data`; throws ShapeMismatch if the size is
  /// not rows*cols and NonFiniteValue if any entry is not finite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  /// Nested-list constructor, one inner list per row.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector col(std::size_t c) const;

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transpose() const;
  bool all_finite() const noexcept;
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  void fill(double value);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// out += m * x
void gemv_acc(const Matrix& m, std::span<const double> x, std::span<double> out);
/// out += m^T * x
void gemv_t_acc(const Matrix& m, std::span<const double> x, std::span<double> out);
/// m += a * b^T
void outer_acc(std::span<const double> a, std::span<const double> b, Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

}  // namespace deeptraj
