#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace graphfool {

/// Dense row-major matrix of doubles.
///
/// Everything in this project runs in 64-bit floating point: the boundary
/// distance ranking divides by gradient norms that can be small, and the
/// ordering of candidate edges is not stable in single precision.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard matrix product. Throws std::invalid_argument on inner-dimension
/// mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

/// Entrywise sum/difference/scaling. Shape mismatch throws.
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double s);

/// Entrywise max(0, x).
Matrix relu(const Matrix& m);

/// Row-wise softmax with per-row max subtraction, so confident logits do not
/// overflow. Each output row sums to 1.
Matrix row_softmax(const Matrix& m);

/// Signum: -1, 0 or +1. sign(0) = 0 so a zero perturbation entry never flips
/// an edge.
inline double sign(double x) { return (x > 0.0) ? 1.0 : (x < 0.0) ? -1.0 : 0.0; }

/// Frobenius norm of m viewed as a flat vector.
double frobenius_norm(const Matrix& m);

double max_abs(const Matrix& m);

bool all_finite(const Matrix& m);

/// Central-difference gradient of a scalar function of a matrix:
/// (f(m + eps e_ij) - f(m - eps e_ij)) / (2 eps) per entry.
///
/// Test oracle for the analytic adjacency gradients; keep it independent of
/// any analytic path it checks. Throws if f produces a non-finite value or
/// eps <= 0.
Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f,
                        const Matrix& m, double eps);

}  // namespace graphfool
