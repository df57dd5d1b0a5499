#include "graphfool/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace graphfool {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch " +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()));
  }
  Matrix out(a.rows(), b.cols());
  // ikj order keeps the inner loop contiguous in b and out.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

namespace {
void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}
}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "add");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  check_same_shape(a, b, "sub");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Matrix scale(const Matrix& m, double s) {
  Matrix out = m;
  for (double& x : out.data()) x *= s;
  return out;
}

Matrix relu(const Matrix& m) {
  Matrix out = m;
  for (double& x : out.data()) x = std::max(0.0, x);
  return out;
}

Matrix row_softmax(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m.cols(); ++j) row_max = std::max(row_max, m(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out(i, j) = std::exp(m(i, j) - row_max);
      denom += out(i, j);
    }
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) /= denom;
  }
  return out;
}

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc += x * x;
  return std::sqrt(acc);
}

double max_abs(const Matrix& m) {
  double acc = 0.0;
  for (double x : m.data()) acc = std::max(acc, std::abs(x));
  return acc;
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](double x) { return std::isfinite(x); });
}

Matrix finite_diff_grad(const std::function<double(const Matrix&)>& f,
                        const Matrix& m, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("finite_diff_grad: eps must be > 0");
  Matrix grad(m.rows(), m.cols());
  Matrix probe = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double saved = probe(i, j);
      probe(i, j) = saved + eps;
      const double up = f(probe);
      probe(i, j) = saved - eps;
      const double down = f(probe);
      probe(i, j) = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw std::runtime_error("finite_diff_grad: non-finite function value");
      }
      grad(i, j) = (up - down) / (2.0 * eps);
    }
  }
  return grad;
}

}  // namespace graphfool
