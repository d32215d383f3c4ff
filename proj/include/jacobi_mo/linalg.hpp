#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "jacobi_mo/errors.hpp"

namespace jmo {

/// Dense square matrix, row-major. Sized for desk-scale problems (N <= 64),
/// so no blocking or sparsity anywhere.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * n_ + j];
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]
};

/// Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Each eigenpair is residual-checked against the input matrix.
inline EigenDecomposition symmetric_eigen(const Matrix& m) {
  const std::size_t n = m.size();
  Matrix a = m;
  Matrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  const double norm = std::max(m.frobenius_norm(), 1e-300);
  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * norm) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps)
    throw ConvergenceFailure("jacobi rotation sweep cap exceeded");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition e;
  e.values.resize(n);
  e.vectors = Matrix(n);
  for (std::size_t j = 0; j < n; ++j) {
    e.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) e.vectors(i, j) = v(i, order[j]);
  }

  for (std::size_t j = 0; j < n; ++j) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mv = 0.0;
      for (std::size_t k = 0; k < n; ++k) mv += m(i, k) * e.vectors(k, j);
      const double r = mv - e.values[j] * e.vectors(i, j);
      r2 += r * r;
    }
    if (std::sqrt(r2) > 1e-10 * std::max(norm, 1.0))
      throw ConvergenceFailure("eigenpair residual above tolerance");
  }
  return e;
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw LengthMismatch("lu_solve: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300)
      throw SingularJacobian("lu_solve: zero pivot");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(piv, k));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return x;
}

/// Extreme singular values via the spectrum of A^T A.
inline std::pair<double, double> singular_value_range(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix ata(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
      ata(i, j) = s;
    }
  const EigenDecomposition e = symmetric_eigen(ata);
  const double lo = std::sqrt(std::max(0.0, e.values.front()));
  const double hi = std::sqrt(std::max(0.0, e.values.back()));
  return {lo, hi};
}

}  // namespace jmo
