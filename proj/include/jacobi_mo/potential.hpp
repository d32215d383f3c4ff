#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "jacobi_mo/errors.hpp"

namespace jmo {

/// A point of the sum-zero coefficient space: diagonal entries b_n and
/// logarithmic off-diagonal entries x_n (so a_n = e^{x_n} > 0 always),
/// both N-periodic with zero mean. Sequences are 1-based in formulas;
/// storage is 0-based with x[k-1] holding x_k. Immutable by convention
/// after construction.
struct Potential {
  std::vector<double> x;
  std::vector<double> b;

  int period() const { return static_cast<int>(x.size()); }

  // 1-based cyclic accessors, k = 0 identified with k = N.
  double a(int k) const {
    const int n = period();
    if (k == 0) k = n;
    return std::exp(x[static_cast<std::size_t>(k - 1)]);
  }
  double xk(int k) const {
    const int n = period();
    if (k == 0) k = n;
    return x[static_cast<std::size_t>(k - 1)];
  }
  double bk(int k) const {
    const int n = period();
    if (k == 0) k = n;
    return b[static_cast<std::size_t>(k - 1)];
  }
};

/// Free chart on the sum-zero space: u = (x_1..x_{N-1}, b_1..b_{N-1}),
/// with the N-th coordinates dependent.
using FreeCoords = std::vector<double>;

inline void validate(const Potential& p) {
  const int n = p.period();
  if (n < 2) throw PeriodTooSmall("period must be at least 2");
  if (static_cast<int>(p.b.size()) != n)
    throw DimensionMismatch("x and b lengths differ");
  double sx = 0.0, sb = 0.0;
  for (int k = 0; k < n; ++k) {
    sx += p.x[static_cast<std::size_t>(k)];
    sb += p.b[static_cast<std::size_t>(k)];
  }
  const double tol = 1e-12 * n;
  if (std::abs(sx) > tol) throw SumNotZero("sum of x entries is not zero");
  if (std::abs(sb) > tol) throw SumNotZero("sum of b entries is not zero");
}

inline Potential embed(const FreeCoords& u, int n) {
  if (n < 2) throw PeriodTooSmall("period must be at least 2");
  if (static_cast<int>(u.size()) != 2 * n - 2)
    throw DimensionMismatch("free coordinates must have length 2N-2");
  Potential p;
  p.x.assign(static_cast<std::size_t>(n), 0.0);
  p.b.assign(static_cast<std::size_t>(n), 0.0);
  double sx = 0.0, sb = 0.0;
  for (int k = 0; k < n - 1; ++k) {
    p.x[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)];
    p.b[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(n - 1 + k)];
    sx += u[static_cast<std::size_t>(k)];
    sb += u[static_cast<std::size_t>(n - 1 + k)];
  }
  p.x[static_cast<std::size_t>(n - 1)] = -sx;
  p.b[static_cast<std::size_t>(n - 1)] = -sb;
  return p;
}

inline FreeCoords project(const Potential& p) {
  const int n = p.period();
  FreeCoords u(static_cast<std::size_t>(2 * n - 2));
  for (int k = 0; k < n - 1; ++k) {
    u[static_cast<std::size_t>(k)] = p.x[static_cast<std::size_t>(k)];
    u[static_cast<std::size_t>(n - 1 + k)] = p.b[static_cast<std::size_t>(k)];
  }
  return u;
}

/// Deterministic test-corpus generator: entries uniform in [-scale, scale],
/// then mean-subtracted per sequence so the result validates exactly.
inline Potential random_potential(int n, double scale, std::uint64_t seed) {
  if (n < 2) throw PeriodTooSmall("period must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  Potential p;
  p.x.resize(static_cast<std::size_t>(n));
  p.b.resize(static_cast<std::size_t>(n));
  for (auto& v : p.x) v = dist(rng);
  for (auto& v : p.b) v = dist(rng);
  for (auto* seq : {&p.x, &p.b}) {
    double mean = 0.0;
    for (double v : *seq) mean += v;
    mean /= n;
    for (auto& v : *seq) v -= mean;
  }
  return p;
}

}  // namespace jmo
