#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/linalg.hpp"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/recurrence.hpp"

namespace jmo {

/// Symmetric tridiagonal matrix with an optional corner coupling between
/// the first and last rows (periodic / antiperiodic boundary closure).
struct TridiagonalSpec {
  std::vector<double> diag;
  std::vector<double> off;  // one shorter than diag
  double corner = 0.0;
};

inline std::vector<double> symmetric_eigenvalues(const TridiagonalSpec& t) {
  const std::size_t n = t.diag.size();
  if (n == 0) return {};
  if (t.off.size() + 1 != n)
    throw DimensionMismatch("tridiagonal: off length must be size-1");
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = t.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m(i, i + 1) += t.off[i];
    m(i + 1, i) += t.off[i];
  }
  if (n >= 2) {
    // For n == 2 the corner lands on the same entry as the off-diagonal.
    m(0, n - 1) += t.corner;
    m(n - 1, 0) += t.corner;
  }
  return symmetric_eigen(m).values;
}

/// Magnitude scale for residual checks on the recurrence polynomials:
/// phi_N etc. grow like R^N with R a Gershgorin radius, and the product
/// of the a_n is 1 on the sum-zero space.
inline double residual_scale(const Potential& p) {
  const int n = p.period();
  double r = 0.0;
  for (int k = 1; k <= n; ++k)
    r = std::max(r, std::abs(p.bk(k)) + p.a(k) + p.a(k - 1));
  return 1.0 + std::pow(std::max(r, 1.0), n);
}

namespace detail {

inline TridiagonalSpec closed_period_matrix(const Potential& p, double corner) {
  const int n = p.period();
  TridiagonalSpec t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.resize(static_cast<std::size_t>(n - 1));
  for (int k = 1; k <= n; ++k) t.diag[static_cast<std::size_t>(k - 1)] = p.bk(k);
  for (int k = 1; k < n; ++k) t.off[static_cast<std::size_t>(k - 1)] = p.a(k);
  t.corner = corner;
  return t;
}

// Extended-precision evaluation of the first-kind (phi) or second-kind
// (theta) solution and its lambda-derivative at the boundary index used for
// root solving. The double-precision recursion leaves a rounding floor in
// phi_N that downstream identities amplify by theta_{N+1}/phi_{N+1}, so the
// Newton polish of nu_n and mu_n runs in long double.
struct BoundaryValueLD {
  long double value = 0.0L;
  long double dvalue = 0.0L;
};

inline BoundaryValueLD boundary_solution_ld(const Potential& p,
                                            long double lambda, bool phi) {
  const int n = p.period();
  long double ym = phi ? 0.0L : 1.0L;   // y_0
  long double y = phi ? 1.0L : 0.0L;    // y_1
  long double dym = 0.0L, dy = 0.0L;
  const int last = phi ? n : n + 1;
  for (int j = 1; j < last; ++j) {
    const long double aj = std::exp(static_cast<long double>(p.xk(j)));
    const long double ajm = std::exp(static_cast<long double>(p.xk(j - 1)));
    const long double bj = static_cast<long double>(p.bk(j));
    const long double yn = ((lambda - bj) * y - ajm * ym) / aj;
    const long double dyn = ((lambda - bj) * dy + y - ajm * dym) / aj;
    ym = y;
    y = yn;
    dym = dy;
    dy = dyn;
  }
  return {y, dy};
}

inline double polish_root_ld(const Potential& p, double z, bool phi) {
  long double x = z;
  for (int it = 0; it < 4; ++it) {
    const BoundaryValueLD v = boundary_solution_ld(p, x, phi);
    if (v.dvalue == 0.0L) break;
    const long double step = v.value / v.dvalue;
    x -= step;
    if (std::abs(static_cast<double>(step)) <
        1e-18 * (1.0 + std::abs(static_cast<double>(x))))
      break;
  }
  return static_cast<double>(x);
}

// One guarded Newton polish for a simple root of f, staying inside [lo, hi].
template <typename F, typename DF>
inline double polish_root(double z, double lo, double hi, F&& f, DF&& df) {
  for (int it = 0; it < 3; ++it) {
    const double d = df(z);
    if (d == 0.0) break;
    const double step = f(z) / d;
    const double znew = z - step;
    if (!(znew >= lo && znew <= hi)) break;
    z = znew;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  return z;
}

}  // namespace detail

/// All 2N roots of Delta^2 = 1, sorted ascending: the union of the
/// eigenvalues of the periodic (corner +a_N) and antiperiodic (corner -a_N)
/// closures. Position 0 is the bottom of the spectrum and position 2N-1 the
/// top; interior positions pair up as gap endpoints.
inline std::vector<double> band_edges(const Potential& p) {
  validate(p);
  const int n = p.period();
  const double an = p.a(n);
  std::vector<double> edges = symmetric_eigenvalues(detail::closed_period_matrix(p, an));
  std::vector<double> anti = symmetric_eigenvalues(detail::closed_period_matrix(p, -an));
  edges.insert(edges.end(), anti.begin(), anti.end());
  std::sort(edges.begin(), edges.end());

  const double scale = residual_scale(p);
  for (double e : edges) {
    const DiscriminantValue d = discriminant(p, e);
    if (std::abs(d.delta * d.delta - 1.0) > 1e-9 * scale)
      throw ResidualTooLarge("band edge fails Delta^2 = 1 residual check");
  }
  // Bands have positive length; only gaps may degenerate.
  for (int m = 0; m + 1 < n; ++m) {
    if (!(edges[static_cast<std::size_t>(2 * m)] <
          edges[static_cast<std::size_t>(2 * m + 1)]))
      throw OrderingViolation("degenerate band in edge chain");
  }
  return edges;
}

/// Dirichlet eigenvalues: zeros of phi_N, i.e. the spectrum of the
/// (N-1)-truncated tridiagonal matrix diag(b_1..b_{N-1}), off(a_1..a_{N-2}).
inline std::vector<double> dirichlet_eigenvalues(const Potential& p) {
  validate(p);
  const int n = p.period();
  TridiagonalSpec t;
  for (int k = 1; k <= n - 1; ++k) t.diag.push_back(p.bk(k));
  for (int k = 1; k <= n - 2; ++k) t.off.push_back(p.a(k));
  std::vector<double> nu = symmetric_eigenvalues(t);

  const double scale = residual_scale(p);
  for (double& z : nu) {
    z = detail::polish_root_ld(p, z, true);
    const double r =
        evaluate_solutions(p, z).phi[static_cast<std::size_t>(n)];
    if (std::abs(r) > 1e-9 * scale)
      throw ResidualTooLarge("Dirichlet eigenvalue fails phi_N residual");
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

/// Neumann eigenvalues: zeros of theta_{N+1}, i.e. the spectrum of the
/// shifted truncation diag(b_2..b_N), off(a_2..a_{N-1}).
inline std::vector<double> neumann_eigenvalues(const Potential& p) {
  validate(p);
  const int n = p.period();
  TridiagonalSpec t;
  for (int k = 2; k <= n; ++k) t.diag.push_back(p.bk(k));
  for (int k = 2; k <= n - 1; ++k) t.off.push_back(p.a(k));
  std::vector<double> mu = symmetric_eigenvalues(t);

  const double scale = residual_scale(p);
  for (double& z : mu) {
    z = detail::polish_root_ld(p, z, false);
    const double r =
        evaluate_solutions(p, z).theta[static_cast<std::size_t>(n + 1)];
    if (std::abs(r) > 1e-9 * scale)
      throw ResidualTooLarge("Neumann eigenvalue fails theta_{N+1} residual");
  }
  std::sort(mu.begin(), mu.end());
  return mu;
}

inline bool gap_is_closed(const std::vector<double>& edges, int n1based) {
  const double lo = edges[static_cast<std::size_t>(2 * n1based - 1)];
  const double hi = edges[static_cast<std::size_t>(2 * n1based)];
  double m = 0.0;
  for (double e : edges) m = std::max(m, std::abs(e));
  return hi - lo <= 1e-10 * (1.0 + m);
}

/// Critical points of Delta, one per gap closure: on a closed gap the double
/// edge itself, otherwise the unique interior root of Delta' bracketed by
/// the gap endpoints (Delta has an extremum of magnitude >= 1 there).
inline std::vector<double> critical_points(const Potential& p,
                                           const std::vector<double>& edges) {
  const int n = p.period();
  std::vector<double> crit;
  crit.reserve(static_cast<std::size_t>(n - 1));
  double escale = 0.0;
  for (double e : edges) escale = std::max(escale, std::abs(e));

  for (int g = 1; g <= n - 1; ++g) {
    const double lo = edges[static_cast<std::size_t>(2 * g - 1)];
    const double hi = edges[static_cast<std::size_t>(2 * g)];
    if (gap_is_closed(edges, g)) {
      crit.push_back(lo);
      continue;
    }
    double fl = discriminant(p, lo).ddelta;
    double fh = discriminant(p, hi).ddelta;
    if (fl == 0.0) {
      crit.push_back(lo);
      continue;
    }
    if (fh == 0.0) {
      crit.push_back(hi);
      continue;
    }
    if (fl * fh > 0.0)
      throw BracketFailure("Delta' has no sign change on the gap");
    double a = lo, b = hi;
    for (int it = 0; it < 80 && (b - a) > 1e-15 * (1.0 + escale); ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = discriminant(p, mid).ddelta;
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if (fl * fm < 0.0) {
        b = mid;
      } else {
        a = mid;
        fl = fm;
      }
    }
    double z = 0.5 * (a + b);
    z = detail::polish_root(
        z, lo, hi, [&](double l) { return discriminant(p, l).ddelta; },
        [&](double l) { return discriminant(p, l).d2delta; });
    crit.push_back(z);
  }
  return crit;
}

/// All spectral landmarks of a potential, with closed gaps snapped to a
/// single deterministic value (the double edge).
struct SpectralData {
  std::vector<double> edges;  // 2N values
  std::vector<double> nu, mu, crit;
  std::vector<bool> gap_closed;

  double gap_lo(int n1based) const {
    return edges[static_cast<std::size_t>(2 * n1based - 1)];
  }
  double gap_hi(int n1based) const {
    return edges[static_cast<std::size_t>(2 * n1based)];
  }
  double width() const { return edges.back() - edges.front(); }
};

inline SpectralData compute_spectrum(const Potential& p) {
  const int n = p.period();
  SpectralData s;
  s.edges = band_edges(p);
  s.nu = dirichlet_eigenvalues(p);
  s.mu = neumann_eigenvalues(p);
  s.crit = critical_points(p, s.edges);
  s.gap_closed.resize(static_cast<std::size_t>(n - 1));
  for (int g = 1; g <= n - 1; ++g) {
    const bool closed = gap_is_closed(s.edges, g);
    s.gap_closed[static_cast<std::size_t>(g - 1)] = closed;
    if (closed) {
      const double e = s.gap_lo(g);
      s.nu[static_cast<std::size_t>(g - 1)] = e;
      s.mu[static_cast<std::size_t>(g - 1)] = e;
      s.crit[static_cast<std::size_t>(g - 1)] = e;
    }
  }
  return s;
}

}  // namespace jmo
