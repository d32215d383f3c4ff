#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/gradients.hpp"
#include "jacobi_mo/linalg.hpp"
#include "jacobi_mo/mo_map.hpp"
#include "jacobi_mo/potential.hpp"

namespace jmo {

struct InverseOptions {
  double tol = 1e-10;      // residual inf-norm target
  int max_newton = 50;     // per homotopy leg
  int homotopy_steps = 8;  // doubled on failure, up to the cap
  int max_homotopy_steps = 256;
  double backtrack = 0.5;
  double min_step = 9.313225746154785e-10;  // 2^-30
};

struct InverseResult {
  Potential q;
  double residual = 0.0;
  int newton_iterations = 0;
  std::vector<std::pair<double, double>> homotopy_path;  // (s, residual)
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::optional<double> try_residual(const FreeCoords& u, int np,
                                          const std::vector<double>& target) {
  try {
    std::vector<double> f = mo_map_free(u, np);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] -= target[j];
    const double r = inf_norm(f);
    if (!std::isfinite(r)) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Recover the potential whose MO data equals `target` (packed order), by
/// damped Newton iteration along the straight homotopy s * target, s: 0 -> 1.
/// The start point q = 0 is canonical since the map sends 0 to 0, and every
/// intermediate target lies in the image because the map is onto R^{2N-2}.
inline InverseResult solve_inverse(const std::vector<double>& target, int np,
                                   const InverseOptions& opts = {}) {
  if (np < 2) throw PeriodTooSmall("period must be at least 2");
  const std::size_t dim = static_cast<std::size_t>(2 * np - 2);
  if (target.size() != dim)
    throw DimensionMismatch("target psi must have length 2N-2");

  std::vector<std::pair<double, double>> last_path;

  for (int steps = opts.homotopy_steps; steps <= opts.max_homotopy_steps;
       steps *= 2) {
    FreeCoords u(dim, 0.0);
    std::vector<std::pair<double, double>> path;
    int total_newton = 0;
    bool stalled = false;

    for (int leg = 1; leg <= steps && !stalled; ++leg) {
      const double s = static_cast<double>(leg) / steps;
      std::vector<double> t(dim);
      for (std::size_t j = 0; j < dim; ++j) t[j] = s * target[j];

      bool converged = false;
      for (int it = 0; it < opts.max_newton; ++it) {
        std::vector<double> f = mo_map_free(u, np);
        for (std::size_t j = 0; j < dim; ++j) f[j] -= t[j];
        const double r = detail::inf_norm(f);
        if (r <= opts.tol) {
          converged = true;
          break;
        }
        ++total_newton;
        const MOJacobian jac = mo_jacobian(embed(u, np));
        std::vector<double> rhs(dim);
        for (std::size_t j = 0; j < dim; ++j) rhs[j] = -f[j];
        const std::vector<double> step = lu_solve(jac.matrix, rhs);

        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= opts.min_step) {
          FreeCoords trial = u;
          for (std::size_t j = 0; j < dim; ++j) trial[j] += alpha * step[j];
          const std::optional<double> rt = detail::try_residual(trial, np, t);
          if (rt && *rt < r) {
            u = trial;
            accepted = true;
            break;
          }
          alpha *= opts.backtrack;
        }
        if (!accepted) break;  // line search hit the minimum step
      }

      if (converged) {
        path.emplace_back(s, *detail::try_residual(u, np, t));
      } else {
        path.emplace_back(s, detail::try_residual(u, np, t).value_or(
                                 std::numeric_limits<double>::infinity()));
        stalled = true;
      }
    }

    if (!stalled) {
      InverseResult res;
      res.q = embed(u, np);
      res.newton_iterations = total_newton;
      res.homotopy_path = std::move(path);
      std::vector<double> f = mo_map_free(u, np);
      for (std::size_t j = 0; j < dim; ++j) f[j] -= target[j];
      res.residual = detail::inf_norm(f);
      return res;
    }
    last_path = std::move(path);
  }

  throw HomotopyStalled(
      "newton continuation stalled below the minimum step at " +
          std::to_string(last_path.empty() ? 0.0 : last_path.back().first),
      last_path);
}

/// Self-consistency distance ||p - solve_inverse(mo_map(p))|| in the free
/// chart; the global-isomorphism property says this is zero up to solver
/// tolerance.
inline double roundtrip_check(const Potential& p, const InverseOptions& opts = {}) {
  const InverseResult r = solve_inverse(mo_map(p), p.period(), opts);
  const FreeCoords a = project(p);
  const FreeCoords b = project(r.q);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace jmo
