#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/potential.hpp"

namespace jmo {

/// Values of the fundamental solutions phi, theta of the three-term
/// recurrence a_{j-1} y_{j-1} + b_j y_j + a_j y_{j+1} = lambda y_j along
/// indices 0..N+1, with optional lambda-derivative tables up to order 2.
/// Initial conditions: phi_0 = theta_1 = 0, phi_1 = theta_0 = 1.
struct SolutionTable {
  double lambda = 0.0;
  int deriv_order = 0;
  std::vector<double> phi, theta;      // index j = 0..N+1
  std::vector<double> dphi, dtheta;    // first lambda-derivative
  std::vector<double> d2phi, d2theta;  // second lambda-derivative
};

struct DiscriminantValue {
  double delta = 0.0;    // Delta(lambda)
  double ddelta = 0.0;   // Delta'(lambda)
  double d2delta = 0.0;  // Delta''(lambda)
};

namespace detail {

// One forward pass: y_{j+1} = ((lambda - b_j) y_j - a_{j-1} y_{j-1}) / a_j,
// j = 1..N, with a_0 = a_N. The derivative tables satisfy the differentiated
// recurrence with source terms src(j) added on the right-hand side of
// a_j y_{j+1} = (lambda - b_j) y_j - a_{j-1} y_{j-1} + src(j).
template <typename Source>
inline void forward_pass(const Potential& p, double lambda,
                         std::vector<double>& y, Source&& src) {
  const int n = p.period();
  for (int j = 1; j <= n; ++j) {
    y[static_cast<std::size_t>(j + 1)] =
        ((lambda - p.bk(j)) * y[static_cast<std::size_t>(j)] -
         p.a(j - 1) * y[static_cast<std::size_t>(j - 1)] + src(j)) /
        p.a(j);
  }
}

}  // namespace detail

inline SolutionTable evaluate_solutions(const Potential& p, double lambda,
                                        int deriv_order = 0) {
  const int n = p.period();
  const std::size_t len = static_cast<std::size_t>(n + 2);
  SolutionTable t;
  t.lambda = lambda;
  t.deriv_order = deriv_order;
  t.phi.assign(len, 0.0);
  t.theta.assign(len, 0.0);
  t.phi[1] = 1.0;
  t.theta[0] = 1.0;
  detail::forward_pass(p, lambda, t.phi, [](int) { return 0.0; });
  detail::forward_pass(p, lambda, t.theta, [](int) { return 0.0; });
  if (deriv_order >= 1) {
    t.dphi.assign(len, 0.0);
    t.dtheta.assign(len, 0.0);
    detail::forward_pass(p, lambda, t.dphi,
                         [&](int j) { return t.phi[static_cast<std::size_t>(j)]; });
    detail::forward_pass(p, lambda, t.dtheta,
                         [&](int j) { return t.theta[static_cast<std::size_t>(j)]; });
  }
  if (deriv_order >= 2) {
    t.d2phi.assign(len, 0.0);
    t.d2theta.assign(len, 0.0);
    detail::forward_pass(p, lambda, t.d2phi, [&](int j) {
      return 2.0 * t.dphi[static_cast<std::size_t>(j)];
    });
    detail::forward_pass(p, lambda, t.d2theta, [&](int j) {
      return 2.0 * t.dtheta[static_cast<std::size_t>(j)];
    });
  }
  return t;
}

inline DiscriminantValue discriminant(const Potential& p, double lambda) {
  const int n = p.period();
  const SolutionTable t = evaluate_solutions(p, lambda, 2);
  DiscriminantValue d;
  const std::size_t np1 = static_cast<std::size_t>(n + 1);
  const std::size_t nn = static_cast<std::size_t>(n);
  d.delta = 0.5 * (t.phi[np1] + t.theta[nn]);
  d.ddelta = 0.5 * (t.dphi[np1] + t.dtheta[nn]);
  d.d2delta = 0.5 * (t.d2phi[np1] + t.d2theta[nn]);
  return d;
}

/// {f, g}_k = a_k (f_k g_{k+1} - f_{k+1} g_k), with a_0 identified with a_N.
inline double wronskian(const Potential& p, std::span<const double> f,
                        std::span<const double> g, int k) {
  if (k < 0 || static_cast<std::size_t>(k + 1) >= f.size() ||
      static_cast<std::size_t>(k + 1) >= g.size())
    throw IndexOutOfRange("wronskian: index k out of range");
  const std::size_t i = static_cast<std::size_t>(k);
  return p.a(k) * (f[i] * g[i + 1] - f[i + 1] * g[i]);
}

/// Coordinate derivatives of phi and theta, obtained by forward
/// differentiation of the recurrence. Differentiating in x_k inserts the
/// source -a_k (delta_{j,k} y_{k+1} + delta_{j,k+1} y_k) plus the wrap term
/// -a_N delta_{k,N} delta_{j,1} y_0 coming from a_0 = a_N; differentiating
/// in b_k inserts -delta_{j,k} y_k. Optionally also the mixed
/// lambda-derivative of each table (needed for the gradient of Delta').
struct QGradientTables {
  // Outer index k-1 for k = 1..N; inner index j = 0..N+1.
  std::vector<std::vector<double>> dphi_x, dphi_b, dtheta_x, dtheta_b;
  // Mixed d/dlambda of the above; filled when requested.
  std::vector<std::vector<double>> dphi_x_l, dphi_b_l, dtheta_x_l, dtheta_b_l;
};

inline QGradientTables q_gradient_solutions(const Potential& p, double lambda,
                                            bool with_lambda_derivative = false) {
  const int n = p.period();
  const std::size_t len = static_cast<std::size_t>(n + 2);
  const int order = with_lambda_derivative ? 1 : 0;
  const SolutionTable t = evaluate_solutions(p, lambda, order);

  QGradientTables g;
  auto alloc = [&](std::vector<std::vector<double>>& v) {
    v.assign(static_cast<std::size_t>(n), std::vector<double>(len, 0.0));
  };
  alloc(g.dphi_x);
  alloc(g.dphi_b);
  alloc(g.dtheta_x);
  alloc(g.dtheta_b);
  if (with_lambda_derivative) {
    alloc(g.dphi_x_l);
    alloc(g.dphi_b_l);
    alloc(g.dtheta_x_l);
    alloc(g.dtheta_b_l);
  }

  for (int k = 1; k <= n; ++k) {
    const std::size_t ki = static_cast<std::size_t>(k - 1);
    const double ak = p.a(k);

    auto src_x = [k, n, ak](const std::vector<double>& y) {
      return [yp = &y, k, n, ak](int j) {
        double s = 0.0;
        if (j == k) s += (*yp)[static_cast<std::size_t>(k + 1)];
        if (j == k + 1) s += (*yp)[static_cast<std::size_t>(k)];
        if (k == n && j == 1) s += (*yp)[0];
        return -ak * s;
      };
    };
    auto src_b = [k](const std::vector<double>& y) {
      return [yp = &y, k](int j) {
        return (j == k) ? -(*yp)[static_cast<std::size_t>(k)] : 0.0;
      };
    };

    detail::forward_pass(p, lambda, g.dphi_x[ki], src_x(t.phi));
    detail::forward_pass(p, lambda, g.dtheta_x[ki], src_x(t.theta));
    detail::forward_pass(p, lambda, g.dphi_b[ki], src_b(t.phi));
    detail::forward_pass(p, lambda, g.dtheta_b[ki], src_b(t.theta));

    if (with_lambda_derivative) {
      // d/dlambda of the q-gradient recurrence: the plain q-gradient enters
      // as an extra source, and the original source is evaluated on the
      // lambda-derivative tables.
      auto mixed = [](const std::vector<double>& grad, auto base_src) {
        return [gp = &grad, base_src](int j) {
          return (*gp)[static_cast<std::size_t>(j)] + base_src(j);
        };
      };
      detail::forward_pass(p, lambda, g.dphi_x_l[ki],
                           mixed(g.dphi_x[ki], src_x(t.dphi)));
      detail::forward_pass(p, lambda, g.dtheta_x_l[ki],
                           mixed(g.dtheta_x[ki], src_x(t.dtheta)));
      detail::forward_pass(p, lambda, g.dphi_b_l[ki],
                           mixed(g.dphi_b[ki], src_b(t.dphi)));
      detail::forward_pass(p, lambda, g.dtheta_b_l[ki],
                           mixed(g.dtheta_b[ki], src_b(t.dtheta)));
    }
  }
  return g;
}

}  // namespace jmo
