#pragma once

#include <cmath>
#include <vector>

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/recurrence.hpp"
#include "jacobi_mo/spectrum.hpp"

namespace jmo {

/// The Marchenko-Ostrovsky data per gap: the norming constant psi_{1,n},
/// the signed companion psi_{2,n}, the slit height |psi_n| and xi = |psi_n|^2.
struct MOData {
  std::vector<double> psi1, psi2, height, xi;  // length N-1 each
};

namespace detail {

inline int parity_sign(int n_period, int n_gap) {
  return ((n_period - n_gap) % 2 == 0) ? 1 : -1;
}

}  // namespace detail

/// psi_{1,n} = log((-1)^{N-n} phi_{N+1}(nu_n)). The argument is positive for
/// a genuine Dirichlet eigenvalue (it equals e^{psi_1} > 0); arguments within
/// 1e-12 of 1 are snapped to 1 so exactly-closed gaps give exactly 0.
inline double norming_constant(const Potential& p, double nu_n, int n) {
  const int np = p.period();
  const SolutionTable t = evaluate_solutions(p, nu_n, 1);
  const std::size_t jn = static_cast<std::size_t>(np);
  // First-order root-offset correction: nu_n carries the rounding floor of
  // the phi_N evaluation, and the residual phi_N(nu_n) is amplified by
  // theta_{N+1}/phi_{N+1} in downstream identities. Shifting phi_{N+1} to
  // the exact zero of phi_N cancels the first-order error.
  double corrected = t.phi[jn + 1];
  if (t.dphi[jn] != 0.0)
    corrected -= t.dphi[jn + 1] * t.phi[jn] / t.dphi[jn];
  double arg = detail::parity_sign(np, n) * corrected;
  if (arg <= 0.0)
    throw NonPositiveArgument("norming constant: sign of phi_{N+1}(nu_n) is wrong");
  if (arg >= 1.0 - 1e-12 && arg < 1.0) arg = 1.0;
  return std::log(arg);
}

/// |psi_n| = arcosh((-1)^{N-n} Delta(lambda_n)); 0 on closed gaps.
inline double slit_height(const Potential& p, double lambda_n, int n) {
  const double v = detail::parity_sign(p.period(), n) *
                   discriminant(p, lambda_n).delta;
  if (v < 1.0 - 1e-9)
    throw BelowOne("slit height: (-1)^{N-n} Delta(lambda_n) below 1");
  return std::acosh(std::max(v, 1.0));
}

inline MOData mo_data(const Potential& p, const SpectralData& s) {
  const int n = p.period();
  MOData d;
  d.psi1.resize(static_cast<std::size_t>(n - 1));
  d.psi2.resize(static_cast<std::size_t>(n - 1));
  d.height.resize(static_cast<std::size_t>(n - 1));
  d.xi.resize(static_cast<std::size_t>(n - 1));

  double escale = 0.0;
  for (double e : s.edges) escale = std::max(escale, std::abs(e));

  for (int g = 1; g <= n - 1; ++g) {
    const std::size_t i = static_cast<std::size_t>(g - 1);
    if (s.gap_closed[i]) {
      d.psi1[i] = d.psi2[i] = d.height[i] = d.xi[i] = 0.0;
      continue;
    }
    d.psi1[i] = norming_constant(p, s.nu[i], g);
    d.height[i] = slit_height(p, s.crit[i], g);
    d.xi[i] = d.height[i] * d.height[i];

    double rad = d.xi[i] - d.psi1[i] * d.psi1[i];
    if (rad < 0.0) {
      if (rad < -1e-10)
        throw NegativeRadicand("mo map: |psi_n|^2 < psi_{1,n}^2 beyond tolerance");
      rad = 0.0;
    }
    const double sep = s.crit[i] - s.nu[i];
    double sgn = 0.0;
    if (std::abs(sep) > 1e-10 * (1.0 + escale)) sgn = (sep > 0.0) ? 1.0 : -1.0;
    d.psi2[i] = sgn * std::sqrt(rad);
  }
  return d;
}

/// Packing order shared with the inverse solver and the CLI:
/// (psi_{1,1}, psi_{2,1}, psi_{1,2}, psi_{2,2}, ...).
inline std::vector<double> pack_mo(const MOData& d) {
  std::vector<double> v;
  v.reserve(2 * d.psi1.size());
  for (std::size_t i = 0; i < d.psi1.size(); ++i) {
    v.push_back(d.psi1[i]);
    v.push_back(d.psi2[i]);
  }
  return v;
}

inline std::vector<double> mo_map(const Potential& p) {
  return pack_mo(mo_data(p, compute_spectrum(p)));
}

}  // namespace jmo
