#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/mo_map.hpp"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/recurrence.hpp"
#include "jacobi_mo/spectrum.hpp"

namespace jmo {

/// One boundary sample of the quasimomentum kappa, defined by
/// cos kappa = (-1)^N Delta. On bands the image is real and climbs through
/// [pi(n-1), pi n]; on gap boundary values lambda + i0 the real part pins to
/// pi n and im_kappa records the positive boundary value (the - i0 value is
/// its negative).
struct KappaSample {
  double lambda = 0.0;
  double re_kappa = 0.0;
  double im_kappa = 0.0;
  bool on_band = true;
};

/// Sample kappa on every band and on the upper boundary of every open gap.
/// The per-band arccos branch alternates with band parity; monotonicity of
/// the real part is asserted rather than derived from the normalization at
/// complex infinity.
inline std::vector<KappaSample> kappa_on_real_axis(const Potential& p,
                                                   const SpectralData& s,
                                                   int points_per_band) {
  if (points_per_band < 2)
    throw DimensionMismatch("points_per_band must be at least 2");
  const int np = p.period();
  const double pi = std::numbers::pi;
  const int global_sign = (np % 2 == 0) ? 1 : -1;  // (-1)^N

  std::vector<KappaSample> out;
  for (int band = 1; band <= np; ++band) {
    const double lo = s.edges[static_cast<std::size_t>(2 * band - 2)];
    const double hi = s.edges[static_cast<std::size_t>(2 * band - 1)];
    const int band_sign = (band % 2 == 1) ? 1 : -1;  // (-1)^{band-1}
    double prev = -1.0;
    for (int i = 0; i < points_per_band; ++i) {
      const double frac = static_cast<double>(i) / (points_per_band - 1);
      const double lambda = lo + frac * (hi - lo);
      KappaSample k;
      k.lambda = lambda;
      k.on_band = true;
      if (i == 0) {
        k.re_kappa = pi * (band - 1);  // band edges are roots of Delta^2 = 1
      } else if (i == points_per_band - 1) {
        k.re_kappa = pi * band;
      } else {
        const double c = std::clamp(
            band_sign * global_sign * discriminant(p, lambda).delta, -1.0, 1.0);
        k.re_kappa = pi * (band - 1) + std::acos(c);
      }
      if (k.re_kappa < prev - 1e-9)
        throw BranchInconsistency("kappa not monotone on band");
      prev = k.re_kappa;
      out.push_back(k);
    }

    if (band == np) break;
    // Gap above this band, sampled on the + i0 boundary.
    const int gap = band;
    const int gap_sign = detail::parity_sign(np, gap);  // (-1)^{N-n}
    if (s.gap_closed[static_cast<std::size_t>(gap - 1)]) {
      KappaSample k;
      k.lambda = s.gap_lo(gap);
      k.re_kappa = pi * gap;
      k.im_kappa = 0.0;
      k.on_band = false;
      out.push_back(k);
      continue;
    }
    const double glo = s.gap_lo(gap);
    const double ghi = s.gap_hi(gap);
    for (int i = 0; i < points_per_band; ++i) {
      const double frac = static_cast<double>(i) / (points_per_band - 1);
      const double lambda = glo + frac * (ghi - glo);
      KappaSample k;
      k.lambda = lambda;
      k.re_kappa = pi * gap;
      k.im_kappa =
          std::acosh(std::max(1.0, gap_sign * discriminant(p, lambda).delta));
      k.on_band = false;
      out.push_back(k);
    }
  }
  return out;
}

inline std::vector<KappaSample> kappa_on_real_axis(const Potential& p,
                                                   int points_per_band) {
  return kappa_on_real_axis(p, compute_spectrum(p), points_per_band);
}

/// The excised vertical slits of the quasimomentum domain: slit n is centered
/// at pi n with half-height |psi_n|, computed through the kappa boundary
/// values at the critical points.
struct SlitDatum {
  double center = 0.0;
  double height = 0.0;
};

inline std::vector<SlitDatum> slit_data(const Potential& p) {
  const SpectralData s = compute_spectrum(p);
  const int np = p.period();
  const double pi = std::numbers::pi;
  std::vector<SlitDatum> slits;
  for (int g = 1; g <= np - 1; ++g) {
    SlitDatum d;
    d.center = pi * g;
    if (s.gap_closed[static_cast<std::size_t>(g - 1)]) {
      d.height = 0.0;
    } else {
      d.height = std::acosh(
          std::max(1.0, detail::parity_sign(np, g) *
                            discriminant(p, s.crit[static_cast<std::size_t>(g - 1)]).delta));
    }
    slits.push_back(d);
  }
  return slits;
}

/// The two-sided stability chain
///   1/4 e^{2 max|psi_n|/N} <= 1/4 W^2 <= sum b^2 + 2 sum a^2 <= N W^2 <= 16 N e^{2 max|psi_n|/N}
/// with W the total spectral width. The slit exponent carries the per-site
/// normalization 1/N: without it the outer bounds fail outright (already at
/// N = 2, b = (2, -2) on the lower side), while this form is sharp as the
/// potential grows at N = 2 and holds on random ensembles far beyond the
/// perturbative regime. The coefficient norm is read as the squared l2 norms
/// of the sequences; the zero potential attains equality in the second and
/// fourth comparisons, so the chain is checked non-strictly.
struct EstimateReport {
  double lhs1 = 0.0;      // 1/4 e^{2 max |psi_n| / N}
  double mid = 0.0;       // 1/4 W^2
  double quantity = 0.0;  // sum b_n^2 + 2 sum a_n^2
  double rhs1 = 0.0;      // N W^2
  double rhs2 = 0.0;      // 16 N e^{2 max |psi_n| / N}
  std::array<double, 4> margins{};

  bool holds(double slack = 1e-9) const {
    for (double m : margins)
      if (m < -slack) return false;
    return true;
  }
  bool has_equality(double slack = 1e-9) const {
    for (double m : margins)
      if (std::abs(m) <= slack) return true;
    return false;
  }
};

inline EstimateReport verify_estimates(const Potential& p) {
  const int np = p.period();
  const SpectralData s = compute_spectrum(p);
  const MOData d = mo_data(p, s);
  double hmax = 0.0;
  for (double h : d.height) hmax = std::max(hmax, h);
  const double w = s.width();

  EstimateReport r;
  r.lhs1 = 0.25 * std::exp(2.0 * hmax / np);
  r.mid = 0.25 * w * w;
  r.quantity = 0.0;
  for (int k = 1; k <= np; ++k) {
    r.quantity += p.bk(k) * p.bk(k) + 2.0 * p.a(k) * p.a(k);
  }
  r.rhs1 = np * w * w;
  r.rhs2 = 16.0 * np * std::exp(2.0 * hmax / np);
  r.margins = {r.mid - r.lhs1, r.quantity - r.mid, r.rhs1 - r.quantity,
               r.rhs2 - r.rhs1};
  return r;
}

}  // namespace jmo
