#include <cmath>
#include <vector>

#include "doctest.h"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/recurrence.hpp"
#include "jacobi_mo/spectrum.hpp"

using namespace jmo;

namespace {
const Potential kTwoSite{{0.0, 0.0}, {1.0, -1.0}};

Potential zero_potential(int n) {
  return Potential{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}
}  // namespace

TEST_CASE("symmetric tridiagonal eigenvalues on known matrices") {
  SUBCASE("size one") {
    const std::vector<double> v = symmetric_eigenvalues({{3.5}, {}, 0.0});
    REQUIRE(v.size() == 1);
    CHECK(v[0] == doctest::Approx(3.5));
  }
  SUBCASE("free 3x3") {
    const std::vector<double> v =
        symmetric_eigenvalues({{0.0, 0.0, 0.0}, {1.0, 1.0}, 0.0});
    REQUIRE(v.size() == 3);
    CHECK(v[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(v[1] == doctest::Approx(0.0));
    CHECK(v[2] == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("2x2 periodic closure merges corner and off-diagonal") {
    const std::vector<double> v =
        symmetric_eigenvalues({{1.0, -1.0}, {1.0}, 1.0});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(-std::sqrt(5.0)));
    CHECK(v[1] == doctest::Approx(std::sqrt(5.0)));
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(symmetric_eigenvalues({{0.0, 0.0}, {1.0, 1.0}, 0.0}),
                    DimensionMismatch);
  }
}

TEST_CASE("band edges on closed forms") {
  SUBCASE("N=2 with b=(1,-1)") {
    const std::vector<double> e = band_edges(kTwoSite);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == doctest::Approx(-std::sqrt(5.0)));
    CHECK(e[1] == doctest::Approx(-1.0));
    CHECK(e[2] == doctest::Approx(1.0));
    CHECK(e[3] == doctest::Approx(std::sqrt(5.0)));
  }
  SUBCASE("zero potential has fully closed gaps at Chebyshev nodes") {
    const std::vector<double> e = band_edges(zero_potential(3));
    REQUIRE(e.size() == 6);
    CHECK(e[0] == doctest::Approx(-2.0));
    CHECK(e[1] == doctest::Approx(-1.0));
    CHECK(e[2] == doctest::Approx(-1.0));
    CHECK(e[3] == doctest::Approx(1.0));
    CHECK(e[4] == doctest::Approx(1.0));
    CHECK(e[5] == doctest::Approx(2.0));
    CHECK(gap_is_closed(e, 1));
    CHECK(gap_is_closed(e, 2));
  }
  SUBCASE("off-diagonal-only N=2 opens a symmetric gap") {
    const std::vector<double> e = band_edges(Potential{{0.3, -0.3}, {0.0, 0.0}});
    REQUIRE(e.size() == 4);
    CHECK(e[1] == doctest::Approx(-2.0 * std::sinh(0.3)));
    CHECK(e[2] == doctest::Approx(2.0 * std::sinh(0.3)));
    CHECK(e[0] == doctest::Approx(-e[3]));
    CHECK_FALSE(gap_is_closed(e, 1));
  }
}

TEST_CASE("Dirichlet and Neumann eigenvalues") {
  SUBCASE("N=2 closed forms") {
    const std::vector<double> nu = dirichlet_eigenvalues(kTwoSite);
    REQUIRE(nu.size() == 1);
    CHECK(nu[0] == doctest::Approx(1.0));
    const std::vector<double> mu = neumann_eigenvalues(kTwoSite);
    REQUIRE(mu.size() == 1);
    CHECK(mu[0] == doctest::Approx(-1.0));
  }
  SUBCASE("zero potential N=4 gives cosine nodes") {
    const std::vector<double> nu = dirichlet_eigenvalues(zero_potential(4));
    REQUIRE(nu.size() == 3);
    CHECK(nu[0] == doctest::Approx(-std::sqrt(2.0)));
    CHECK(nu[1] == doctest::Approx(0.0));
    CHECK(nu[2] == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("residuals of the defining polynomials vanish") {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 2 + trial % 7;
      const Potential p = random_potential(n, 1.0, 300 + trial);
      const double scale = residual_scale(p);
      for (double z : dirichlet_eigenvalues(p))
        CHECK(std::abs(evaluate_solutions(p, z).phi[static_cast<std::size_t>(n)]) <=
              1e-10 * scale);
      for (double z : neumann_eigenvalues(p))
        CHECK(std::abs(evaluate_solutions(p, z).theta[static_cast<std::size_t>(n + 1)]) <=
              1e-10 * scale);
    }
  }
}

TEST_CASE("critical points of the discriminant") {
  SUBCASE("N=2 with b=(1,-1): extremum at the origin") {
    const std::vector<double> e = band_edges(kTwoSite);
    const std::vector<double> c = critical_points(kTwoSite, e);
    REQUIRE(c.size() == 1);
    CHECK(std::abs(c[0]) <= 1e-12);
  }
  SUBCASE("closed gaps give the double edge") {
    const Potential p = zero_potential(5);
    const std::vector<double> e = band_edges(p);
    const std::vector<double> c = critical_points(p, e);
    REQUIRE(c.size() == 4);
    for (int g = 1; g <= 4; ++g) {
      CHECK(c[g - 1] == doctest::Approx(2.0 * std::cos((5 - g) * M_PI / 5)).epsilon(1e-9));
    }
  }
  SUBCASE("Delta' residual vanishes on random potentials") {
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 2 + trial % 7;
      const Potential p = random_potential(n, 1.0, 640 + trial);
      const SpectralData s = compute_spectrum(p);
      for (int g = 1; g <= n - 1; ++g) {
        if (s.gap_closed[g - 1]) continue;
        CHECK(std::abs(discriminant(p, s.crit[g - 1]).ddelta) <=
              1e-8 * residual_scale(p));
      }
    }
  }
}

TEST_CASE("spectral landmarks interlace inside their gaps") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 9;
    const Potential p = random_potential(n, 1.2, 777 + trial);
    const SpectralData s = compute_spectrum(p);
    REQUIRE(static_cast<int>(s.edges.size()) == 2 * n);
    REQUIRE(static_cast<int>(s.nu.size()) == n - 1);
    REQUIRE(static_cast<int>(s.mu.size()) == n - 1);
    REQUIRE(static_cast<int>(s.crit.size()) == n - 1);
    const double tol = 1e-9 * (1.0 + std::abs(s.edges.back()));
    for (int g = 1; g <= n - 1; ++g) {
      CHECK(s.nu[g - 1] >= s.gap_lo(g) - tol);
      CHECK(s.nu[g - 1] <= s.gap_hi(g) + tol);
      CHECK(s.mu[g - 1] >= s.gap_lo(g) - tol);
      CHECK(s.mu[g - 1] <= s.gap_hi(g) + tol);
      CHECK(s.crit[g - 1] >= s.gap_lo(g) - tol);
      CHECK(s.crit[g - 1] <= s.gap_hi(g) + tol);
    }
  }
}

TEST_CASE("closed gaps snap every landmark to the double edge") {
  const SpectralData s = compute_spectrum(zero_potential(4));
  for (int g = 1; g <= 3; ++g) {
    CHECK(s.gap_closed[g - 1]);
    CHECK(s.nu[g - 1] == s.gap_lo(g));
    CHECK(s.mu[g - 1] == s.gap_lo(g));
    CHECK(s.crit[g - 1] == s.gap_lo(g));
  }
}
