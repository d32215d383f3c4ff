#include <cmath>
#include <vector>

#include "doctest.h"
#include "fd_oracle.hpp"
#include "jacobi_mo/gradients.hpp"
#include "jacobi_mo/mo_map.hpp"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/spectrum.hpp"

using namespace jmo;

namespace {
const Potential kTwoSite{{0.0, 0.0}, {1.0, -1.0}};
}

TEST_CASE("two-site closed forms") {
  SUBCASE("Dirichlet eigenvalue gradient") {
    const GradField f = grad_nu(kTwoSite, 1);
    CHECK(std::abs(f.dx(1)) <= 1e-12);
    CHECK(f.db(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f.dx(2)) <= 1e-12);
    CHECK(std::abs(f.db(2)) <= 1e-12);
  }
  SUBCASE("norming constant gradient") {
    const Psi1Gradient g = grad_psi1(kTwoSite, 1);
    CHECK(g.total.dx(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(g.total.db(1)) <= 1e-12);
    CHECK(g.total.dx(2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(g.total.db(2)) <= 1e-12);
  }
  SUBCASE("critical point gradient") {
    const GradField f = grad_lambda_crit(kTwoSite, 1);
    CHECK(std::abs(f.dx(1)) <= 1e-12);
    CHECK(f.db(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(f.dx(2)) <= 1e-12);
    CHECK(f.db(2) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 4;
    const Potential p = random_potential(n, 1.0, 1300 + trial);
    const SpectralData s0 = compute_spectrum(p);
    bool any_closed = false;
    for (bool c : s0.gap_closed) any_closed = any_closed || c;
    REQUIRE_FALSE(any_closed);

    for (int g = 1; g <= n - 1; ++g) {
      CAPTURE(trial);
      CAPTURE(g);
      const std::vector<double> fd_nu = oracle::fd_gradient(
          [g](const Potential& q) {
            return compute_spectrum(q).nu[static_cast<std::size_t>(g - 1)];
          },
          p);
      CHECK(oracle::rel_gradient_error(grad_nu(p, s0, g), fd_nu) <= 1e-5);

      const std::vector<double> fd_psi1 = oracle::fd_gradient(
          [g](const Potential& q) {
            const SpectralData s = compute_spectrum(q);
            return mo_data(q, s).psi1[static_cast<std::size_t>(g - 1)];
          },
          p);
      CHECK(oracle::rel_gradient_error(grad_psi1(p, s0, g).total, fd_psi1) <= 1e-5);

      const std::vector<double> fd_crit = oracle::fd_gradient(
          [g](const Potential& q) {
            return compute_spectrum(q).crit[static_cast<std::size_t>(g - 1)];
          },
          p);
      CHECK(oracle::rel_gradient_error(grad_lambda_crit(p, s0, g), fd_crit) <= 1e-5);

      const std::vector<double> fd_xi = oracle::fd_gradient(
          [g](const Potential& q) {
            const SpectralData s = compute_spectrum(q);
            return mo_data(q, s).xi[static_cast<std::size_t>(g - 1)];
          },
          p);
      CHECK(oracle::rel_gradient_error(grad_xi(p, g), fd_xi) <= 1e-5);
    }
  }
}

TEST_CASE("symplectic form basics") {
  const Potential p = random_potential(5, 1.0, 5);
  const SpectralData s = compute_spectrum(p);
  const GradField f = grad_nu(p, s, 1);
  const GradField g = grad_psi1(p, s, 2).total;
  CHECK(symplectic_form(f, f) == doctest::Approx(0.0));
  CHECK(symplectic_form(f, g) == doctest::Approx(-symplectic_form(g, f)).epsilon(1e-12));
  GradField short_field;
  short_field.pairs.resize(3);
  CHECK_THROWS_AS(symplectic_form(f, short_field), LengthMismatch);
}

TEST_CASE("canonical pairing of the norming and Dirichlet gradients") {
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 6;
    const Potential p = random_potential(n, 1.0, 2100 + trial);
    const SpectralData s = compute_spectrum(p);
    for (int a = 1; a <= n - 1; ++a) {
      for (int b = 1; b <= n - 1; ++b) {
        const double w =
            symplectic_form(grad_psi1(p, s, a).total, grad_nu(p, s, b));
        const double expected = (a == b) ? 2.0 : 0.0;
        CHECK(std::abs(w - expected) <= 1e-7);
      }
    }
  }
}

TEST_CASE("identity report residuals vanish") {
  SUBCASE("sum-swap shape on constant sequences") {
    // With z = w = 1 and four terms both full sums equal 10 and both
    // strict-triangle sums equal 6; the report checks this on real tables.
    const int np = 4;
    double l1 = 0.0, r1 = 0.0, l2 = 0.0, r2 = 0.0;
    for (int k = 1; k <= np; ++k) {
      l1 += k;
      r1 += np - k + 1;
    }
    for (int k = 2; k <= np; ++k) l2 += k - 1;
    for (int k = 1; k <= np - 1; ++k) r2 += np - k;
    CHECK(l1 == 10.0);
    CHECK(r1 == 10.0);
    CHECK(l2 == 6.0);
    CHECK(r2 == 6.0);
  }
  SUBCASE("random potentials") {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + trial % 6;
      const Potential p = random_potential(n, 1.0, 3100 + trial);
      for (auto [a, b] : {std::pair<int, int>{1, 2},
                          {n - 1, n - 1},
                          {1, n - 1}}) {
        const IdentityReport rep = verify_identities(p, a, b);
        CAPTURE(trial);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(rep.max_residual() <= 1e-8 * rep.scale);
      }
    }
  }
  SUBCASE("bracket pairing carries the fixed sign") {
    const Potential p = random_potential(4, 0.9, 3300);
    const IdentityReport rep = verify_identities(p, 2, 2);
    CHECK(rep.bracket_nu <= 1e-8 * rep.scale);
    CHECK(kBracketWedgeNuSign == -1.0);
  }
}

TEST_CASE("projected gradients form a basis of the free chart") {
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 6;
    const Potential p = random_potential(n, 1.0, 4200 + trial);
    const BasisReport rep = verify_basis(p);
    CAPTURE(trial);
    CHECK(rep.max_nu_nu <= 1e-7);
    CHECK(rep.max_psi_psi <= 1e-7);
    CHECK(rep.max_pairing_err <= 1e-7);
    CHECK(rep.smallest_singular > 1e-10 * rep.matrix_norm);
  }
}

TEST_CASE("MO Jacobian matches finite differences of the map") {
  SUBCASE("two-site norming row") {
    const MOJacobian j = mo_jacobian(Potential{{0.3, -0.3}, {0.0, 0.0}});
    CHECK(j.matrix(0, 0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(j.matrix(0, 1)) <= 1e-9);
  }
  SUBCASE("random potentials") {
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 2 + trial % 4;
      const Potential p = random_potential(n, 1.0, 5100 + trial);
      const MOJacobian j = mo_jacobian(p);
      const FreeCoords u0 = project(p);
      const std::size_t dim = u0.size();
      const double h = 1e-6;
      double scale = 1.0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
          scale = std::max(scale, std::abs(j.matrix(r, c)));
      for (std::size_t c = 0; c < dim; ++c) {
        FreeCoords up = u0, um = u0;
        up[c] += h;
        um[c] -= h;
        const std::vector<double> fp = mo_map_free(up, n);
        const std::vector<double> fm = mo_map_free(um, n);
        for (std::size_t r = 0; r < dim; ++r) {
          const double fd = (fp[r] - fm[r]) / (2.0 * h);
          CAPTURE(trial);
          CAPTURE(r);
          CAPTURE(c);
          CHECK(std::abs(j.matrix(r, c) - fd) <= 1e-5 * scale);
        }
      }
    }
  }
}
