// Command-line front end: JSON in/out for potentials, spectral data,
// psi vectors and verification reports, CSV for quasimomentum samples.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 solver failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jacobi_mo/jacobi_mo.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

jmo::Potential read_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw jmo::Error("cannot open input file: " + path);
  json j = json::parse(in);
  jmo::Potential p;
  p.x = j.at("x").get<std::vector<double>>();
  p.b = j.at("b").get<std::vector<double>>();
  const int n = j.at("N").get<int>();
  if (n != static_cast<int>(p.x.size()) || n != static_cast<int>(p.b.size()))
    throw jmo::DimensionMismatch("N does not match x/b lengths");
  jmo::validate(p);
  return p;
}

int cmd_forward(const std::string& path) {
  const jmo::Potential p = read_potential_file(path);
  const jmo::SpectralData s = jmo::compute_spectrum(p);
  const jmo::MOData d = jmo::mo_data(p, s);
  json out;
  out["edges"] = s.edges;
  out["nu"] = s.nu;
  out["mu"] = s.mu;
  out["crit"] = s.crit;
  out["psi1"] = d.psi1;
  out["psi2"] = d.psi2;
  out["heights"] = d.height;
  out["gap_closed"] = std::vector<bool>(s.gap_closed.begin(), s.gap_closed.end());
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_inverse(const std::string& path, double tol, int max_steps) {
  std::ifstream in(path);
  if (!in) throw jmo::Error("cannot open input file: " + path);
  json j = json::parse(in);
  const int n = j.at("N").get<int>();
  const std::vector<double> psi = j.at("psi").get<std::vector<double>>();

  jmo::InverseOptions opts;
  opts.tol = tol;
  opts.max_homotopy_steps = max_steps;
  opts.homotopy_steps = std::min(opts.homotopy_steps, max_steps);
  try {
    const jmo::InverseResult r = jmo::solve_inverse(psi, n, opts);
    json out;
    out["N"] = n;
    out["x"] = r.q.x;
    out["b"] = r.q.b;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  } catch (const jmo::HomotopyStalled& e) {
    std::cerr << "homotopy stalled: " << e.what() << "\n";
    for (const auto& [s, res] : e.path)
      std::cerr << "  s=" << s << " residual=" << res << "\n";
    return kExitSolver;
  }
}

struct SuiteResult {
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass() const { return max_residual <= threshold; }
};

SuiteResult run_wronskian(int n, int trials, std::uint64_t seed) {
  SuiteResult r{0.0, 1e-9};
  for (int t = 0; t < trials; ++t) {
    const jmo::Potential p = jmo::random_potential(n, 1.0, seed + t);
    const double lambda = -3.0 + 6.0 * ((t * 29u) % 97) / 96.0;
    const jmo::SolutionTable tab = jmo::evaluate_solutions(p, lambda);
    const double an = p.a(n);
    for (int k = 0; k <= n; ++k) {
      const double w = jmo::wronskian(p, tab.theta, tab.phi, k);
      r.max_residual = std::max(
          r.max_residual, std::abs(w - an) / std::max(1.0, std::abs(an)));
    }
    const std::size_t jn = static_cast<std::size_t>(n);
    const double wi = tab.phi[jn + 1] * tab.theta[jn] - tab.phi[jn] * tab.theta[jn + 1];
    r.max_residual = std::max(r.max_residual, std::abs(wi - 1.0));
  }
  return r;
}

SuiteResult run_lemma31(int n, int trials, std::uint64_t seed) {
  SuiteResult r{0.0, 1e-8};
  for (int t = 0; t < trials; ++t) {
    const jmo::Potential p = jmo::random_potential(n, 1.0, seed + t);
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 1; j <= n - 1; ++j) {
        const jmo::IdentityReport rep = jmo::verify_identities(p, i, j);
        r.max_residual = std::max(r.max_residual, rep.max_residual() / rep.scale);
      }
  }
  return r;
}

SuiteResult run_theorem13(int n, int trials, std::uint64_t seed) {
  SuiteResult r{0.0, 1e-7};
  for (int t = 0; t < trials; ++t) {
    const jmo::Potential p = jmo::random_potential(n, 1.0, seed + t);
    const jmo::BasisReport rep = jmo::verify_basis(p);
    r.max_residual = std::max({r.max_residual, rep.max_nu_nu, rep.max_psi_psi,
                               rep.max_pairing_err});
    if (rep.smallest_singular <= 1e-10 * rep.matrix_norm)
      r.max_residual = std::max(r.max_residual, 1.0);  // basis failure
  }
  return r;
}

SuiteResult run_gradcheck(int n, int trials, std::uint64_t seed) {
  SuiteResult r{0.0, 1e-5};
  const double h = 1e-6;
  for (int t = 0; t < trials; ++t) {
    const jmo::Potential p = jmo::random_potential(n, 0.8, seed + t);
    const jmo::FreeCoords u0 = jmo::project(p);
    const std::size_t dim = u0.size();
    const jmo::MOJacobian jac = jmo::mo_jacobian(p);
    double scale = 1.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        scale = std::max(scale, std::abs(jac.matrix(i, j)));
    for (std::size_t j = 0; j < dim; ++j) {
      jmo::FreeCoords up = u0, um = u0;
      up[j] += h;
      um[j] -= h;
      const std::vector<double> fp = jmo::mo_map_free(up, n);
      const std::vector<double> fm = jmo::mo_map_free(um, n);
      for (std::size_t i = 0; i < dim; ++i) {
        const double fd = (fp[i] - fm[i]) / (2.0 * h);
        r.max_residual = std::max(r.max_residual,
                                  std::abs(jac.matrix(i, j) - fd) / scale);
      }
    }
  }
  return r;
}

SuiteResult run_estimates(int n, int trials, std::uint64_t seed) {
  SuiteResult r{0.0, 1e-9};
  for (int t = 0; t < trials; ++t) {
    const jmo::Potential p = jmo::random_potential(n, 1.0, seed + t);
    const jmo::EstimateReport rep = jmo::verify_estimates(p);
    for (double m : rep.margins) r.max_residual = std::max(r.max_residual, -m);
  }
  return r;
}

int cmd_verify(int n, int trials, std::uint64_t seed, const std::string& suite) {
  if (n < 2) {
    std::cerr << "error: --n must be at least 2 (PeriodTooSmall)\n";
    return kExitInput;
  }
  json report;
  bool all_pass = true;
  auto add = [&](const std::string& name, const SuiteResult& s) {
    report[name] = {{"max_residual", s.max_residual},
                    {"threshold", s.threshold},
                    {"pass", s.pass()}};
    all_pass = all_pass && s.pass();
  };
  const bool all = suite == "all";
  if (all || suite == "wronskian") add("wronskian", run_wronskian(n, trials, seed));
  if (all || suite == "lemma31") add("lemma31", run_lemma31(n, trials, seed));
  if (all || suite == "theorem13") add("theorem13", run_theorem13(n, trials, seed));
  if (all || suite == "gradcheck") add("gradcheck", run_gradcheck(n, trials, seed));
  if (all || suite == "estimates") add("estimates", run_estimates(n, trials, seed));
  std::cout << report.dump(2) << "\n";
  return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_kappa(const std::string& path, int points_per_band) {
  if (points_per_band < 2) {
    std::cerr << "error: --points-per-band must be at least 2\n";
    return kExitInput;
  }
  const jmo::Potential p = read_potential_file(path);
  const std::vector<jmo::KappaSample> samples =
      jmo::kappa_on_real_axis(p, points_per_band);
  std::printf("lambda,re_kappa,im_kappa_plus\n");
  for (const jmo::KappaSample& k : samples)
    std::printf("%.17g,%.17g,%.17g\n", k.lambda, k.re_kappa, k.im_kappa);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forward and inverse spectral maps of N-periodic Jacobi matrices"};
  app.require_subcommand(1);

  std::string in_path;
  double tol = 1e-10;
  int max_steps = 256;
  int n = 6, trials = 20, points_per_band = 16;
  std::uint64_t seed = 1;
  std::string suite = "all";

  CLI::App* fwd = app.add_subcommand("forward", "potential file -> spectral data + psi");
  fwd->add_option("input", in_path, "potential JSON file")->required();

  CLI::App* inv = app.add_subcommand("inverse", "psi file -> potential");
  inv->add_option("input", in_path, "psi JSON file {\"N\":int, \"psi\":[...]}")->required();
  inv->add_option("--tol", tol, "residual inf-norm target");
  inv->add_option("--max-steps", max_steps, "homotopy step cap");

  CLI::App* ver = app.add_subcommand("verify", "run identity/estimate suites");
  ver->add_option("--n", n, "period");
  ver->add_option("--trials", trials, "number of random potentials");
  ver->add_option("--seed", seed, "base RNG seed");
  ver->add_option("--suite", suite, "wronskian|lemma31|theorem13|gradcheck|estimates|all")
      ->check(CLI::IsMember({"wronskian", "lemma31", "theorem13", "gradcheck",
                             "estimates", "all"}));

  CLI::App* kap = app.add_subcommand("kappa", "potential file -> quasimomentum CSV");
  kap->add_option("input", in_path, "potential JSON file")->required();
  kap->add_option("--points-per-band", points_per_band, "samples per band/gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (fwd->parsed()) return cmd_forward(in_path);
    if (inv->parsed()) return cmd_inverse(in_path, tol, max_steps);
    if (ver->parsed()) return cmd_verify(n, trials, seed, suite);
    if (kap->parsed()) return cmd_kappa(in_path, points_per_band);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const jmo::HomotopyStalled& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const jmo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
