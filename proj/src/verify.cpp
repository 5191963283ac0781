#include "qrec/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "qrec/linops.hpp"
#include "qrec/monitor.hpp"
#include "qrec/schur.hpp"
#include "qrec/site1d.hpp"
#include "qrec/walk2d.hpp"

namespace qrec {

namespace {

cplx rand_gamma(std::mt19937_64& rng, double max_mod = 0.8) {
  std::uniform_real_distribution<double> mod(0.05, max_mod);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * kPi);
  return std::polar(mod(rng), arg(rng));
}

CoinSpec1D rand_spec(std::mt19937_64& rng, Lattice1D kind, int width = 5) {
  CoinSpec1D spec;
  spec.kind = kind;
  spec.default_gamma = rand_gamma(rng, 0.5);
  if (kind == Lattice1D::finite) {
    spec.num_sites = width;
    for (int x = 0; x < width; ++x) spec.window[x] = rand_gamma(rng);
  } else if (kind == Lattice1D::half_line) {
    for (int x = 0; x < width; ++x) spec.window[x] = rand_gamma(rng);
  } else {
    for (int x = -width / 2; x <= width / 2; ++x)
      spec.window[x] = rand_gamma(rng);
  }
  return spec;
}

Subspace span_of_first(long dim, long m) {
  Subspace v;
  v.frame = MatC::Zero(dim, m);
  for (long j = 0; j < m; ++j) {
    v.frame(j, j) = cplx(1);
    v.support.push_back(j);
  }
  return v;
}

double unitarity_defect(const MatC& u) {
  return (u.adjoint() * u - MatC::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double series_diff(const MatSeries& x, const MatSeries& y, size_t count) {
  double worst = 0.0;
  for (size_t n = 0; n < count; ++n)
    worst = std::max(worst, (x[n] - y[n]).cwiseAbs().maxCoeff());
  return worst;
}

// Eigenvalue range defect against [0, 1].
double psd_unit_defect(const MatC& m) {
  MatC h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  const auto& ev = es.eigenvalues();
  double defect = (m - h).cwiseAbs().maxCoeff();
  defect = std::max(defect, -ev.minCoeff());
  defect = std::max(defect, ev.maxCoeff() - 1.0);
  return std::max(defect, 0.0);
}

double spectral_norm(const MatC& m) {
  return m.jacobiSvd().singularValues()(0);
}

struct Harness {
  VerifyReport& out;

  template <typename Body>
  void run(const std::string& name, double tol, Body&& body) {
    VerifyCheck c;
    c.name = name;
    c.tolerance = tol;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.worst = body();
      c.passed = c.worst <= tol;
    } catch (const std::exception& e) {
      c.worst = std::numeric_limits<double>::infinity();
      c.passed = false;
      c.name += std::string(" [threw: ") + e.what() + "]";
    }
    c.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    out.checks.push_back(std::move(c));
  }
};

// ---------------------------------------------------------------------------
// Individual checks. Each returns its worst defect.
// ---------------------------------------------------------------------------

double check_unitarity(std::mt19937_64& rng) {
  double worst = 0.0;
  worst = std::max(worst, unitarity_defect(random_unitary_step(7, rng).dense()));
  worst = std::max(worst, unitarity_defect(build_cyclic_shift(5).dense()));
  for (Lattice1D kind :
       {Lattice1D::half_line, Lattice1D::finite, Lattice1D::line}) {
    UnitaryStep u = build_coined_1d(rand_spec(rng, kind), 20);
    worst = std::max(worst, unitarity_defect(u.dense()));
  }
  CoinSpec2D sq;
  sq.kind = Lattice2D::square;
  sq.coin = grover_coin(4);
  worst = std::max(worst, unitarity_defect(build_coined_2d(sq, 3).dense()));
  CoinSpec2D hex;
  hex.kind = Lattice2D::hexagonal;
  hex.coin = c0_coin();
  worst = std::max(worst, unitarity_defect(build_coined_2d(hex, 3).dense()));
  return worst;
}

double check_renewal(std::mt19937_64& rng) {
  double worst = 0.0;
  const long n_max = 32;
  auto exercise = [&](const UnitaryStep& u, const Subspace& v) {
    MatSeries mu = mu_sequence(u, v, n_max);
    MatSeries a = amplitudes_from_mu(mu);
    MatSeries mu_back = mu_from_amplitudes(a);
    worst = std::max(worst, series_diff(mu, mu_back, mu.size()));
    FirstReturnData fr = first_return_direct(u, v, n_max);
    worst = std::max(worst, series_diff(a, fr.a, a.size()));
  };
  for (Lattice1D kind :
       {Lattice1D::half_line, Lattice1D::finite, Lattice1D::line}) {
    CoinSpec1D spec = rand_spec(rng, kind);
    UnitaryStep u = build_coined_1d(spec, n_max + 2);
    exercise(u, site_subspace_1d(u, kind == Lattice1D::finite ? 2 : 0));
  }
  UnitaryStep u = random_unitary_step(8, rng);
  exercise(u, span_of_first(8, 3));
  return worst;
}

double check_schur_bound(std::mt19937_64& rng) {
  double worst = 0.0;
  auto bound_scalar = [&](const SchurParams& p) {
    for (double r : {0.3, 0.65, 0.9, 0.97}) {
      for (int j = 0; j < 12; ++j) {
        cplx z = std::polar(r, 2.0 * kPi * j / 12.0);
        worst = std::max(worst, std::abs(eval_schur(p, z)) - 1.0);
      }
    }
    if (p.rational_inner()) {
      for (int j = 0; j < 12; ++j) {
        cplx z = std::polar(1.0, 2.0 * kPi * (j + 0.37) / 12.0);
        worst = std::max(worst, std::abs(eval_schur(p, z)) - 1.0);
      }
    }
  };
  Lattice1D kinds[3] = {Lattice1D::half_line, Lattice1D::finite,
                        Lattice1D::line};
  for (int trial = 0; trial < 5; ++trial) {
    SiteSchur s = site_schur(rand_spec(rng, kinds[trial % 3]),
                             trial % 3 == 1 ? 2 : 0);
    bound_scalar(s.left);
    bound_scalar(s.right);
  }
  // Operator route: ||a_hat(z)|| <= |z| exactly (resolvent evaluation).
  auto bound_operator = [&](const UnitaryStep& u, const Subspace& v) {
    BoundaryEvaluator ev(u, v);
    for (double r : {0.5, 0.9, 1.0}) {
      for (int j = 0; j < 8; ++j) {
        cplx z = std::polar(r, 2.0 * kPi * (j + 0.21) / 8.0);
        worst = std::max(worst, spectral_norm(ev.a_hat(z)) / r - 1.0);
      }
    }
  };
  bound_operator(build_cyclic_shift(5), span_of_first(5, 2));
  UnitaryStep u = random_unitary_step(6, rng);
  bound_operator(u, span_of_first(6, 2));
  return std::max(worst, 0.0);
}

double check_return_bounds(std::mt19937_64& rng) {
  double worst = 0.0;
  const long n_max = 48;
  for (Lattice1D kind :
       {Lattice1D::half_line, Lattice1D::finite, Lattice1D::line}) {
    CoinSpec1D spec = rand_spec(rng, kind);
    UnitaryStep u = build_coined_1d(spec, n_max + 2);
    Subspace v = site_subspace_1d(u, kind == Lattice1D::finite ? 1 : 0);
    FirstReturnData fr = first_return_direct(u, v, n_max);
    worst = std::max(worst, psd_unit_defect(return_probability(fr.a).partial));
    worst = std::max(
        worst, psd_unit_defect(site_return_matrix(site_schur(spec, 0), 200)
                                   .matrix));
  }
  UnitaryStep u = random_unitary_step(7, rng);
  FirstReturnData fr = first_return_direct(u, span_of_first(7, 2), n_max);
  worst = std::max(worst, psd_unit_defect(return_probability(fr.a).partial));
  return worst;
}

double check_survival_monotone(std::mt19937_64& rng) {
  double worst = 0.0;
  for (Lattice1D kind : {Lattice1D::half_line, Lattice1D::line}) {
    UnitaryStep u = build_coined_1d(rand_spec(rng, kind), 50);
    Subspace v = site_subspace_1d(u, 0);
    FirstReturnData fr = first_return_direct(u, v, 48);
    for (long j = 0; j < fr.survival.cols(); ++j)
      for (long n = 0; n + 1 < fr.survival.rows(); ++n)
        worst = std::max(worst, fr.survival(n + 1, j) - fr.survival(n, j));
  }
  return std::max(worst, 0.0);
}

double check_amplitude_survival(std::mt19937_64& rng) {
  double worst = 0.0;
  for (Lattice1D kind : {Lattice1D::half_line, Lattice1D::line}) {
    UnitaryStep u = build_coined_1d(rand_spec(rng, kind), 50);
    Subspace v = site_subspace_1d(u, 0);
    FirstReturnData fr = first_return_direct(u, v, 48);
    for (size_t n = 1; n < fr.a.size(); ++n)
      for (long j = 0; j < fr.a[n].cols(); ++j) {
        double drop = fr.survival(static_cast<long>(n) - 1, j) -
                      fr.survival(static_cast<long>(n), j);
        worst = std::max(worst, std::abs(fr.a[n].col(j).squaredNorm() - drop));
      }
  }
  return worst;
}

double check_truncation_doubling(std::mt19937_64& rng) {
  double worst = 0.0;
  const long n_max = 36;
  for (Lattice1D kind : {Lattice1D::half_line, Lattice1D::line}) {
    CoinSpec1D spec = rand_spec(rng, kind);
    UnitaryStep u1 = build_coined_1d(spec, n_max);
    UnitaryStep u2 = build_coined_1d(spec, 2 * n_max);
    MatSeries m1 = mu_sequence(u1, site_subspace_1d(u1, 0), n_max);
    MatSeries m2 = mu_sequence(u2, site_subspace_1d(u2, 0), n_max);
    worst = std::max(worst, series_diff(m1, m2, m1.size()));
  }
  for (Lattice2D kind : {Lattice2D::square, Lattice2D::hexagonal}) {
    Walk2DJob job;
    job.spec.kind = kind;
    job.spec.coin =
        kind == Lattice2D::square ? grover_coin(4) : c0_coin();
    job.n_max = 20;
    MatSeries short_run = origin_mu_sequence(job);
    job.n_max = 40;
    MatSeries long_run = origin_mu_sequence(job);
    worst = std::max(worst, series_diff(short_run, long_run, short_run.size()));
  }
  return worst;
}

double check_geronimus(std::mt19937_64& rng) {
  CoinSpec1D spec;
  spec.kind = Lattice1D::half_line;
  spec.default_gamma = rand_gamma(rng, 0.5);
  for (int x = 0; x <= 6; ++x) spec.window[x] = rand_gamma(rng);
  const long n_max = 40;
  UnitaryStep u = build_coined_1d(spec, n_max + 2);
  Subspace e0 = span_of_first(u.dim(), 1);  // |x=0, up>
  MatSeries mu = mu_sequence(u, e0, n_max);
  Coeffs f_caratheodory(mu.size());
  f_caratheodory[0] = 1.0;
  for (size_t m = 1; m < mu.size(); ++m)
    f_caratheodory[m] = 2.0 * std::conj(mu[m](0, 0));
  Coeffs taylor = schur_series_from_caratheodory(f_caratheodory);
  SchurAlgorithmResult res = schur_params_from_taylor(taylor, 14);
  double worst = res.extracted < 14 ? 1.0 : 0.0;
  for (int k = 0; 2 * k < std::min(res.extracted, 14); ++k) {
    worst = std::max(worst,
                     std::abs(res.params.prefix[2 * k] - spec.gamma(k)));
    if (2 * k + 1 < res.extracted)
      worst = std::max(worst, std::abs(res.params.prefix[2 * k + 1]));
  }
  return worst;
}

double check_szego_khrushchev(std::mt19937_64& rng) {
  double worst = 0.0;
  SchurParams p;
  p.prefix.resize(7);
  for (auto& g : p.prefix) g = rand_gamma(rng);
  SzegoSystem s = szego_polynomials(p, 7);
  SchurParams p_neg = p;
  for (auto& g : p_neg.prefix) g = -g;
  SzegoSystem second = szego_polynomials(p_neg, 7);
  auto at = [](const std::vector<Coeffs>& polys, long k, cplx z) {
    return series_eval(polys[static_cast<size_t>(k)], z);
  };
  for (int trial = 0; trial < 20; ++trial) {
    cplx z = std::polar(std::uniform_real_distribution<double>(0.1, 0.9)(rng),
                        std::uniform_real_distribution<double>(0.0, 2 * kPi)(rng));
    for (long k = 0; k < 5; ++k) {
      // Szego recurrence and the reversal identity.
      double rho = std::sqrt(1.0 - std::norm(p.param(k)));
      cplx phi_k = at(s.phi, k, z), phs_k = at(s.phi_star, k, z);
      worst = std::max(worst, std::abs(rho * at(s.phi, k + 1, z) -
                                       (z * phi_k - std::conj(p.param(k)) * phs_k)));
      worst = std::max(worst, std::abs(rho * at(s.phi_star, k + 1, z) -
                                       (-p.param(k) * z * phi_k + phs_k)));
      worst = std::max(
          worst, std::abs(phs_k - std::pow(z, k) * std::conj(at(s.phi, k,
                                                                cplx(1) /
                                                                    std::conj(z)))));
      // Second kind polynomials = first kind of the negated parameters.
      worst = std::max(worst, std::abs(at(s.omega, k, z) - at(second.phi, k, z)));
      worst = std::max(worst,
                       std::abs(at(s.omega_star, k, z) - at(second.phi_star, k, z)));
      // Inverse iterate as a ratio of Szego polynomials.
      worst = std::max(worst, std::abs(eval_schur(inverse_iterate(p, k - 1), z) -
                                       at(s.phi, k, z) / at(s.phi_star, k, z)));
    }
    // Khrushchev objects against their polynomial definitions.
    cplx F = caratheodory_from_schur(eval_schur(p, z), z);
    for (long k = 1; k <= 3; ++k) {
      KhrushchevValues kv = khrushchev_Fk(p, k, z);
      cplx gk = std::pow(z, -static_cast<double>(k)) * at(s.phi, k, z) *
                (at(s.phi, k + 1, z) * F + at(s.omega, k + 1, z));
      cplx gtk = std::pow(z, -static_cast<double>(k + 1)) *
                 at(s.phi_star, k, z) *
                 (at(s.phi_star, k + 1, z) * F - at(s.omega_star, k + 1, z));
      worst = std::max(worst, std::abs(kv.G_k - gk));
      worst = std::max(worst, std::abs(kv.G_tilde_k - gtk));
      cplx prod = z * eval_schur(inverse_iterate(p, k - 1), z) *
                  eval_schur(iterate(p, k), z);
      worst = std::max(worst,
                       std::abs(kv.F_k - (cplx(1) + prod) / (cplx(1) - prod)));
      double rho = std::sqrt(1.0 - std::norm(p.param(k)));
      worst = std::max(
          worst, std::abs(rho * (kv.F_k - khrushchev_Fk(p, k + 1, z).F_k) -
                          (p.param(k) * kv.G_k +
                           std::conj(p.param(k)) * kv.G_tilde_k)));
    }
  }
  return worst;
}

double check_site_factorization(std::mt19937_64& rng) {
  double worst = 0.0;
  const long n_max = 30;
  for (Lattice1D kind :
       {Lattice1D::half_line, Lattice1D::finite, Lattice1D::line}) {
    CoinSpec1D spec = rand_spec(rng, kind);
    int x = kind == Lattice1D::finite ? 2 : 0;
    UnitaryStep u = build_coined_1d(spec, n_max + 3, x);
    Subspace v = site_subspace_1d(u, x);
    MatSeries direct = schur_from_amplitudes(first_return_direct(u, v, n_max).a);
    MatSeries factored =
        site_schur_taylor(site_schur(spec, x), static_cast<int>(n_max) - 1);
    worst = std::max(worst, series_diff(direct, factored, direct.size()));
  }
  return worst;
}

double check_winding(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int n_sites = 2; n_sites <= 5; ++n_sites) {
    CoinSpec1D spec = rand_spec(rng, Lattice1D::finite, n_sites);
    UnitaryStep u = build_coined_1d(spec, 1);
    int x = static_cast<int>(
        std::uniform_int_distribution<int>(0, n_sites - 1)(rng));
    BoundaryEvaluator ev(u, site_subspace_1d(u, x));
    WindingResult w = winding_number([&](double theta) {
      return ev.a_hat(std::polar(1.0, theta)).determinant();
    });
    if (w.winding != 2 * n_sites) return 1.0;
    worst = std::max(worst, w.residue);
  }
  // Consensus of the four K routes on a genuinely finite model.
  UnitaryStep u = random_unitary_step(6, rng);
  KInvariant k = k_invariant(u, span_of_first(6, 2));  // throws on dissent
  worst = std::max(worst, std::abs(static_cast<double>(k.value) - k.frobenius));
  return worst;
}

double check_published_table() {
  double worst = 0.0;
  for (const PublishedReturnRow& row : published_return_eigenvalues()) {
    Walk2DJob job;
    job.spec.kind = std::string(row.lattice) == "square" ? Lattice2D::square
                                                         : Lattice2D::hexagonal;
    if (std::string(row.coin) == "grover")
      job.spec.coin = grover_coin(job.spec.internal_dim());
    else if (std::string(row.coin) == "fourier")
      job.spec.coin = fourier_coin(4);
    else
      job.spec.coin = c0_coin();
    job.n_max = 256;
    RSpectrum r = r_eigenvalues(job);
    if (static_cast<int>(r.eigenvalues.size()) != row.count) return 1.0;
    for (int k = 0; k < row.count; ++k) {
      const EigenvalueEstimate& est = r.eigenvalues[static_cast<size_t>(k)];
      worst = std::max(worst, std::abs(est.value - row.values[static_cast<size_t>(k)]));
      // The enclosure converges from below; the published value must sit in
      // the enclosure inflated by the check tolerance.
      if (row.values[static_cast<size_t>(k)] < est.enclosure.lo - 5e-3 ||
          row.values[static_cast<size_t>(k)] > est.enclosure.hi + 5e-3)
        return 1.0;
    }
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<PublishedReturnRow>& published_return_eigenvalues() {
  static const std::vector<PublishedReturnRow> rows = {
      {"square", "grover", 4, {0.6593, 0.4069, 0.4069, 0.2878}},
      {"square", "fourier", 4, {0.5517, 0.3882, 0.3882, 0.2880}},
      {"hexagonal", "grover", 3, {0.8017, 0.2411, 0.2411, 0.0}},
      {"hexagonal", "c0", 3, {0.6365, 0.6365, 0.5462, 0.0}},
  };
  return rows;
}

bool VerifyReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

double VerifyReport::total_seconds() const {
  double total = 0.0;
  for (const auto& c : checks) total += c.seconds;
  return total;
}

VerifyReport run_verify(const std::string& suite, unsigned long seed,
                        bool inject_failure) {
  if (suite != "fast" && suite != "full")
    throw InvalidInput("suite must be 'fast' or 'full'");
  VerifyReport report;
  report.suite = suite;
  report.seed = seed;
  Harness h{report};
  std::mt19937_64 rng(seed);

  // The injected corruption tightens one tolerance beyond reach so callers
  // can exercise their failure path deterministically.
  const double renewal_tol = inject_failure ? 1e-30 : 1e-11;

  h.run("unitarity of model builders", 1e-12,
        [&] { return check_unitarity(rng); });
  h.run("renewal equation round-trip", renewal_tol,
        [&] { return check_renewal(rng); });
  h.run("schur bound on disk grids", 1e-10,
        [&] { return check_schur_bound(rng); });
  h.run("return operator within [0, I]", 1e-12,
        [&] { return check_return_bounds(rng); });
  h.run("survival monotonicity", 1e-12,
        [&] { return check_survival_monotone(rng); });
  h.run("amplitude-survival identity", 1e-12,
        [&] { return check_amplitude_survival(rng); });
  h.run("truncation doubling invariance", 1e-14,
        [&] { return check_truncation_doubling(rng); });
  h.run("geronimus parameter pattern", 1e-9,
        [&] { return check_geronimus(rng); });
  h.run("szego and khrushchev identities", 1e-9,
        [&] { return check_szego_khrushchev(rng); });
  h.run("site factorization cross-check", 1e-9,
        [&] { return check_site_factorization(rng); });
  h.run("winding integrality", 1e-6, [&] { return check_winding(rng); });
  if (suite == "full")
    h.run("published table at reduced horizon", 5e-3,
          [] { return check_published_table(); });
  return report;
}

std::string format_verify(const VerifyReport& r) {
  std::ostringstream out;
  out << "verify suite '" << r.suite << "', seed " << r.seed << "\n";
  int passed = 0;
  for (const auto& c : r.checks) {
    passed += c.passed ? 1 : 0;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "  %s  %-34s worst %9.2e  tol %7.1e  %6.2f s\n",
                  c.passed ? "pass" : "FAIL", c.name.c_str(), c.worst,
                  c.tolerance, c.seconds);
    out << line;
  }
  char tail[128];
  std::snprintf(tail, sizeof(tail), "%s  %d/%zu checks in %.1f s\n",
                r.all_passed() ? "PASS" : "FAIL", passed, r.checks.size(),
                r.total_seconds());
  out << tail;
  return out.str();
}

}  // namespace qrec
