// Command-line interface: closed-form example models, 1D site recurrence,
// 2D origin recurrence with figure-curve data, and the invariant suites.
// Reports are JSON, curves are CSV; identical config + seed gives
// byte-identical files. Exit codes: 0 ok, 1 failed check, 2 invalid input,
// 3 resource budget.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qrec/linops.hpp"
#include "qrec/monitor.hpp"
#include "qrec/report.hpp"
#include "qrec/site1d.hpp"
#include "qrec/verify.hpp"
#include "qrec/walk2d.hpp"

namespace {

using namespace qrec;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void emit(const RunConfig& cfg, const std::string& name,
          const std::string& content) {
  std::string path = out_path(cfg, name);
  write_text_file(path, content);
  std::cout << "wrote " << path << "\n";
}

double max_abs(const MatC& m) { return m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// example shift-eig: shift plus an eigenvector, V = span{psi, phi}. All
// first-return amplitudes terminate after two steps and everything has a
// closed form.
// ---------------------------------------------------------------------------

// The compressions mu_n of this model alternate between mu_1 and mu_2 from
// n = 1 on. After verifying the alternation on the computed window, the
// scalar compressions <psi_b| U^n |psi_b> of any state in V extend to
// arbitrary order as quadratic forms of the two matrices, which makes
// high-accuracy state-return scans affordable (the dense evolution would
// need thousands of large matrix applications per scan point).
struct ShiftEigScan {
  MatC mu1, mu2;
  double alternation_defect = 0.0;
  long scan_n_max = 2000;

  static ShiftEigScan build(long check_n_max) {
    ShiftFlipModel model = build_shift_plus_flip(check_n_max + 2);
    MatSeries mu = mu_sequence(model.step, model.subspace, check_n_max);
    ShiftEigScan scan;
    scan.mu1 = mu[1];
    scan.mu2 = mu[2];
    for (size_t n = 1; n < mu.size(); ++n)
      scan.alternation_defect = std::max(
          scan.alternation_defect,
          max_abs(mu[n] - (n % 2 ? scan.mu1 : scan.mu2)));
    return scan;
  }

  // State return probability of psi_b = sqrt(1-b) psi + sqrt(b) phi
  // (closed form (1 - b/2) / (1 + b/2)).
  double state_return(double b) const {
    VecC c(2);
    c << std::sqrt(1.0 - b), std::sqrt(b);
    const cplx odd = (c.adjoint() * mu1 * c)(0);
    const cplx even = (c.adjoint() * mu2 * c)(0);
    Coeffs scalar_mu(static_cast<size_t>(scan_n_max) + 1);
    scalar_mu[0] = 1.0;
    for (long n = 1; n <= scan_n_max; ++n)
      scalar_mu[static_cast<size_t>(n)] = n % 2 ? odd : even;
    return state_recurrence(scalar_mu).return_probability;
  }
};

int cmd_example_shift_eig(const RunConfig& cfg) {
  const long n_max = cfg.n_max > 0 ? cfg.n_max : 24;
  ShiftFlipModel model = build_shift_plus_flip(n_max + 2);
  RecurrenceReport rep =
      recurrence_report(model.step, model.subspace, n_max, TailPolicy::none);

  FirstReturnData fr = first_return_direct(model.step, model.subspace, n_max);
  MatC a1(2, 2), a2(2, 2);
  a1 << 0, kInvSqrt2, kInvSqrt2, 0;
  a2 << 0.5, 0, 0, 0;
  double amp_defect = std::max(max_abs(fr.a[1] - a1), max_abs(fr.a[2] - a2));
  double amp_tail = 0.0;
  for (size_t n = 3; n < fr.a.size(); ++n)
    amp_tail = std::max(amp_tail, max_abs(fr.a[n]));

  MatC r_closed(2, 2);
  r_closed << 0.75, 0, 0, 0.5;
  const double r_defect = max_abs(rep.r_op - r_closed);

  // Crossover of the state return probability against the subspace quadratic
  // form 3/4 - b/4, located by bisection on the computed curves.
  ShiftEigScan scan = ShiftEigScan::build(40);
  auto gap = [&](double b) { return scan.state_return(b) - (0.75 - 0.25 * b); };
  double lo = 0.3, hi = 0.6;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  const double crossover = 0.5 * (lo + hi);
  const double crossover_closed = (5.0 - std::sqrt(17.0)) / 2.0;

  Json j;
  j["schema"] = "qrec.example/1";
  j["name"] = "shift-eig";
  j["report"] = json_report(rep);
  j["closed_form"] = Json{{"r_diag", Json::array({0.75, 0.5})},
                          {"a_1", json_matrix(a1)},
                          {"a_2", json_matrix(a2)},
                          {"crossover_beta_sq", crossover_closed}};
  j["computed"] = Json{
      {"r_diag", Json::array({rep.r_eigenvalues[0].value,
                              rep.r_eigenvalues[1].value})},
      {"r_defect", r_defect},
      {"amplitude_defect", amp_defect},
      {"amplitude_tail_residual", amp_tail},
      {"compression_alternation_defect", scan.alternation_defect},
      {"crossover_beta_sq", crossover},
      {"crossover_defect", std::abs(crossover - crossover_closed)}};
  emit(cfg, "shift_eig_report.json", json_dump(j));

  std::printf("shift-eig: R = diag(%.12f, %.12f), closed form diag(3/4, 1/2), defect %.2e\n",
              rep.r_eigenvalues[0].value, rep.r_eigenvalues[1].value, r_defect);
  std::printf("  amplitudes terminate after two steps: defect %.2e, tail residual %.2e\n",
              amp_defect, amp_tail);
  std::printf("  state-vs-subspace crossover at |beta|^2 = %.10f, closed form (5-sqrt17)/2 = %.10f\n",
              crossover, crossover_closed);
  std::printf("  classification: %s\n", to_string(rep.classification).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// example cyclic: cyclic shift on three sites, V = span{e0, e1}.
// ---------------------------------------------------------------------------

int cmd_example_cyclic(const RunConfig& cfg) {
  const long n_max = cfg.n_max > 0 ? cfg.n_max : 12;
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v;
  v.frame = MatC::Zero(3, 2);
  v.frame(0, 0) = 1.0;
  v.frame(1, 1) = 1.0;
  v.support = {0, 1};
  RecurrenceReport rep = recurrence_report(u, v, n_max, TailPolicy::none);

  MatC tau_closed(2, 2);
  tau_closed << 1, 0, 0, 2;
  const double tau_defect = max_abs(rep.tau_op - tau_closed);
  KInvariant k = k_invariant(u, v);

  Json j;
  j["schema"] = "qrec.example/1";
  j["name"] = "cyclic";
  j["report"] = json_report(rep);
  j["closed_form"] = Json{{"tau_diag", Json::array({1.0, 2.0})},
                          {"avg_tau", 1.5},
                          {"k", 3}};
  j["computed"] = Json{{"tau_defect", tau_defect},
                       {"avg_tau", rep.avg_tau},
                       {"k_routes", Json{{"spectral", k.spectral},
                                         {"winding", k.winding},
                                         {"frobenius", k.frobenius},
                                         {"dim_minus_nu", k.dim_minus_nu}}},
                       {"k", k.value}};
  emit(cfg, "cyclic_report.json", json_dump(j));

  std::printf("cyclic: tau_op = diag(%.12f, %.12f), closed form diag(1, 2), defect %.2e\n",
              std::real(rep.tau_op(0, 0)), std::real(rep.tau_op(1, 1)),
              tau_defect);
  std::printf("  averaged tau = %.12f (= 3/2), K = %ld by all routes (frobenius %.9f)\n",
              rep.avg_tau, k.value, k.frobenius);
  std::printf("  classification: %s\n", to_string(rep.classification).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// example crossover: the state-vs-subspace scan of the shift-eig model as
// curve data, plus the zero-width (single qubit) sanity pair.
// ---------------------------------------------------------------------------

int cmd_example_crossover(const RunConfig& cfg) {
  const long n_max = cfg.n_max > 0 ? cfg.n_max : 2000;
  ShiftEigScan scan = ShiftEigScan::build(40);
  scan.scan_n_max = n_max;
  ShiftFlipModel model = build_shift_plus_flip(64);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 62);
  ReturnProbability r = return_probability(fr.a);

  CurveTable curve;
  curve.columns = {"beta_sq", "state_return", "subspace_return"};
  for (int p = 0; p < cfg.points; ++p) {
    double b = static_cast<double>(p) / (cfg.points - 1);
    VecC c(2);
    c << std::sqrt(1.0 - b), std::sqrt(b);
    double quad = std::real((c.adjoint() * r.partial * c)(0));
    curve.rows.push_back({b, scan.state_return(b), quad});
  }
  emit(cfg, "crossover_curve.csv", to_csv(curve));

  // Zero-width path: for the 1-dim subspace spanned by psi_b the subspace
  // return probability and the state return probability are the same number,
  // computed here by the two independent routes.
  const double b0 = 0.36;
  const long pair_n_max = 300;
  ShiftFlipModel small = build_shift_plus_flip(pair_n_max + 2);
  VecC psi_b = std::sqrt(1.0 - b0) * small.psi + std::sqrt(b0) * small.phi;
  double state_route =
      monitored_state(small.step, psi_b, pair_n_max).return_probability;
  Subspace qubit;
  qubit.frame = psi_b;
  RecurrenceReport qubit_rep = report_from_amplitudes(
      first_return_direct(small.step, qubit, pair_n_max).a, TailPolicy::none);
  const double crossover_closed = (5.0 - std::sqrt(17.0)) / 2.0;

  Json j;
  j["schema"] = "qrec.example/1";
  j["name"] = "crossover";
  j["n_max"] = n_max;
  j["points"] = cfg.points;
  j["closed_form"] =
      Json{{"state_return", "(1 - b/2) / (1 + b/2)"},
           {"subspace_return", "3/4 - b/4"},
           {"crossover_beta_sq", crossover_closed}};
  j["single_qubit"] =
      Json{{"beta_sq", b0},
           {"state_route", state_route},
           {"subspace_route", qubit_rep.avg_return_probability},
           {"difference",
            std::abs(state_route - qubit_rep.avg_return_probability)}};
  emit(cfg, "crossover_report.json", json_dump(j));

  std::printf("crossover: %d-point scan written; closed-form crossing at |beta|^2 = %.10f\n",
              cfg.points, crossover_closed);
  std::printf("  zero-width path: state route %.12f vs subspace route %.12f (diff %.2e)\n",
              state_route, qubit_rep.avg_return_probability,
              std::abs(state_route - qubit_rep.avg_return_probability));
  return 0;
}

int cmd_example(const RunConfig& cfg) {
  if (cfg.model == "shift-eig") return cmd_example_shift_eig(cfg);
  if (cfg.model == "cyclic") return cmd_example_cyclic(cfg);
  if (cfg.model == "crossover") return cmd_example_crossover(cfg);
  throw InvalidInput("unknown example '" + cfg.model +
                     "' (expected shift-eig, cyclic or crossover)");
}

// ---------------------------------------------------------------------------
// site1d: site recurrence of a 1D coined walk through the factorized
// scalar Schur functions.
// ---------------------------------------------------------------------------

Json json_norm_sq(const NormSq& n) {
  return Json{{"partial", n.partial},
              {"interval", json_interval(n.interval)},
              {"tail", json_tail(n.tail)}};
}

Json json_finite_or_inf(double x) {
  return std::isinf(x) ? Json("inf") : Json(x);
}

int cmd_site1d(const RunConfig& cfg) {
  CoinSpec1D spec = coin_spec_1d(cfg);
  const int order =
      static_cast<int>(cfg.n_max > 0 ? cfg.n_max : 2000);
  SiteSchur s = site_schur(spec, cfg.site);
  SiteReturn ret = site_return_matrix(s, order);
  SiteTau tau = site_tau_matrix(s);
  SiteQubits qubits = site_qubits(s.gamma);

  // Extreme qubits: R_x = |f_left|^2 P_left + |f_right|^2 P_right, so its
  // eigenvectors are the two qubits and the extreme return probabilities are
  // the two squared norms.
  const bool left_is_max = ret.left_norm_sq.partial >= ret.right_norm_sq.partial;
  VecC qmax = left_is_max ? VecC(qubits.left) : VecC(qubits.right);
  VecC qmin = left_is_max ? VecC(qubits.right) : VecC(qubits.left);
  const NormSq& nmax = left_is_max ? ret.left_norm_sq : ret.right_norm_sq;
  const NormSq& nmin = left_is_max ? ret.right_norm_sq : ret.left_norm_sq;

  Json j;
  j["schema"] = "qrec.site_report/1";
  j["lattice"] = cfg.lattice;
  j["site"] = cfg.site;
  j["order"] = order;
  j["gamma"] = json_complex(s.gamma);
  j["rho"] = s.rho;
  j["left"] = Json{{"rational_inner", s.left.rational_inner()},
                   {"degree", s.left_degree},
                   {"norm_sq", json_norm_sq(ret.left_norm_sq)},
                   {"tau", json_finite_or_inf(tau.left_tau)}};
  j["right"] = Json{{"rational_inner", s.right.rational_inner()},
                    {"degree", s.right_degree},
                    {"norm_sq", json_norm_sq(ret.right_norm_sq)},
                    {"tau", json_finite_or_inf(tau.right_tau)}};
  j["r_matrix"] = json_matrix(MatC(ret.matrix));
  j["average_return"] = ret.average;
  j["extreme_qubits"] = Json{{"max_value", nmax.partial},
                             {"max_interval", json_interval(nmax.interval)},
                             {"max_qubit", json_vector(qmax)},
                             {"min_value", nmin.partial},
                             {"min_interval", json_interval(nmin.interval)},
                             {"min_qubit", json_vector(qmin)}};
  Json jtau;
  jtau["matrix_finite"] = tau.matrix_finite;
  if (tau.matrix_finite) jtau["matrix"] = json_matrix(MatC(tau.matrix));
  jtau["average"] = json_finite_or_inf(tau.average);
  j["tau"] = jtau;

  // Closed-form comparison for a constant coin with a free side.
  if (spec.window.empty() && spec.kind != Lattice1D::finite) {
    ConstantCoinSite cc = constant_coin_site(spec.default_gamma, order);
    double computed = spec.kind == Lattice1D::line
                          ? ret.average
                          : ret.right_norm_sq.partial;
    j["closed_form"] =
        Json{{"norm_sq", cc.norm_sq},
             {"computed", computed},
             {"defect_within_tail",
              std::abs(cc.norm_sq - computed) <=
                  std::max(nmin.interval.width(), 1e-10)}};
  }
  emit(cfg, "site_report.json", json_dump(j));

  if (cfg.curves) {
    for (int phase = 0; phase < 2; ++phase) {
      StateSiteCurve curve = state_site_curve(
          s, cfg.points, phase == 0 ? cplx(1, 0) : cplx(0, 1), order);
      CurveTable table;
      table.columns = {"t", "state_return", "site_return"};
      for (size_t p = 0; p < curve.t.size(); ++p)
        table.rows.push_back({curve.t[p], curve.state_probability[p],
                              curve.site_probability[p]});
      emit(cfg,
           phase == 0 ? "state_site_curve_real.csv"
                      : "state_site_curve_imag.csv",
           to_csv(table));
    }
  }

  std::printf("site %d on %s: return extremes %.10f / %.10f, average %.10f\n",
              cfg.site, cfg.lattice.c_str(), nmax.partial, nmin.partial,
              ret.average);
  if (tau.matrix_finite) {
    std::printf("  tau extremes %.1f / %.1f, average %.2f\n", tau.left_tau,
                tau.right_tau, tau.average);
  } else {
    std::string left_s = std::isinf(tau.left_tau)
                             ? std::string("inf")
                             : std::to_string(tau.left_tau);
    std::string right_s = std::isinf(tau.right_tau)
                              ? std::string("inf")
                              : std::to_string(tau.right_tau);
    std::printf("  tau: left %s, right %s\n", left_s.c_str(), right_s.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// walk2d: origin return spectrum of a coined 2D walk, plus the nested
// subspace curves behind the figures.
// ---------------------------------------------------------------------------

void emit_square_curves(const RunConfig& cfg, const Walk2DJob& job) {
  const double s2 = 1.0 / std::sqrt(2.0);
  const bool is_grover = cfg.coin == "grover";
  // Grover figure: path in the (->, <-) plane, third vector (up + phase
  // down)/sqrt2. Fourier figure: path in the (->, up) plane, third vector
  // (<- + phase down)/sqrt2.
  MatC w2 = MatC::Zero(4, 2);
  w2(0, 0) = 1.0;
  w2(is_grover ? 2 : 1, 1) = 1.0;
  auto path = [&](double t) {
    VecC v = VecC::Zero(4);
    v(0) = std::cos(t);
    v(is_grover ? 2 : 1) = std::sin(t);
    return v;
  };
  for (int phase = 0; phase < 2; ++phase) {
    MatC w3 = MatC::Zero(4, 3);
    w3.leftCols(2) = w2;
    cplx ph = phase == 0 ? cplx(1, 0) : cplx(0, 1);
    if (is_grover) {
      w3(1, 2) = s2;
      w3(3, 2) = ph * s2;
    } else {
      w3(2, 2) = s2;
      w3(3, 2) = ph * s2;
    }
    SubspaceCurves2D c = subspace_curves_2d(job, {w2, w3}, path, cfg.points);
    CurveTable table;
    table.columns.push_back("t");
    for (const auto& label : c.labels) table.columns.push_back(label);
    for (size_t p = 0; p < c.t.size(); ++p) {
      std::vector<double> row{c.t[p]};
      for (const auto& prob : c.probability) row.push_back(prob[p]);
      table.rows.push_back(std::move(row));
    }
    emit(cfg,
         phase == 0 ? "subspace_curves_real.csv" : "subspace_curves_imag.csv",
         to_csv(table));
  }
}

void emit_hex_curves(const RunConfig& cfg, const Walk2DJob& job) {
  const double s2 = 1.0 / std::sqrt(2.0);
  MatC w2 = MatC::Zero(3, 2);
  w2(0, 0) = s2;
  w2(2, 0) = s2 * cplx(1.0, 1.0) * s2;
  w2(1, 1) = 1.0;
  auto path = [&](double t) {
    VecC v = VecC::Zero(3);
    v(0) = std::cos(t) * s2;
    v(2) = std::cos(t) * s2 * cplx(1.0, 1.0) * s2;
    v(1) = cplx(0, 1) * std::sin(t);
    return v;
  };
  SubspaceCurves2D c = subspace_curves_2d(job, {w2}, path, cfg.points);
  CurveTable table;
  table.columns.push_back("t");
  for (const auto& label : c.labels) table.columns.push_back(label);
  for (size_t p = 0; p < c.t.size(); ++p) {
    std::vector<double> row{c.t[p]};
    for (const auto& prob : c.probability) row.push_back(prob[p]);
    table.rows.push_back(std::move(row));
  }
  emit(cfg, "subspace_curves_qubit.csv", to_csv(table));
}

int cmd_walk2d(const RunConfig& cfg) {
  Walk2DJob job = walk_job(cfg);
  RSpectrum spectrum = r_eigenvalues(job);

  Json j;
  j["schema"] = "qrec.walk2d_report/1";
  j["lattice"] = cfg.lattice;
  j["coin"] = cfg.coin;
  j["n_max"] = job.n_max;
  j["eigenvalues"] = json_eigenvalues(spectrum.eigenvalues);
  Json pairs = Json::array();
  for (auto [lo, hi] : spectrum.degenerate_pairs)
    pairs.push_back(Json::array({lo, hi}));
  j["degenerate_pairs"] = pairs;
  j["trace_remainder"] = spectrum.r.trace_remainder;
  j["tail_fit"] = json_tail(spectrum.r.fit);
  emit(cfg, "walk2d_report.json", json_dump(j));

  std::printf("%s / %s at n_max = %ld:\n", cfg.lattice.c_str(),
              cfg.coin.c_str(), job.n_max);
  for (const auto& e : spectrum.eigenvalues)
    std::printf("  eigenvalue %.6f, enclosure [%.6f, %.6f]\n", e.value,
                e.enclosure.lo, e.enclosure.hi);
  for (auto [lo, hi] : spectrum.degenerate_pairs)
    std::printf("  eigenvalues %d and %d are degenerate within 1e-3\n", lo, hi);

  if (cfg.curves) {
    if (job.spec.kind == Lattice2D::square)
      emit_square_curves(cfg, job);
    else
      emit_hex_curves(cfg, job);
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyReport report =
      run_verify(cfg.suite, cfg.seed, cfg.inject_failure);
  std::cout << format_verify(report);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monitored recurrence of subspaces under unitary dynamics"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "key=value file applied on top of the flags");
    sub->add_option("--out", cfg.out_dir, "output directory (default .)");
    sub->add_option("--nmax", cfg.n_max, "series horizon (0 = per-command default)");
    sub->add_option("--tol", cfg.tol, "numerical tolerance");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--tail", cfg.tail, "tail policy: none | powerlaw");
    sub->add_option("--points", cfg.points, "number of curve samples");
  };

  CLI::App* example = app.add_subcommand(
      "example", "closed-form models: shift-eig | cyclic | crossover");
  example->add_option("name", cfg.model, "which example to run");
  add_common(example);

  CLI::App* site1d = app.add_subcommand(
      "site1d", "site recurrence of a coined walk on a 1D lattice");
  site1d->add_option("--lattice", cfg.lattice,
                     "half_line | finite | line (required)");
  site1d->add_option("--coin", cfg.coin, "default coin parameter gamma");
  site1d->add_option("--coins", cfg.coins,
                     "coin window 'x:gamma;x:gamma;...'");
  site1d->add_option("--site", cfg.site, "monitored site");
  site1d->add_option("--sites", cfg.sites, "number of sites (finite lattice)");
  site1d->add_flag("--curves", cfg.curves, "emit state-vs-site curve CSVs");
  add_common(site1d);

  CLI::App* walk2d = app.add_subcommand(
      "walk2d", "origin return spectrum of a coined walk on a 2D lattice");
  walk2d->add_option("--lattice", cfg.lattice, "square | hexagonal (required)");
  walk2d->add_option("--coin", cfg.coin, "grover | fourier | c0 (required)");
  walk2d->add_flag("--curves", cfg.curves, "emit nested-subspace curve CSVs");
  add_common(walk2d);

  CLI::App* verify =
      app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", cfg.suite, "fast | full");
  verify->add_flag("--inject-failure", cfg.inject_failure)->group("");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    cfg.validate();
    if (example->parsed()) return cmd_example(cfg);
    if (site1d->parsed()) return cmd_site1d(cfg);
    if (walk2d->parsed()) return cmd_walk2d(cfg);
    return cmd_verify(cfg);
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const ResourceBudget& e) {
    std::cerr << "resource budget: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
