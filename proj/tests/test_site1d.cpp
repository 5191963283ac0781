// Tests for the 1D site-recurrence module: left/right factorization of the
// site Schur function, closed-form return probabilities and return times,
// constant-coin Legendre weights, and the state-vs-site comparison curves.
// The decisive check is the dual route: the factorized construction must
// reproduce, coefficient by coefficient, the first-return series obtained by
// monitoring the explicit walk operator.
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "qrec/linops.hpp"
#include "qrec/monitor.hpp"
#include "qrec/schur.hpp"
#include "qrec/series.hpp"
#include "qrec/site1d.hpp"

using namespace qrec;

namespace {

std::mt19937_64 rng(777001);

cplx random_gamma(double max_mag = 0.75) {
  std::uniform_real_distribution<double> mag(0.05, max_mag);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * M_PI);
  return std::polar(mag(rng), arg(rng));
}

double max_series_diff(const MatSeries& a, const MatSeries& b, size_t count) {
  double worst = 0.0;
  for (size_t n = 0; n < count; ++n)
    worst = std::max(worst, (a[n] - b[n]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("site parameter sequences carry reflection data and window coins") {
  SUBCASE("half line keeps a terminated left factor") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::half_line;
    spec.window = {{0, cplx(0.3, 0.1)}, {1, cplx(-0.2, 0.4)}, {3, cplx(0.5)}};
    spec.default_gamma = cplx(0.15, -0.25);

    SiteSchur s = site_schur(spec, 2);
    CHECK(s.gamma == spec.gamma(2));
    CHECK(s.rho ==
          doctest::Approx(std::sqrt(1.0 - std::norm(spec.gamma(2)))));

    // Left factor: parameters (0, -conj(g1), 0, -conj(g0)) then the
    // reflection terminator; degree 2x = 4.
    REQUIRE(s.left.terminator.has_value());
    CHECK(std::abs(*s.left.terminator - cplx(1)) == 0.0);
    REQUIRE(s.left.prefix.size() == 4);
    CHECK(s.left.param(0) == cplx(0));
    CHECK(s.left.param(1) == -std::conj(spec.gamma(1)));
    CHECK(s.left.param(2) == cplx(0));
    CHECK(s.left.param(3) == -std::conj(spec.gamma(0)));
    CHECK(s.left_degree == 4);
    CHECK(s.left.rational_inner());

    // Right factor: window pair (0, g3), then the constant tail cycle.
    CHECK(!s.right.terminator.has_value());
    CHECK(s.right.param(0) == cplx(0));
    CHECK(s.right.param(1) == spec.gamma(3));
    CHECK(s.right.param(2) == cplx(0));
    CHECK(s.right.param(3) == spec.default_gamma);
    CHECK(s.right.param(5) == spec.default_gamma);
    CHECK(s.right.param(7) == spec.default_gamma);
    CHECK(s.right_degree == -1);
    CHECK(!s.right.rational_inner());
  }

  SUBCASE("finite lattice terminates both factors") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::finite;
    spec.num_sites = 4;
    for (int j = 0; j < 4; ++j) spec.window[j] = random_gamma();

    SiteSchur s = site_schur(spec, 1);
    REQUIRE(s.left.terminator.has_value());
    REQUIRE(s.right.terminator.has_value());
    CHECK(s.left.prefix.size() == 2);
    CHECK(s.left.param(1) == -std::conj(spec.gamma(0)));
    CHECK(s.right.prefix.size() == 4);
    CHECK(s.right.param(1) == spec.gamma(2));
    CHECK(s.right.param(3) == spec.gamma(3));
    CHECK(s.left_degree == 2);
    CHECK(s.right_degree == 4);
    CHECK(s.left.rational_inner());
    CHECK(s.right.rational_inner());
  }

  SUBCASE("line sites look both ways with periodic tails") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    spec.window = {{-1, cplx(0.2, 0.3)}, {1, cplx(-0.4, 0.1)}};
    spec.default_gamma = cplx(0.1, 0.6);

    SiteSchur s = site_schur(spec, 0);
    CHECK(!s.left.terminator.has_value());
    CHECK(!s.right.terminator.has_value());
    CHECK(s.left.param(1) == -std::conj(spec.gamma(-1)));
    CHECK(s.left.param(3) == -std::conj(spec.default_gamma));
    CHECK(s.left.param(5) == -std::conj(spec.default_gamma));
    CHECK(s.right.param(1) == spec.gamma(1));
    CHECK(s.right.param(3) == spec.default_gamma);
    CHECK(s.left_degree == -1);
    CHECK(s.right_degree == -1);
  }

  SUBCASE("site qubits form a resolution of the identity") {
    SiteQubits q = site_qubits(cplx(0.4, -0.3));
    CHECK(std::abs(q.left.norm() - 1.0) < 1e-14);
    CHECK(std::abs(q.right.norm() - 1.0) < 1e-14);
    CHECK(std::abs(q.left.dot(q.right)) < 1e-14);
    CHECK((q.proj_left + q.proj_right - Mat2::Identity()).cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK((q.proj_left * q.left - q.left).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((q.proj_right * q.left).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("site Schur series matches the monitored compression dual route") {
  // Factorized OPUC construction vs. first-return amplitudes of the explicit
  // walk operator, coefficient by coefficient.  Exercised on all three
  // lattice kinds with randomized coin windows.
  const long n_max = 32;
  const long horizon = 33;

  auto check_site = [&](const CoinSpec1D& spec, int x) {
    UnitaryStep u = build_coined_1d(spec, horizon, x);
    Subspace v = site_subspace_1d(u, x);
    FirstReturnData fr = first_return_direct(u, v, n_max);
    MatSeries direct = schur_from_amplitudes(fr.a);  // f[0..n_max-1]
    MatSeries factored = site_schur_taylor(site_schur(spec, x), n_max - 1);
    REQUIRE(factored.size() >= direct.size());
    CHECK(max_series_diff(direct, factored, direct.size()) < 1e-10);
  };

  SUBCASE("half line") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::half_line;
    for (int j = 0; j <= 4; ++j) spec.window[j] = random_gamma();
    spec.default_gamma = random_gamma(0.5);
    check_site(spec, 0);
    check_site(spec, 2);
  }

  SUBCASE("finite lattice") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::finite;
    spec.num_sites = 5;
    for (int j = 0; j < 5; ++j) spec.window[j] = random_gamma();
    check_site(spec, 0);
    check_site(spec, 2);
    check_site(spec, 4);
  }

  SUBCASE("line") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    for (int j = -2; j <= 2; ++j) spec.window[j] = random_gamma();
    spec.default_gamma = random_gamma(0.5);
    check_site(spec, -1);
    check_site(spec, 1);
  }
}

TEST_CASE("finite lattices return surely with mean times set by the degrees") {
  CoinSpec1D spec;
  spec.kind = Lattice1D::finite;
  spec.num_sites = 5;
  for (int j = 0; j < 5; ++j) spec.window[j] = random_gamma();

  for (int x = 0; x < 5; ++x) {
    SiteSchur s = site_schur(spec, x);
    CHECK(s.left_degree == 2 * x);
    CHECK(s.right_degree == 2 * (5 - 1 - x));

    // Both factors are rational inner, so the return probability operator is
    // exactly the identity.
    SiteReturn ret = site_return_matrix(s, 64);
    CHECK((ret.matrix - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(ret.average == doctest::Approx(1.0).epsilon(1e-14));

    SiteTau tau = site_tau_matrix(s);
    REQUIRE(tau.matrix_finite);
    CHECK(tau.left_tau == doctest::Approx(2.0 * x + 1.0).epsilon(1e-14));
    CHECK(tau.right_tau ==
          doctest::Approx(2.0 * (5 - 1 - x) + 1.0).epsilon(1e-14));
    // The mean over the site qubit sphere is the lattice size, at every site.
    CHECK(tau.average == doctest::Approx(5.0).epsilon(1e-13));

    SiteQubits q = site_qubits(s.gamma);
    cplx quad_left = q.left.dot(tau.matrix * q.left);
    cplx quad_right = q.right.dot(tau.matrix * q.right);
    CHECK(std::abs(quad_left - cplx(2.0 * x + 1.0)) < 1e-12);
    CHECK(std::abs(quad_right - cplx(2.0 * (5 - 1 - x) + 1.0)) < 1e-12);
  }
}

TEST_CASE("boundary compression of a finite walk agrees with the factors") {
  // Independent route: the first-return generating operator from the Krylov
  // boundary evaluator must coincide with z f_x(conj z)^dagger built from the
  // factorized Schur function, inside the disk and on the boundary.
  CoinSpec1D spec;
  spec.kind = Lattice1D::finite;
  spec.num_sites = 3;
  for (int j = 0; j < 3; ++j) spec.window[j] = random_gamma();

  UnitaryStep u = build_coined_1d(spec, 8, 0);
  REQUIRE(u.genuinely_finite());

  for (int x : {0, 1, 2}) {
    SiteSchur s = site_schur(spec, x);
    Subspace v = site_subspace_1d(u, x);
    BoundaryEvaluator ev(u, v);
    for (cplx z : {cplx(0.35, 0.2), cplx(-0.6, 0.55),
                   std::polar(1.0, 0.9), std::polar(1.0, 2.7)}) {
      MatC direct = ev.a_hat(z);
      Mat2 factored = site_a_hat(s, z);
      CHECK((direct - MatC(factored)).cwiseAbs().maxCoeff() < 1e-9);
    }

    // Winding of det a_hat around the boundary counts the minimal dimension
    // 2 * num_sites, independent of the site.
    WindingResult w = winding_number(
        [&](double theta) { return site_a_hat(s, std::polar(1.0, theta)).determinant(); });
    CHECK(w.winding == 2 * 3);
    CHECK(w.residue < 1e-6);

    // Return-time windings of the boundary compression reproduce the degree
    // formula for both distinguished qubits and for a mixed state.
    SiteQubits q = site_qubits(s.gamma);
    SiteTau tau = site_tau_matrix(s);
    double tl = return_time_winding(ev, VecC(q.left));
    double tr = return_time_winding(ev, VecC(q.right));
    CHECK(std::abs(tl - tau.left_tau) < 1e-6);
    CHECK(std::abs(tr - tau.right_tau) < 1e-6);

    Vec2 mixed = std::cos(0.4) * q.left +
                 std::polar(1.0, 1.3) * std::sin(0.4) * q.right;
    double tm = return_time_winding(ev, VecC(mixed));
    cplx quad = mixed.dot(tau.matrix * mixed);
    CHECK(std::abs(tm - quad.real()) < 1e-6);
  }
}

TEST_CASE("half-line qubits split into a sure-return and a leaking branch") {
  CoinSpec1D spec;
  spec.kind = Lattice1D::half_line;
  for (int j = 0; j <= 3; ++j) spec.window[j] = random_gamma();
  spec.default_gamma = cplx(0.35, 0.2);

  const int x = 2;
  SiteSchur s = site_schur(spec, x);
  SiteQubits q = site_qubits(s.gamma);

  SiteReturn ret = site_return_matrix(s, 4000);
  // Left factor is inner: the left qubit returns with probability one.
  cplx quad_left = q.left.dot(ret.matrix * q.left);
  CHECK(std::abs(quad_left - cplx(1)) < 1e-12);
  // Right qubit leaks; its return probability is the squared norm of the
  // right factor, strictly between 0 and 1.
  cplx quad_right = q.right.dot(ret.matrix * q.right);
  double rn = l2_norm_sq(taylor_coeffs(s.right, 4000)).partial;
  CHECK(std::abs(quad_right - cplx(rn)) < 1e-12);
  CHECK(quad_right.real() > 0.0);
  CHECK(quad_right.real() < 0.999);
  CHECK(ret.average == doctest::Approx(0.5 * (1.0 + rn)).epsilon(1e-12));

  // Mean return time of the left qubit: winding and Berry-phase routes both
  // give 2x + 1.  The loop only involves the terminated left factor, whose
  // boundary values are exact.
  SiteTau tau = site_tau_matrix(s);
  CHECK(tau.left_tau == doctest::Approx(2.0 * x + 1.0));
  CHECK(std::isinf(tau.right_tau));
  CHECK(!tau.matrix_finite);

  auto left_boundary = [&](double theta) {
    cplx z = std::polar(1.0, theta);
    return z * std::conj(eval_schur(s.left, std::conj(z)));
  };
  WindingResult w = winding_number(left_boundary);
  CHECK(w.winding == 2 * x + 1);
  CHECK(w.residue < 1e-8);

  BerryResult berry = berry_phase_loop([&](double theta) {
    VecC v(2);
    v << left_boundary(theta), cplx(0);
    return v;
  });
  CHECK(berry.norm_defect < 1e-10);
  CHECK(berry.value == doctest::Approx(2.0 * x + 1.0).epsilon(1e-8));

  // The return matrix depends on the coins to the right of the site only:
  // replacing every coin on the left leaves it unchanged.
  CoinSpec1D other = spec;
  other.window[0] = random_gamma();
  other.window[1] = random_gamma();
  SiteReturn ret_other = site_return_matrix(site_schur(other, x), 4000);
  CHECK((ret.matrix - ret_other.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constant coin sites follow the Legendre pair weights") {
  const double g_sym = std::sqrt(3.0 / 5.0);
  for (cplx gamma : {cplx(g_sym), cplx(1.0 / std::sqrt(2.0)), cplx(0, 0.3)}) {
    CAPTURE(gamma);
    ConstantCoinSite cc = constant_coin_site(gamma, 41);

    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    spec.default_gamma = gamma;
    SiteSchur s = site_schur(spec, 0);

    Coeffs right = taylor_coeffs(s.right, 41);
    Coeffs left = taylor_coeffs(s.left, 41);
    for (size_t n = 0; n <= 41; ++n) {
      CAPTURE(n);
      CHECK(std::abs(right[n] - cc.right_taylor[n]) < 1e-10);
      CHECK(std::abs(left[n] - cc.left_taylor[n]) < 1e-10);
      // Left and right series are conjugate negatives of each other.
      CHECK(std::abs(left[n] + std::conj(right[n])) < 1e-10);
      if (n % 2 == 0) CHECK(std::abs(right[n]) < 1e-14);
    }

    // Leading weights in closed form: d_1 = 1 and d_2 = 1 - |gamma|^2.
    REQUIRE(cc.pair_weight.size() >= 3);
    CHECK(cc.pair_weight[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cc.pair_weight[2] ==
          doctest::Approx(1.0 - std::norm(gamma)).epsilon(1e-12));
    CHECK(std::abs(right[1] - gamma) < 1e-14);
    CHECK(std::abs(right[3] - gamma * (1.0 - std::norm(gamma))) < 1e-12);
  }

  SUBCASE("closed-form norm and its numerical partial sums") {
    // The balanced coin gives return probability exactly 2/pi.
    ConstantCoinSite balanced = constant_coin_site(1.0 / std::sqrt(2.0), 1);
    CHECK(balanced.norm_sq == doctest::Approx(2.0 / M_PI).epsilon(1e-14));

    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    spec.default_gamma = cplx(std::sqrt(3.0 / 5.0));
    SiteSchur s = site_schur(spec, 0);
    ConstantCoinSite cc = constant_coin_site(spec.default_gamma, 1);

    NormSq nrm = l2_norm_sq(s.right, 10000);
    CHECK(nrm.partial == doctest::Approx(cc.norm_sq).epsilon(1e-6));
    CHECK(cc.norm_sq >= nrm.interval.lo - 1e-12);
    CHECK(cc.norm_sq <= nrm.interval.hi + 1e-12);

    // Return probability matrix of a line site is the constant norm times
    // the identity (left and right norms coincide for a constant coin).
    SiteReturn ret = site_return_matrix(s, 10000);
    CHECK((ret.matrix - cc.norm_sq * Mat2::Identity()).cwiseAbs().maxCoeff() <
          1e-6);
  }

  SUBCASE("pair weights decay like n^(-3/2)") {
    ConstantCoinSite cc = constant_coin_site(cplx(std::sqrt(3.0 / 5.0)), 4001);
    REQUIRE(cc.pair_weight.size() >= 2001);
    std::vector<double> t(2001, 0.0);
    for (size_t n = 1; n <= 2000; ++n)
      t[n] = cc.pair_weight[n] * cc.pair_weight[n];
    // |d_n|^2 ~ n^(-3) with an oscillating factor; the log-log fit over a
    // wide window averages the oscillation out.
    double p = fit_decay_exponent(t, 200, 2000);
    CHECK(std::abs(p - 3.0) < 0.05);
  }

  SUBCASE("monitored line walk reproduces the universal amplitude matrix") {
    // Every even first-return amplitude is d_n times one universal matrix;
    // odd amplitudes vanish.
    cplx gamma(std::sqrt(3.0 / 5.0));
    ConstantCoinSite cc = constant_coin_site(gamma, 33);

    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    spec.default_gamma = gamma;
    UnitaryStep u = build_coined_1d(spec, 33, 0);
    FirstReturnData fr = first_return_direct(u, site_subspace_1d(u, 0), 32);

    for (long n = 1; n <= 16; ++n) {
      MatC even = fr.a[static_cast<size_t>(2 * n)];
      MatC predicted = cc.pair_weight[static_cast<size_t>(n)] * cc.upsilon;
      CHECK((even - predicted).cwiseAbs().maxCoeff() < 1e-10);
      MatC odd = fr.a[static_cast<size_t>(2 * n - 1)];
      CHECK(odd.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("radial return-time sums approach the degree on terminated sides") {
  CoinSpec1D spec;
  spec.kind = Lattice1D::half_line;
  spec.window = {{0, cplx(0.45, -0.2)}, {1, cplx(0.3, 0.3)}};
  spec.default_gamma = cplx(0.5);

  SiteSchur s = site_schur(spec, 1);
  SiteTauRadial near = site_tau_radial(s, 0.999, 20000);
  SiteTauRadial mid = site_tau_radial(s, 0.99, 8000);
  SiteTauRadial far = site_tau_radial(s, 0.9, 2000);
  // Left factor is a degree-2 rational inner function, so the radial sum
  // converges to the degree as r -> 1.
  CHECK(far.left < mid.left);
  CHECK(mid.left < near.left);
  CHECK(std::abs(near.left - 2.0) < 0.05);
  // The leaking right side keeps a finite Abel sum that grows with r.
  CHECK(far.right < mid.right);
  CHECK(mid.right < near.right);

  CHECK_THROWS_AS(site_tau_radial(s, 1.0, 100), InvalidInput);
  CHECK_THROWS_AS(site_tau_radial(s, 0.0, 100), InvalidInput);
}

TEST_CASE("state and site return probabilities compare as advertised") {
  SUBCASE("half line: a qubit can beat its own site") {
    CoinSpec1D spec;
    spec.kind = Lattice1D::half_line;
    spec.default_gamma = cplx(std::sqrt(3.0 / 5.0));
    SiteSchur s = site_schur(spec, 1);

    // Around t ~ 2 the qubit cos(t)|up> + sin(t)|down> returns with higher
    // probability than the whole site does (gap ~ 0.034 at this coin).
    StateSiteCurve curve = state_site_curve(s, 41, cplx(1), 1200);
    REQUIRE(curve.t.size() == 41);
    bool state_above = false;
    for (size_t i = 0; i < curve.t.size(); ++i) {
      CHECK(curve.state_probability[i] <= 1.0 + 1e-9);
      CHECK(curve.site_probability[i] <= 1.0 + 1e-9);
      if (curve.state_probability[i] > curve.site_probability[i] + 0.02)
        state_above = true;
    }
    CHECK(state_above);
  }

  SUBCASE("line: the site bounds every one of its qubits") {
    cplx gamma(std::sqrt(3.0 / 5.0));
    CoinSpec1D spec;
    spec.kind = Lattice1D::line;
    spec.default_gamma = gamma;
    SiteSchur s = site_schur(spec, 0);
    ConstantCoinSite cc = constant_coin_site(gamma, 1);

    const int num_points = 6;
    StateSiteCurve curve = state_site_curve(s, num_points, cplx(0, 1), 1200);
    for (size_t i = 0; i < curve.t.size(); ++i) {
      CHECK(curve.site_probability[i] ==
            doctest::Approx(cc.norm_sq).epsilon(1e-4));
      CHECK(curve.state_probability[i] <=
            curve.site_probability[i] + 1e-9);
    }

    // Independent closed form at t = pi/5: the state return probability is
    // the squared norm of a product of two constant-coin Schur functions,
    // the second with a detuned head parameter.
    double t = curve.t[1];
    CHECK(t == doctest::Approx(M_PI / 5.0).epsilon(1e-12));
    double rho = std::sqrt(1.0 - std::norm(gamma));
    cplx alpha(std::cos(t)), beta = cplx(0, 1) * std::sin(t);
    cplx head = gamma - (2.0 * cplx(0, 1) * rho / std::conj(gamma)) *
                            std::imag(std::conj(alpha) * beta * gamma);
    SchurParams base = SchurParams::eventually_periodic({cplx(0)}, {cplx(0), gamma});
    SchurParams detuned = SchurParams::eventually_periodic({head}, {cplx(0), gamma});
    Coeffs cb = taylor_coeffs(base, 2400);
    Coeffs cd = taylor_coeffs(detuned, 2400);
    Coeffs prod(cb.size(), cplx(0));
    for (size_t i = 0; i < cb.size(); ++i)
      for (size_t j = 0; i + j < cd.size(); ++j) prod[i + j] += cb[i] * cd[j];
    prod.resize(1201);
    double closed = l2_norm_sq(prod).partial;
    CHECK(curve.state_probability[1] == doctest::Approx(closed).epsilon(5e-3));
  }
}

TEST_CASE("site module input validation") {
  CHECK_THROWS_AS(constant_coin_site(cplx(0), 10), InvalidInput);
  CHECK_THROWS_AS(constant_coin_site(cplx(1), 10), InvalidInput);
  CHECK_THROWS_AS(constant_coin_site(cplx(0.5), 0), InvalidInput);

  CoinSpec1D finite;
  finite.kind = Lattice1D::finite;
  finite.num_sites = 3;
  for (int j = 0; j < 3; ++j) finite.window[j] = cplx(0.3);
  CHECK_THROWS_AS(site_schur(finite, 3), InvalidInput);
  CHECK_THROWS_AS(site_schur(finite, -1), InvalidInput);

  CoinSpec1D half;
  half.kind = Lattice1D::half_line;
  half.default_gamma = cplx(0.4);
  CHECK_THROWS_AS(site_schur(half, -2), InvalidInput);

  SiteSchur s = site_schur(half, 1);
  CHECK_THROWS_AS(site_a_hat(s, cplx(1.5, 0)), InvalidInput);
  CHECK_THROWS_AS(state_site_curve(s, 1, cplx(1), 100), InvalidInput);
  CHECK_THROWS_AS(state_site_curve(s, 8, cplx(0.5), 100), InvalidInput);
}
