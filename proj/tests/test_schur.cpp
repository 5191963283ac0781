#include <random>

#include "doctest.h"
#include "qrec/schur.hpp"

using namespace qrec;

namespace {

std::mt19937_64 rng(77001);

cplx random_gamma(double max_mod = 0.8) {
  std::uniform_real_distribution<double> mod(0.05, max_mod);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * kPi);
  return std::polar(mod(rng), arg(rng));
}

cplx random_point(double max_mod = 0.9) {
  std::uniform_real_distribution<double> mod(0.05, max_mod);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * kPi);
  return std::polar(mod(rng), arg(rng));
}

SchurParams random_zero_tail(int len) {
  std::vector<cplx> pre(static_cast<size_t>(len));
  for (auto& g : pre) g = random_gamma();
  SchurParams p;
  p.prefix = std::move(pre);
  return p;
}

cplx horner(const Coeffs& c, cplx z) { return series_eval(c, z); }

}  // namespace

TEST_CASE("constant and linear Schur functions") {
  SchurParams c;
  c.prefix = {cplx(0.4, -0.3)};
  CHECK(std::abs(eval_schur(c, cplx(0.2, 0.5)) - cplx(0.4, -0.3)) < 1e-12);
  Coeffs t = taylor_coeffs(c, 6);
  CHECK(std::abs(t[0] - cplx(0.4, -0.3)) < 1e-14);
  for (size_t k = 1; k < t.size(); ++k) CHECK(std::abs(t[k]) < 1e-14);

  SchurParams lin = SchurParams::terminated({cplx(0)}, cplx(1));
  CHECK(std::abs(eval_schur(lin, cplx(0.3, 0.4)) - cplx(0.3, 0.4)) < 1e-13);
  // Terminated sequences evaluate exactly on the boundary.
  cplx on_circle = std::polar(1.0, 0.77);
  CHECK(std::abs(eval_schur(lin, on_circle) - on_circle) < 1e-13);
  Coeffs tl = taylor_coeffs(lin, 5);
  CHECK(std::abs(tl[1] - cplx(1)) < 1e-14);
  CHECK(std::abs(tl[0]) + std::abs(tl[2]) + std::abs(tl[3]) < 1e-14);
}

TEST_CASE("periodic parameters satisfy the fixed-point quadratic") {
  // With all parameters equal to gamma, f = (gamma + z f)/(1 + conj(gamma) z f),
  // i.e. conj(gamma) z f^2 + (1 - z) f - gamma = 0.
  cplx gamma(0.5, 0.2);
  SchurParams p = SchurParams::eventually_periodic({}, {gamma});
  for (int trial = 0; trial < 5; ++trial) {
    cplx z = random_point(0.85);
    cplx f = eval_schur(p, z);
    cplx residual = std::conj(gamma) * z * f * f + (cplx(1) - z) * f - gamma;
    CHECK(std::abs(residual) < 1e-10);
    CHECK(std::abs(f) < 1.0);
  }
}

TEST_CASE("Taylor sections reproduce point evaluation") {
  SchurParams shapes[3] = {
      random_zero_tail(4),
      SchurParams::terminated({random_gamma(), random_gamma()},
                              std::polar(1.0, 0.9)),
      SchurParams::eventually_periodic({random_gamma()},
                                       {random_gamma(), random_gamma()})};
  for (const SchurParams& p : shapes) {
    Coeffs t = taylor_coeffs(p, 70);
    cplx z = std::polar(0.35, 1.1);
    CHECK(std::abs(horner(t, z) - eval_schur(p, z)) < 1e-12);
  }
}

TEST_CASE("Schur algorithm recovers parameters from Taylor data") {
  SchurParams p = random_zero_tail(5);
  Coeffs t = taylor_coeffs(p, 12);
  SchurAlgorithmResult r = schur_params_from_taylor(t);
  CHECK_FALSE(r.hit_unit_circle);
  REQUIRE(r.extracted >= 5);
  for (int k = 0; k < 5; ++k)
    CHECK(std::abs(r.params.param(k) - p.param(k)) < 1e-10);
  for (int k = 5; k < r.extracted; ++k)
    CHECK(std::abs(r.params.param(k)) < 1e-9);
}

TEST_CASE("Schur algorithm certifies rational inner input") {
  // Degree-2 Blaschke product z (z - a)/(1 - conj(a) z).
  cplx a(0.4, -0.25);
  Coeffs num = {cplx(0), -a, cplx(1), cplx(0), cplx(0), cplx(0),
                cplx(0), cplx(0), cplx(0), cplx(0)};
  Coeffs den = {cplx(1), -std::conj(a), cplx(0), cplx(0), cplx(0),
                cplx(0), cplx(0), cplx(0), cplx(0), cplx(0)};
  Coeffs t = series_div(num, den);
  SchurAlgorithmResult r = schur_params_from_taylor(t);
  CHECK(r.hit_unit_circle);
  REQUIRE(r.params.rational_inner());
  CHECK(r.params.free_count() == 2);
  // Round trip through the recovered parameters.
  Coeffs back = taylor_coeffs(r.params, 9);
  for (size_t k = 0; k < t.size(); ++k)
    CHECK(std::abs(back[k] - t[k]) < 1e-10);
}

TEST_CASE("iterates satisfy the Schur recursion") {
  SchurParams p = SchurParams::eventually_periodic(
      {random_gamma(), random_gamma()}, {random_gamma()});
  for (long k = 0; k < 4; ++k) {
    SchurParams fk = iterate(p, k);
    SchurParams fk1 = iterate(p, k + 1);
    cplx g = p.param(k);
    for (int trial = 0; trial < 4; ++trial) {
      cplx z = random_point();
      cplx lhs = eval_schur(fk, z);
      cplx next = eval_schur(fk1, z);
      cplx rhs = (g + z * next) / (cplx(1) + std::conj(g) * z * next);
      CHECK(std::abs(lhs - rhs) < 1e-11);
    }
  }
}

TEST_CASE("inverse iterates match ratios of Szego polynomials") {
  SchurParams p = random_zero_tail(6);
  SzegoSystem s = szego_polynomials(p, 6);
  for (long k = -1; k < 5; ++k) {
    SchurParams fk = inverse_iterate(p, k);
    for (int trial = 0; trial < 4; ++trial) {
      cplx z = random_point();
      cplx lhs = eval_schur(fk, z);
      cplx rhs = horner(s.phi[static_cast<size_t>(k + 1)], z) /
                 horner(s.phi_star[static_cast<size_t>(k + 1)], z);
      CHECK(std::abs(lhs - rhs) < 1e-11);
    }
  }
}

TEST_CASE("Szego recurrence and reversal identities") {
  SchurParams p = random_zero_tail(5);
  SzegoSystem s = szego_polynomials(p, 5);
  for (int k = 0; k < 5; ++k) {
    double rho = std::sqrt(1.0 - std::norm(p.param(k)));
    for (int trial = 0; trial < 3; ++trial) {
      cplx z = random_point();
      cplx phi_k = horner(s.phi[static_cast<size_t>(k)], z);
      cplx phs_k = horner(s.phi_star[static_cast<size_t>(k)], z);
      cplx phi_k1 = horner(s.phi[static_cast<size_t>(k) + 1], z);
      cplx phs_k1 = horner(s.phi_star[static_cast<size_t>(k) + 1], z);
      CHECK(std::abs(rho * phi_k1 - (z * phi_k - std::conj(p.param(k)) * phs_k)) < 1e-12);
      CHECK(std::abs(rho * phs_k1 - (-p.param(k) * z * phi_k + phs_k)) < 1e-12);
      // phi*_k(z) = z^k conj(phi_k)(1/conj(z))
      cplx reversed = std::pow(z, k) *
                      std::conj(horner(s.phi[static_cast<size_t>(k)],
                                       cplx(1) / std::conj(z)));
      CHECK(std::abs(phs_k - reversed) < 1e-11);
    }
  }
}

TEST_CASE("Khrushchev formula objects verify against Szego polynomial definitions") {
  SchurParams p = random_zero_tail(7);
  SzegoSystem s = szego_polynomials(p, 7);
  for (long k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 20; ++trial) {
      cplx z = random_point(0.9);
      cplx F = caratheodory_from_schur(eval_schur(p, z), z);
      KhrushchevValues kv = khrushchev_Fk(p, k, z);

      // Definitions through the orthogonal polynomials:
      //   G_k  = z^-k  phi_k  (phi_{k+1} F + omega_{k+1})
      //   G~_k = z^-k-1 phi*_k (phi*_{k+1} F - omega*_{k+1})
      auto ph = [&](const std::vector<Coeffs>& v, long j) {
        return horner(v[static_cast<size_t>(j)], z);
      };
      cplx gk = std::pow(z, -static_cast<double>(k)) * ph(s.phi, k) *
                (ph(s.phi, k + 1) * F + ph(s.omega, k + 1));
      cplx gtk = std::pow(z, -static_cast<double>(k + 1)) * ph(s.phi_star, k) *
                 (ph(s.phi_star, k + 1) * F - ph(s.omega_star, k + 1));
      CHECK(std::abs(kv.G_k - gk) < 1e-9);
      CHECK(std::abs(kv.G_tilde_k - gtk) < 1e-9);

      // F_k through the iterates and the ratio identity.
      cplx fk = eval_schur(iterate(p, k), z);
      cplx fk1 = eval_schur(iterate(p, k + 1), z);
      cplx fkm = eval_schur(inverse_iterate(p, k - 1), z);
      cplx prod = z * fkm * fk;
      CHECK(std::abs(kv.F_k - (cplx(1) + prod) / (cplx(1) - prod)) < 1e-10);
      CHECK(std::abs(kv.G_tilde_k * fkm - kv.G_k * fk1) < 1e-9);

      // rho_k (F_k - F_{k+1}) = gamma_k G_k + conj(gamma_k) G~_k.
      double rho = std::sqrt(1.0 - std::norm(p.param(k)));
      cplx fk_next = khrushchev_Fk(p, k + 1, z).F_k;
      CHECK(std::abs(rho * (kv.F_k - fk_next) -
                     (p.param(k) * kv.G_k + std::conj(p.param(k)) * kv.G_tilde_k)) < 1e-9);
    }
  }
}

TEST_CASE("Caratheodory transforms round-trip as series") {
  SchurParams p = random_zero_tail(5);
  Coeffs f = taylor_coeffs(p, 20);
  Coeffs F = caratheodory_series_from_schur(f);
  CHECK(std::abs(F[0] - cplx(1)) < 1e-14);
  Coeffs back = schur_series_from_caratheodory(F);
  REQUIRE(back.size() >= f.size() - 1);
  for (size_t k = 0; k + 1 < f.size(); ++k)
    CHECK(std::abs(back[k] - f[k]) < 1e-12);

  // Pointwise consistency: series(F) evaluated == transform of f evaluated.
  cplx z = std::polar(0.3, 2.1);
  CHECK(std::abs(horner(F, z) -
                 caratheodory_from_schur(eval_schur(p, z), z)) < 1e-10);
}

TEST_CASE("matrix Caratheodory transforms round-trip") {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  MatSeries f(8, MatC::Zero(3, 3));
  for (auto& m : f)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(u(rng), u(rng));
  MatSeries F = caratheodory_series_from_schur(f);
  CHECK((F[0] - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  MatSeries back = schur_series_from_caratheodory(F);
  for (size_t k = 0; k + 1 < f.size(); ++k)
    CHECK((back[k] - f[k]).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("winding numbers of explicit loops") {
  WindingResult w = winding_number([](double th) {
    return std::polar(1.0, 3.0 * th) * (2.0 + std::cos(5.0 * th));
  });
  CHECK(w.winding == 3);
  CHECK(w.residue < 1e-9);

  w = winding_number([](double th) {
    return std::conj(std::polar(1.0, 2.0 * th)) * cplx(1.5, 0.2);
  });
  CHECK(w.winding == -2);

  // A loop through the origin must be rejected.
  CHECK_THROWS_AS((void)winding_number([](double th) {
                    return cplx(std::cos(th), 0.0);
                  }),
                  NotApplicable);
}

TEST_CASE("l2 norms of parameter sequences") {
  // Constant gamma: ||f||^2 = |gamma|^2 exactly.
  SchurParams c;
  c.prefix = {cplx(0.5, 0.0)};
  NormSq n = l2_norm_sq(c, 64);
  CHECK(std::abs(n.partial - 0.25) < 1e-13);

  // Terminated (rational inner): exactly 1.
  SchurParams inner = SchurParams::terminated({random_gamma()}, cplx(1));
  NormSq ni = l2_norm_sq(inner, 16);
  CHECK(ni.partial == 1.0);
  CHECK(ni.interval.lo == 1.0);
  CHECK(ni.interval.hi == 1.0);

  // Generic: compare with boundary quadrature of |f|^2 (trapezoid is
  // spectrally accurate for smooth periodic integrands).
  SchurParams p = random_zero_tail(3);
  double quad = 0.0;
  const int m = 4096;
  for (int j = 0; j < m; ++j) {
    // f has an analytic continuation beyond the closed disk here (finite
    // composition of Moebius maps with sub-unit parameters): evaluate just
    // inside and extrapolate by radius refinement.
    cplx z = std::polar(0.999, 2.0 * kPi * j / m);
    quad += std::norm(eval_schur(p, z));
  }
  quad /= m;
  NormSq ng = l2_norm_sq(p, 4000);
  CHECK(ng.partial <= 1.0);
  CHECK(std::abs(ng.partial - quad) < 5e-3);
}

TEST_CASE("regularized first moment recovers the Blaschke degree") {
  // tau_r of a rational inner function tends to its degree as r -> 1.
  cplx a(0.4, -0.25);
  Coeffs num(3000, cplx(0));
  num[1] = -a;
  num[2] = cplx(1);
  Coeffs den(3000, cplx(0));
  den[0] = cplx(1);
  den[1] = -std::conj(a);
  Coeffs t = series_div(num, den);
  double eps = 5e-4;
  double t1 = tau_r(t, 1.0 - eps);
  double t2 = tau_r(t, 1.0 - eps / 2.0);
  double extrapolated = 2.0 * t2 - t1;  // error is O(eps) with smooth constant
  CHECK(std::abs(extrapolated - 2.0) < 1e-4);
}
