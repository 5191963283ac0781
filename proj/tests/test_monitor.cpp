#include <cmath>
#include <random>

#include "doctest.h"
#include "qrec/linops.hpp"
#include "qrec/monitor.hpp"
#include "qrec/series.hpp"

using namespace qrec;

namespace {

std::mt19937_64 rng(90210);

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Subspace span_of_first(long dim, long m) {
  Subspace v;
  v.frame = MatC::Zero(dim, m);
  for (long j = 0; j < m; ++j) {
    v.frame(j, j) = cplx(1);
    v.support.push_back(j);
  }
  return v;
}

double max_abs(const MatC& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// Shift-plus-flip model: every quantity has a closed form.
// ---------------------------------------------------------------------------

TEST_CASE("shift-plus-flip: first-return amplitudes terminate after two steps") {
  ShiftFlipModel model = build_shift_plus_flip(64);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 40);

  MatC a1(2, 2), a2(2, 2);
  a1 << 0, kInvSqrt2, kInvSqrt2, 0;
  a2 << 0.5, 0, 0, 0;
  CHECK(max_abs(fr.a[1] - a1) < 1e-14);
  CHECK(max_abs(fr.a[2] - a2) < 1e-14);
  for (size_t n = 3; n < fr.a.size(); ++n) CHECK(max_abs(fr.a[n]) < 1e-14);

  // Survival weights: (1, 1/2, 1/4, 1/4, ...) for psi, (1, 1/2, 1/2, ...)
  // for phi.
  CHECK(fr.survival(0, 0) == 1.0);
  CHECK(std::abs(fr.survival(1, 0) - 0.5) < 1e-14);
  for (long n = 2; n <= 40; ++n)
    CHECK(std::abs(fr.survival(n, 0) - 0.25) < 1e-14);
  CHECK(fr.survival(0, 1) == 1.0);
  for (long n = 1; n <= 40; ++n)
    CHECK(std::abs(fr.survival(n, 1) - 0.5) < 1e-14);

  // || a_n e_j ||^2 = s_{n-1} - s_n.
  for (long n = 1; n <= 40; ++n)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(fr.a[static_cast<size_t>(n)].col(j).squaredNorm() -
                     (fr.survival(n - 1, j) - fr.survival(n, j))) < 1e-13);
}

TEST_CASE("shift-plus-flip: compressions alternate between two matrices") {
  ShiftFlipModel model = build_shift_plus_flip(40);
  MatSeries mu = mu_sequence(model.step, model.subspace, 20);
  MatC odd(2, 2), even(2, 2);
  odd << 0, kInvSqrt2, kInvSqrt2, 0;
  even << 1, 0, 0, 0.5;
  CHECK(max_abs(mu[0] - MatC::Identity(2, 2)) == 0.0);
  for (size_t n = 1; n <= 20; ++n)
    CHECK(max_abs(mu[n] - (n % 2 ? odd : even)) < 1e-13);
}

TEST_CASE("shift-plus-flip: renewal relation round-trips") {
  ShiftFlipModel model = build_shift_plus_flip(40);
  MatSeries mu = mu_sequence(model.step, model.subspace, 20);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 20);

  MatSeries a_from_mu = amplitudes_from_mu(mu);
  MatSeries mu_from_a = mu_from_amplitudes(fr.a);
  for (size_t n = 0; n <= 20; ++n) {
    CHECK(max_abs(a_from_mu[n] - fr.a[n]) < 1e-12);
    CHECK(max_abs(mu_from_a[n] - mu[n]) < 1e-12);
  }
}

TEST_CASE("shift-plus-flip: return probability operator is diag(3/4, 1/2)") {
  ShiftFlipModel model = build_shift_plus_flip(40);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 20);
  ReturnProbability r = return_probability(fr.a);
  MatC expected(2, 2);
  expected << 0.75, 0, 0, 0.5;
  CHECK(max_abs(r.partial - expected) < 1e-13);
  CHECK(r.trace_remainder < 1e-12);

  auto ev = return_probability_eigenvalues(r);
  REQUIRE(ev.size() == 2);
  CHECK(std::abs(ev[0].value - 0.75) < 1e-13);
  CHECK(std::abs(ev[1].value - 0.50) < 1e-13);
  CHECK(ev[0].enclosure.contains(0.75));
  CHECK(ev[1].enclosure.width() < 1e-12);
}

TEST_CASE("shift-plus-flip: analytic-function bridges") {
  ShiftFlipModel model = build_shift_plus_flip(40);
  MatSeries mu = mu_sequence(model.step, model.subspace, 16);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 16);

  // f(z) = [[z/2, 1/sqrt2], [1/sqrt2, 0]].
  MatSeries f = schur_from_amplitudes(fr.a);
  MatC f0(2, 2), f1(2, 2);
  f0 << 0, kInvSqrt2, kInvSqrt2, 0;
  f1 << 0.5, 0, 0, 0;
  CHECK(max_abs(f[0] - f0) < 1e-14);
  CHECK(max_abs(f[1] - f1) < 1e-14);
  for (size_t n = 2; n < f.size(); ++n) CHECK(max_abs(f[n]) < 1e-14);

  // F(z) = (1 - z^2)^{-1} [[1 + z^2, sqrt2 z], [sqrt2 z, 1]], two ways.
  MatSeries big_f = caratheodory_from_mu(mu);
  MatSeries big_f2 = caratheodory_series_from_schur(f);
  size_t m = std::min(big_f.size(), big_f2.size());
  for (size_t n = 0; n < m; ++n)
    CHECK(max_abs(big_f[n] - big_f2[n]) < 1e-11);

  cplx z(0.31, 0.42);
  MatC closed(2, 2);
  closed << (1.0 + z * z), std::sqrt(2.0) * z, std::sqrt(2.0) * z, cplx(1);
  closed /= (1.0 - z * z);
  // Truncation error of the geometric tail: |z| ~ 0.52, 17 terms kept.
  CHECK(max_abs(mat_series_eval(big_f, z) - closed) < 1e-4);
}

TEST_CASE("shift-plus-flip: transition probabilities between the two states") {
  ShiftFlipModel model = build_shift_plus_flip(40);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 20);
  VecC e0 = VecC::Zero(2), e1 = VecC::Zero(2);
  e0(0) = cplx(1);
  e1(1) = cplx(1);
  CHECK(std::abs(transition_probability(fr.a, e0, e1) - 0.5) < 1e-14);
  CHECK(std::abs(transition_probability(fr.a, e1, e0) - 0.5) < 1e-14);
  // Totals match the diagonal of R.
  CHECK(std::abs(transition_probability(fr.a, e0, e0) +
                 transition_probability(fr.a, e0, e1) - 0.75) < 1e-13);
}

TEST_CASE("shift-plus-flip: the spin-up state returns in exactly two steps") {
  ShiftFlipModel model = build_shift_plus_flip(256);
  StateRecurrence sr = monitored_state(model.step, model.psi, 200);
  CHECK(sr.recurrent);
  CHECK(sr.tau_finite);
  CHECK(std::abs(sr.tau - 2.0) < 1e-12);
  CHECK(std::abs(sr.return_probability - 1.0) < 1e-12);
  // Scalar amplitude sequence is exactly (0, 0, 1, 0, ...).
  CHECK(std::abs(sr.amplitudes[2] - cplx(1)) < 1e-13);
  CHECK(std::abs(sr.amplitudes[1]) < 1e-13);
  CHECK(std::abs(sr.amplitudes[3]) < 1e-13);
}

TEST_CASE("shift-plus-flip: state-vs-subspace return probability crossover") {
  // For psi_b = sqrt(1-b) psi + sqrt(b) phi the state return probability is
  // (1 - b/2) / (1 + b/2) while the subspace quadratic form gives 3/4 - b/4.
  // They cross at b = (5 - sqrt(17)) / 2 ~ 0.4384.  The scalar amplitudes
  // decay like |z0|^{-n} with a root z0 of 1 + sqrt(2 b (1-b)) z - (b/2) z^2
  // as close as 1.006 to the unit circle (b = 0.6), so catching the closed
  // form to 1e-9 needs a few thousand terms.
  ShiftFlipModel model = build_shift_plus_flip(2100);
  FirstReturnData fr = first_return_direct(model.step, model.subspace, 64);
  ReturnProbability r = return_probability(fr.a);

  for (double b : {0.09, 0.36, 0.60, 0.81}) {
    double alpha = std::sqrt(1.0 - b), beta = std::sqrt(b);
    VecC psi_b = alpha * model.psi + beta * model.phi;
    StateRecurrence sr = monitored_state(model.step, psi_b, 2000);
    double state_r = (1.0 - b / 2.0) / (1.0 + b / 2.0);
    CHECK(std::abs(sr.return_probability - state_r) < 1e-9);

    VecC c(2);
    c << alpha, beta;
    double subspace_r = (c.adjoint() * r.partial * c)(0).real();
    CHECK(std::abs(subspace_r - (0.75 - b / 4.0)) < 1e-12);

    double crossover = (5.0 - std::sqrt(17.0)) / 2.0;
    if (b < crossover) CHECK(state_r > subspace_r);
    if (b > crossover) CHECK(subspace_r > state_r);
  }
}

// ---------------------------------------------------------------------------
// Cyclic shift on three sites, V = span{e0, e1}.
// ---------------------------------------------------------------------------

TEST_CASE("cyclic-3: amplitudes, compressions, and return times") {
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v = span_of_first(3, 2);
  validate_frame(v);

  FirstReturnData fr = first_return_direct(u, v, 12);
  MatC a1(2, 2), a2(2, 2);
  a1 << 0, 0, 1, 0;
  a2 << 0, 1, 0, 0;
  CHECK(max_abs(fr.a[1] - a1) < 1e-15);
  CHECK(max_abs(fr.a[2] - a2) < 1e-15);
  for (size_t n = 3; n <= 12; ++n) CHECK(max_abs(fr.a[n]) < 1e-15);

  MatSeries mu = mu_sequence(u, v, 12);
  for (size_t n = 0; n <= 12; ++n) {
    MatC expected = (n % 3 == 0) ? MatC(MatC::Identity(2, 2))
                    : (n % 3 == 1) ? a1
                                   : a2;
    CHECK(max_abs(mu[n] - expected) < 1e-14);
  }

  ReturnTimeOperator tau = tau_operator(fr.a);
  MatC expected_tau(2, 2);
  expected_tau << 1, 0, 0, 2;
  CHECK(max_abs(tau.partial - expected_tau) < 1e-14);
  CHECK(tau.exact);
  CHECK(std::abs(tau.partial.trace().real() / 2.0 - 1.5) < 1e-14);

  // tau(alpha e0 + beta e1) = 1 + |beta|^2.
  VecC c(2);
  c << cplx(0.6), cplx(0.0, 0.8);
  CHECK(std::abs((c.adjoint() * tau.partial * c)(0).real() - 1.64) < 1e-14);
}

TEST_CASE("cyclic-3: tau_operator exactness flag needs a long zero run") {
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v = span_of_first(3, 2);
  FirstReturnData short_run = first_return_direct(u, v, 3);
  CHECK_FALSE(tau_operator(short_run.a).exact);
  FirstReturnData long_run = first_return_direct(u, v, 12);
  CHECK(tau_operator(long_run.a).exact);
}

TEST_CASE("cyclic-3: spectral decomposition and subspace measure") {
  UnitaryStep u = build_cyclic_shift(3);
  SpectralDecomposition d = spectral_decompose(u);
  REQUIRE(d.eigenvalues.size() == 3);
  MatC sum = MatC::Zero(3, 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(d.multiplicities[k] == 1);
    sum += d.projectors[k];
    // Each eigenvalue is a cube root of unity.
    CHECK(std::abs(std::pow(d.eigenvalues[k], 3) - cplx(1)) < 1e-12);
  }
  CHECK(max_abs(sum - MatC::Identity(3, 3)) < 1e-12);

  Subspace v = span_of_first(3, 2);
  SpectralMeasure m = subspace_spectral_measure(d, v);
  long total_rank = 0;
  for (size_t k = 0; k < m.masses.size(); ++k) {
    CHECK(m.ranks[k] == 1);
    total_rank += m.ranks[k];
    CHECK(std::abs(m.masses[k].trace().real() - 2.0 / 3.0) < 1e-12);
  }
  CHECK(total_rank == 3);
}

TEST_CASE("cyclic-3: exact boundary evaluation of the return generating function") {
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v = span_of_first(3, 2);
  BoundaryEvaluator ev(u, v);
  CHECK(ev.minimal_dim() == 3);
  for (cplx z : {cplx(0.3, 0.4), cplx(1, 0), std::polar(1.0, 2.1),
                 std::polar(1.0, -0.7), cplx(0, 0)}) {
    MatC expected(2, 2);
    expected << 0, z * z, z, 0;
    CHECK(max_abs(ev.a_hat(z) - expected) < 1e-12);
  }
  CHECK_THROWS_AS((void)ev.a_hat(cplx(1.5, 0)), InvalidInput);
}

TEST_CASE("cyclic-3: all four K computations give three") {
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v = span_of_first(3, 2);
  KInvariant k = k_invariant(u, v);
  CHECK(k.value == 3);
  CHECK(k.spectral == 3);
  CHECK(k.winding == 3);
  CHECK(k.dim_minus_nu == 3);
  CHECK(std::abs(k.frobenius - 3.0) < 1e-9);
}

TEST_CASE("cyclic-3: expected return times via loop winding") {
  UnitaryStep u = build_cyclic_shift(3);
  Subspace v = span_of_first(3, 2);
  BoundaryEvaluator ev(u, v);

  VecC e0 = VecC::Zero(2), e1 = VecC::Zero(2), mix(2);
  e0(0) = cplx(1);
  e1(1) = cplx(1);
  mix << cplx(0.6), cplx(0.0, 0.8);

  CHECK(std::abs(return_time_winding(ev, e0) - 1.0) < 1e-6);
  CHECK(std::abs(return_time_winding(ev, e1) - 2.0) < 1e-6);
  // Superpositions interpolate: tau = 1 |alpha|^2 + 2 |beta|^2, not an integer.
  CHECK(std::abs(return_time_winding(ev, mix) - 1.64) < 1e-6);

  VecC unnormalized(2);
  unnormalized << cplx(1), cplx(1);
  CHECK_THROWS_AS((void)return_time_winding(ev, unnormalized), InvalidInput);
}

// ---------------------------------------------------------------------------
// Geometric phase of explicit loops.
// ---------------------------------------------------------------------------

TEST_CASE("geometric phase of an explicit two-component loop") {
  auto loop = [](double theta) {
    VecC v(2);
    v(0) = 0.6 * std::polar(1.0, 3.0 * theta);
    v(1) = 0.8 * std::polar(1.0, -theta);
    return v;
  };
  BerryResult r = berry_phase_loop(loop);
  // Winding 3 * 0.36 + (-1) * 0.64 = 0.44.
  CHECK(std::abs(r.value - 0.44) < 1e-7);
  CHECK(r.norm_defect < 1e-12);

  auto vanishing = [](double theta) {
    VecC v(2);
    v(0) = cplx(0.5 * (1.0 + std::cos(theta)));
    v(1) = cplx(0);
    return v;
  };
  CHECK_THROWS_AS((void)berry_phase_loop(vanishing), NotApplicable);
}

// ---------------------------------------------------------------------------
// Random-model consistency.
// ---------------------------------------------------------------------------

TEST_CASE("random unitary: renewal round-trip and survival identity") {
  UnitaryStep u = random_unitary_step(16, rng);
  MatC frame_src = random_unitary_matrix(16, rng);
  Subspace v;
  v.frame = frame_src.leftCols(3);
  validate_frame(v);

  MatSeries mu = mu_sequence(u, v, 24);
  FirstReturnData fr = first_return_direct(u, v, 24);
  MatSeries a_from_mu = amplitudes_from_mu(mu);
  MatSeries mu_from_a = mu_from_amplitudes(fr.a);
  for (size_t n = 0; n <= 24; ++n) {
    CHECK(max_abs(a_from_mu[n] - fr.a[n]) < 1e-11);
    CHECK(max_abs(mu_from_a[n] - mu[n]) < 1e-11);
  }
  for (long n = 1; n <= 24; ++n)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(fr.a[static_cast<size_t>(n)].col(j).squaredNorm() -
                     (fr.survival(n - 1, j) - fr.survival(n, j))) < 1e-12);

  // Scalar renewal round-trip on <psi | U^n psi>.
  VecC psi = v.frame.col(0);
  Coeffs scalar_mu(25);
  VecC w = psi;
  scalar_mu[0] = cplx(1);
  for (size_t n = 1; n <= 24; ++n) {
    w = u.apply(w);
    scalar_mu[n] = psi.dot(w);
  }
  Coeffs back = scalar_mu_from_amplitudes(scalar_amplitudes_from_mu(scalar_mu));
  for (size_t n = 0; n <= 24; ++n)
    CHECK(std::abs(back[n] - scalar_mu[n]) < 1e-11);
}

TEST_CASE("random unitary: a generic subspace explores the whole space") {
  UnitaryStep u = random_unitary_step(24, rng);
  Subspace v;
  v.frame = random_unitary_matrix(24, rng).leftCols(3);
  KInvariant k = k_invariant(u, v);
  CHECK(k.value == 24);
}

TEST_CASE("decoupled eigenvector reduces K below the space dimension") {
  MatC block = random_unitary_matrix(4, rng);
  MatC m = MatC::Identity(5, 5);
  m.topLeftCorner(4, 4) = block;
  auto space = std::make_shared<StateSpace>();
  space->labels.resize(5);
  UnitaryStep u = UnitaryStep::from_dense(space, m);

  Subspace v;
  v.frame = MatC::Zero(5, 2);
  v.frame.topLeftCorner(4, 2) = random_unitary_matrix(4, rng).leftCols(2);
  validate_frame(v);

  KInvariant k = k_invariant(u, v);
  CHECK(k.value == 4);

  BoundaryEvaluator ev(u, v);
  CHECK(ev.minimal_dim() == 4);
}

TEST_CASE("non-decaying survival makes the Frobenius route inapplicable") {
  ShiftFlipModel model = build_shift_plus_flip(600);
  CHECK_THROWS_AS((void)k_frobenius(model.step, model.subspace, 500),
                  NotApplicable);
}

// ---------------------------------------------------------------------------
// Horizon guards on truncated models.
// ---------------------------------------------------------------------------

TEST_CASE("truncated models refuse queries beyond the exactness horizon") {
  ShiftFlipModel model = build_shift_plus_flip(8);
  CHECK_NOTHROW((void)mu_sequence(model.step, model.subspace, 8));
  CHECK_THROWS_AS((void)mu_sequence(model.step, model.subspace, 9),
                  HorizonExceeded);
  CHECK_THROWS_AS((void)first_return_direct(model.step, model.subspace, 9),
                  HorizonExceeded);
  CHECK_THROWS_AS((void)monitored_state(model.step, model.psi, 9),
                  HorizonExceeded);
}
