#pragma once
// Scalar Schur functions on the unit disk, represented by their Schur
// parameters, plus the classical transform toolbox around them:
//   - evaluation (backward continued fraction) and Taylor sections,
//   - the Schur algorithm (parameter extraction from Taylor data),
//   - iterates f_k and inverse iterates f^k,
//   - Caratheodory transforms (pointwise and as series, scalar and 2x2),
//   - Szego polynomials of the first and second kind,
//   - Khrushchev-formula boundary objects F_k, G_k, G~_k,
//   - L2 norms, winding numbers and the Abel-regularized phase sum tau_r.

#include <functional>
#include <optional>

#include "qrec/series.hpp"
#include "qrec/types.hpp"

namespace qrec {

// ---------------------------------------------------------------------------
// Parameter sequences. Three shapes cover every model in this project:
//   * terminated: (prefix..., zeta) with |zeta| = 1  -> rational inner,
//   * eventually periodic: prefix then cycle repeated forever,
//   * zero tail: prefix then 0, 0, ... (empty cycle, no terminator).
// ---------------------------------------------------------------------------
struct SchurParams {
  std::vector<cplx> prefix;          // |gamma_k| < 1
  std::vector<cplx> cycle;           // repeating tail after the prefix
  std::optional<cplx> terminator;    // unimodular; excludes a cycle

  bool rational_inner() const { return terminator.has_value(); }
  // Number of parameters strictly before the terminator (terminated case).
  long free_count() const { return static_cast<long>(prefix.size()); }
  // k-th parameter; the terminator is the last admissible index.
  cplx param(long k) const;
  // Largest admissible index + 1 (negative means "infinite").
  long length() const;

  static SchurParams terminated(std::vector<cplx> prefix, cplx zeta);
  static SchurParams eventually_periodic(std::vector<cplx> prefix,
                                         std::vector<cplx> cycle);
  void validate() const;
};

struct EvalOptions {
  double tol = 1e-12;   // adaptive-depth stopping threshold
  long max_depth = 1L << 14;
};

// Value of the Schur function at |z| < 1 (any |z| <= 1 for terminated
// parameter sequences, whose continued fraction closes exactly).
cplx eval_schur(const SchurParams& p, cplx z, const EvalOptions& opt = {});

// Taylor section of order n_max. Exact: parameter k first enters at order k,
// so the recursion is seeded at depth n_max + 1 (or at the terminator).
Coeffs taylor_coeffs(const SchurParams& p, int n_max);

// Forward Schur algorithm on a Taylor section. Stops early when a parameter
// reaches the unit circle within 1e-10 (rational-inner certificate) or when
// the section is exhausted (each level consumes one order of accuracy).
struct SchurAlgorithmResult {
  SchurParams params;        // terminated iff the algorithm hit the circle
  bool hit_unit_circle = false;
  int extracted = 0;         // number of parameters in `params.prefix`
};
SchurAlgorithmResult schur_params_from_taylor(const Coeffs& taylor,
                                              int k_max = -1);

// Iterate f_k: parameters (gamma_k, gamma_{k+1}, ...).
SchurParams iterate(const SchurParams& p, long k);
// Inverse iterate f^k: parameters (-conj(gamma_k), ..., -conj(gamma_0), 1).
// Defined here for one-sided sequences; k must be an admissible non-terminator
// index. f^{-1} is the constant 1 by convention.
SchurParams inverse_iterate(const SchurParams& p, long k);

// Caratheodory transforms: F = (1 + z f) / (1 - z f) and its inverse
// f = (F - 1) / (z (F + 1)); F(0) = 1.
cplx caratheodory_from_schur(cplx f, cplx z);
cplx schur_from_caratheodory(cplx F, cplx z);
Coeffs caratheodory_series_from_schur(const Coeffs& f);
Coeffs schur_series_from_caratheodory(const Coeffs& F);
// Matrix versions, F = (I - z f)^{-1} (I + z f) and back (any square size).
MatSeries caratheodory_series_from_schur(const MatSeries& f);
MatSeries schur_series_from_caratheodory(const MatSeries& F);

// ---------------------------------------------------------------------------
// Szego polynomials. phi/phi* are the monic-free orthonormal first-kind
// polynomials of the parameter sequence, omega/omega* the second kind
// (parameters negated), generated by
//   rho_k phi_{k+1} = z phi_k - conj(gamma_k) phi*_k,
//   rho_k phi*_{k+1} = -gamma_k z phi_k + phi*_k,  phi_0 = phi*_0 = 1.
// Index k in the arrays below means the polynomial of degree k.
// ---------------------------------------------------------------------------
struct SzegoSystem {
  std::vector<Coeffs> phi, phi_star, omega, omega_star;
};
SzegoSystem szego_polynomials(const SchurParams& p, int k_max);

// Khrushchev-formula objects evaluated at a point (|z| < 1, z != 0):
//   F_k = (1 + z f^{k-1} f_k) / (1 - z f^{k-1} f_k)
//   G_k      = 2 rho_k z f^{k-1} / ((1 - gamma_k z f^{k-1})(1 - z f^k f_{k+1}))
//   G~_k     = 2 rho_k z f_{k+1} / ((1 - gamma_k z f^{k-1})(1 - z f^k f_{k+1}))
// computed from iterates / inverse iterates of the parameter sequence.
struct KhrushchevValues {
  cplx F_k, G_k, G_tilde_k;
};
KhrushchevValues khrushchev_Fk(const SchurParams& p, long k, cplx z,
                               const EvalOptions& opt = {});

// ---------------------------------------------------------------------------
// Norms, windings, regularized phases.
// ---------------------------------------------------------------------------
struct NormSq {
  double partial = 0;   // Kahan sum of |c_n|^2 up to the computed order
  Interval interval;    // [partial, partial + fitted tail]
  PowerLawTail tail;
};
NormSq l2_norm_sq(const Coeffs& c);
// Convenience: exact 1 for terminated sequences, else coefficient sum of the
// Taylor section of order `order`.
NormSq l2_norm_sq(const SchurParams& p, int order);

struct WindingResult {
  long winding = 0;      // nearest integer to the total phase / 2 pi
  double residue = 0;    // |total phase / 2 pi - winding|
  int grid = 0;          // final number of boundary samples
};
// Winding of a continuous nonvanishing boundary function theta -> w(theta).
// The grid doubles until every increment is < pi/2 (smallness certificate).
WindingResult winding_number(const std::function<cplx(double)>& boundary,
                             int initial_grid = 256, int max_grid = 1 << 20);

// Abel-regularized phase sum tau_r = sum_n n |c_n|^2 r^(2n).
double tau_r(const Coeffs& c, double r);

}  // namespace qrec
