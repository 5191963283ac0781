#pragma once
// Site recurrence of one-dimensional coined walks, reduced to scalar Schur
// functions. The monitored dynamics of a site subspace V_x factorizes into
// two scalar Schur functions: a "left" one built from the coins strictly to
// the left of x and a "right" one from the coins strictly to the right. A
// reflecting edge truncates the corresponding parameter sequence with a
// unimodular terminator, which makes that side rational inner; coins that are
// eventually constant produce an eventually periodic parameter sequence, so
// both sides admit exact finite descriptions for every CoinSpec1D.

#include <vector>

#include "qrec/linops.hpp"
#include "qrec/schur.hpp"
#include "qrec/series.hpp"

namespace qrec {

// ---------------------------------------------------------------------------
// Scalar Schur data of one site.
// ---------------------------------------------------------------------------

struct SiteSchur {
  SchurParams left;    // parameters (0, -conj(g_{x-1}), 0, -conj(g_{x-2}), ...)
  SchurParams right;   // parameters (0, g_{x+1}, 0, g_{x+2}, ...)
  cplx gamma;          // coin parameter g_x of the site itself
  double rho = 0.0;    // sqrt(1 - |g_x|^2)
  long left_degree = -1;   // Blaschke degree when rational inner, else -1
  long right_degree = -1;
};

SiteSchur site_schur(const CoinSpec1D& spec, int x);

// ---------------------------------------------------------------------------
// The spin structure attached to the coin of the site. The qubit `left`
// couples only to the left Schur function under first return, `right` only
// to the right one; proj_left/proj_right are the rank-one projectors onto
// them (they sum to the identity).
// ---------------------------------------------------------------------------

struct SiteQubits {
  Vec2 left;        // (gamma, rho)
  Vec2 right;       // (rho, -conj(gamma))
  Mat2 proj_left;
  Mat2 proj_right;
};

SiteQubits site_qubits(cplx gamma);

// ---------------------------------------------------------------------------
// Pointwise values and Taylor coefficients of the 2x2 site Schur function
//   f_x(z) = [ g f_left(z)    rho f_right(z)       ]
//            [ rho f_left(z)  -conj(g) f_right(z)  ].
// site_a_hat gives the first-return generating function
//   a_hat_x(z) = z f_x(conj(z))^dag, |z| <= 1;
// its boundary values are exact when the sides involved are rational inner.
// ---------------------------------------------------------------------------

Mat2 site_schur_matrix(const SiteSchur& s, cplx z);
MatSeries site_schur_taylor(const SiteSchur& s, int n_max);
Mat2 site_a_hat(const SiteSchur& s, cplx z);

// ---------------------------------------------------------------------------
// Site return probability matrix
//   R_x = |f_left|^2 proj_left + |f_right|^2 proj_right,
// where |.|^2 is the squared L2 norm on the unit circle (exactly 1 for a
// rational inner side). The two norms are also the extreme return
// probabilities over the qubits of the site.
// ---------------------------------------------------------------------------

struct SiteReturn {
  Mat2 matrix;           // point estimate from the norm partial sums
  NormSq left_norm_sq;   // ||f_left||^2 with enclosure
  NormSq right_norm_sq;
  double average = 0.0;  // (||f_left||^2 + ||f_right||^2) / 2
};

SiteReturn site_return_matrix(const SiteSchur& s, int order);

// ---------------------------------------------------------------------------
// Expected return time. When a side is rational inner its qubit has the
// integer expected return time 1 + degree; otherwise the qubit either fails
// to be recurrent or has infinite expected return time, and only radial
// regularizations tau_r are finite. When both sides are rational inner
// (finite lattice) the full quadratic form is
//   tau_x = I + deg_left proj_left + deg_right proj_right,
// with spectrum {1 + deg_left, 1 + deg_right} and average trace/2.
// ---------------------------------------------------------------------------

struct SiteTau {
  double left_tau;    // 1 + left degree, or +inf
  double right_tau;   // 1 + right degree, or +inf
  bool matrix_finite = false;
  Mat2 matrix;        // valid only when matrix_finite
  double average;     // trace/2, or +inf
};

SiteTau site_tau_matrix(const SiteSchur& s);

// Radial regularization tau_r(f) = sum_n n |c_n|^2 r^{2n} of both sides,
// computed from Taylor sections of the given order.
struct SiteTauRadial {
  double left = 0.0;
  double right = 0.0;
};

SiteTauRadial site_tau_radial(const SiteSchur& s, double r, int order);

// ---------------------------------------------------------------------------
// Closed forms for a constant coin on the line (no reflecting edges). The
// site Schur functions lose their site dependence; odd-step first-return
// amplitudes vanish and the even-step amplitude matrices are d_n * upsilon
// with a scalar weight d_n ~ n^{-3/2}.
// ---------------------------------------------------------------------------

struct ConstantCoinSite {
  Coeffs right_taylor;               // Taylor coefficients of f_right
  Coeffs left_taylor;                // Taylor coefficients of f_left
  std::vector<double> pair_weight;   // d_n, indexed from 1 (entry 0 unused)
  Mat2 upsilon;                      // common matrix factor of a_{2n}
  double norm_sq = 0.0;              // closed-form ||f_left||^2 = ||f_right||^2
};

ConstantCoinSite constant_coin_site(cplx gamma, int n_max);

// ---------------------------------------------------------------------------
// State-versus-site return probability along the qubit family
//   psi(t) = cos(t) |up> + down_phase * sin(t) |down>, t in [0, pi].
// The site curve is the quadratic form of R_x; the state curve contracts the
// matrix Caratheodory function of the site to the qubit, converts back to a
// scalar Schur function and takes its squared L2 norm.
// ---------------------------------------------------------------------------

struct StateSiteCurve {
  std::vector<double> t;
  std::vector<double> state_probability;
  std::vector<double> site_probability;
};

StateSiteCurve state_site_curve(const SiteSchur& s, int num_points,
                                cplx down_phase, int order);

}  // namespace qrec
