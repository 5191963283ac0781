#pragma once
// Monitored evolution of a finite-dimensional subspace V under a unitary
// step U: n-step compressions mu_n = P U^n P, first-return amplitudes
// a_n = P U ((I-P)U)^{n-1} P, the renewal relation linking them, return
// probability and expected return time (state and operator level), spectral
// measures of the monitored subspace, the integer invariant K counting the
// dimensions explored by the monitored dynamics, and loop-winding (geometric
// phase) evaluation of expected return times.

#include <functional>

#include "qrec/linops.hpp"
#include "qrec/schur.hpp"
#include "qrec/series.hpp"

namespace qrec {

// ---------------------------------------------------------------------------
// Compressions and first-return amplitudes (all matrices in the frame of V).
// ---------------------------------------------------------------------------

// mu[n] = frame^dag U^n frame, n = 0..n_max (mu[0] = I).
MatSeries mu_sequence(const UnitaryStep& u, const Subspace& v, long n_max);

// a[n] = P U ((I-P)U)^{n-1} P for n >= 1, a[0] = 0, plus the survival
// weights survival(n, j) = || ((I-P)U)^n frame_j ||^2 for n = 0..n_max.
struct FirstReturnData {
  MatSeries a;
  Eigen::MatrixXd survival;
};
FirstReturnData first_return_direct(const UnitaryStep& u, const Subspace& v,
                                    long n_max);

// Renewal relation mu_n = a_n + sum_{k=1}^{n-1} mu_k a_{n-k}.
MatSeries amplitudes_from_mu(const MatSeries& mu);
MatSeries mu_from_amplitudes(const MatSeries& a);
Coeffs scalar_amplitudes_from_mu(const Coeffs& mu);
Coeffs scalar_mu_from_amplitudes(const Coeffs& a);

// Bridges to the analytic-function side. The Schur function of the monitored
// pair has Taylor coefficients f_m = a_{m+1}^dag; the Caratheodory function
// has F_0 = I, F_m = 2 mu_m^dag.
MatSeries schur_from_amplitudes(const MatSeries& a);
MatSeries caratheodory_from_mu(const MatSeries& mu);

// ---------------------------------------------------------------------------
// Return probability operator R = sum_{n>=1} a_n^dag a_n.
// ---------------------------------------------------------------------------

enum class TailPolicy { none, power_law };

struct ReturnProbability {
  MatC partial;            // sum of the first n_max increments (PSD, <= I)
  double trace_remainder;  // estimated trace of the dropped tail
  PowerLawTail fit;        // power-law fit of tr(a_n^dag a_n)
};
ReturnProbability return_probability(const MatSeries& a,
                                     TailPolicy policy = TailPolicy::none);

// Prob(psi -> phi) = sum_n |<phi| a_n psi>|^2: probability that the first
// return to V lands on phi when starting from psi (coefficients in the frame).
double transition_probability(const MatSeries& a, const VecC& psi,
                              const VecC& phi);

// Eigenvalues of the partial sum, sorted descending, each with the enclosure
// [lambda_k, min(lambda_k + trace_remainder, 1)] valid because the dropped
// increments are positive semidefinite.
struct EigenvalueEstimate {
  double value = 0.0;
  Interval enclosure;
};
std::vector<EigenvalueEstimate> return_probability_eigenvalues(
    const ReturnProbability& r);

// ---------------------------------------------------------------------------
// Expected return time.
// ---------------------------------------------------------------------------

// tau_op = sum_{n>=1} n a_n^dag a_n; Tr(tau_op)/dim V is the average expected
// return time over the unit sphere of V.
struct ReturnTimeOperator {
  MatC partial;
  double trace_remainder = 0.0;
  bool exact = false;  // amplitudes vanished identically well before n_max
};
ReturnTimeOperator tau_operator(const MatSeries& a);

// Recurrence data of a single state from its scalar compressions
// mu'_n = <psi| U^n psi>. Non-recurrent states get tau = +inf by convention;
// recurrent states with a heavy first-moment tail are flagged divergent.
struct StateRecurrence {
  Coeffs amplitudes;                  // scalar first-return amplitudes
  double return_probability = 0.0;    // partial sum of |a_n|^2
  Interval return_probability_interval;
  bool recurrent = false;
  double tau_partial = 0.0;           // sum n |a_n|^2 up to n_max
  double tau = 0.0;                   // +inf when non-recurrent/divergent
  bool tau_finite = false;
  Interval tau_interval;
  PowerLawTail fit;                   // fit of |a_n|^2
};
StateRecurrence state_recurrence(const Coeffs& scalar_mu,
                                 double recurrence_tol = 1e-6);
StateRecurrence monitored_state(const UnitaryStep& u, const VecC& psi,
                                long n_max, double recurrence_tol = 1e-6);

// ---------------------------------------------------------------------------
// Spectral decomposition (genuinely finite models only).
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
  std::vector<cplx> eigenvalues;  // distinct, unit modulus
  std::vector<int> multiplicities;
  std::vector<MatC> projectors;   // orthogonal, sum = I
};
SpectralDecomposition spectral_decompose(const UnitaryStep& u,
                                         double cluster_tol = 1e-9);

// Mass operators mu({lambda_k}) = frame^dag E_k frame with their ranks.
struct SpectralMeasure {
  std::vector<cplx> eigenvalues;
  std::vector<MatC> masses;
  std::vector<int> ranks;
};
SpectralMeasure subspace_spectral_measure(const SpectralDecomposition& d,
                                          const Subspace& v,
                                          double rank_tol = 1e-9);

// ---------------------------------------------------------------------------
// Exact evaluation of a_hat(z) = z frame^dag U (I - z (I-P)U)^{-1} frame.
// ---------------------------------------------------------------------------
// Restricting to the smallest U-invariant subspace containing V makes
// I - z (I-P)U invertible for all |z| <= 1, so boundary values are exact.
class BoundaryEvaluator {
 public:
  BoundaryEvaluator(const UnitaryStep& u, const Subspace& v);
  long minimal_dim() const { return u_min_.rows(); }
  MatC a_hat(cplx z) const;

 private:
  MatC u_min_;       // U restricted to the minimal invariant subspace
  MatC ut_min_;      // (I-P)U restricted
  MatC frame_min_;   // frame expressed in the restricted basis
};

// ---------------------------------------------------------------------------
// The integer invariant K = sum_k rank mu({lambda_k}).
// ---------------------------------------------------------------------------

long k_spectral(const SpectralMeasure& m);
long k_winding(const BoundaryEvaluator& ev);
double k_frobenius(const UnitaryStep& u, const Subspace& v,
                   long max_steps = 200000, double tol = 1e-12);
long k_dim_minus_nu(const UnitaryStep& u, const SpectralDecomposition& d,
                    const Subspace& v, double rank_tol = 1e-9);

struct KInvariant {
  long spectral = -1;
  long winding = -1;
  double frobenius = -1.0;
  long dim_minus_nu = -1;
  long value = -1;  // consensus; throws CheckFailed if routes disagree
};
KInvariant k_invariant(const UnitaryStep& u, const Subspace& v);

// ---------------------------------------------------------------------------
// Loop winding (geometric phase). For a recurrent state the expected return
// time equals the winding number of theta -> a_hat(e^{i theta}) psi.
// ---------------------------------------------------------------------------

struct BerryResult {
  double value = 0.0;       // Richardson-extrapolated accumulated phase / 2 pi
  long grid = 0;            // final grid size
  double norm_defect = 0.0; // max | ||v(theta_j)|| - 1 |
};
BerryResult berry_phase_loop(const std::function<VecC(double)>& loop,
                             double tol = 1e-8, long initial_grid = 64,
                             long max_grid = 1L << 22);

// Winding route to tau(psi); certifies the loop stays on the unit sphere
// (norm defect below norm_tol), i.e. that psi is recurrent.
double return_time_winding(const BoundaryEvaluator& ev, const VecC& psi_coeffs,
                           double tol = 1e-8, double norm_tol = 1e-8);

}  // namespace qrec
