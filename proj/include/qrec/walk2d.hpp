#pragma once
// Origin-site recurrence for coined walks on the square and honeycomb
// lattices.  The n-step compressions mu_n of the origin site are streamed
// from a truncated evolution that never materializes the step operator:
// each frame vector is evolved over a growing active window that always
// stays ahead of anything able to reach the origin within the horizon, so
// the recorded compressions are exact.  The return-probability spectrum and
// the nested-subspace comparison curves are then obtained through the
// renewal machinery.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qrec/linops.hpp"
#include "qrec/monitor.hpp"

namespace qrec {

struct Walk2DJob {
  CoinSpec2D spec;
  long n_max = 1024;
  TailPolicy tail = TailPolicy::power_law;
  double memory_budget_gb = 4.0;  // cap for the evolution buffers
  bool parallel = true;           // row-parallel kernel; false = serial reference
  void validate() const;          // n_max >= 1 and a valid coin
};

// Working-set estimate of one streamed frame-vector evolution, in bytes.
double evolution_bytes(const Walk2DJob& job);

// Exact compressions mu[n] = P U^n P of the origin site, n = 0..n_max
// (mu[0] = I).  The serial and row-parallel paths are bit-identical.
MatSeries origin_mu_sequence(const Walk2DJob& job);

// Return probability operator of the origin site: renewal amplitudes from
// mu, R = sum a_n^dag a_n under the job's tail policy, eigenvalues sorted
// descending with tail enclosures, and pairs closer than pair_tol flagged.
struct RSpectrum {
  ReturnProbability r;
  std::vector<EigenvalueEstimate> eigenvalues;
  std::vector<std::pair<int, int>> degenerate_pairs;
};
RSpectrum r_eigenvalues(const Walk2DJob& job, double pair_tol = 1e-3);

// Return probabilities along a qubit path for a nested family of absorbing
// subspaces of the origin site: the moving state itself, one curve per
// supplied frame, and the full site.  Frames are d x k matrices with
// orthonormal columns, nested, and must contain the path.
struct SubspaceCurves2D {
  std::vector<double> t;
  std::vector<std::string> labels;               // "state", "dim-k", "site"
  std::vector<std::vector<double>> probability;  // [label][point]
};
SubspaceCurves2D subspace_curves_2d(
    const Walk2DJob& job, const std::vector<MatC>& nested_frames,
    const std::function<VecC(double)>& qubit_path, int num_points);

}  // namespace qrec
