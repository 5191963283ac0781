#pragma once
// Finite and truncated unitary step operators, their state spaces, and the
// model builders: cyclic shift, shift-plus-flip, coined 1D walks
// (half-line / finite lattice / line) and coined 2D walks (square /
// hexagonal). Truncated models carry an exactness horizon: compressions
// P U^n P taken inside the region of interest are exact for n up to that
// horizon because no path can reach the artificial boundary and come back.
// Artificial boundaries are closed with a deterministic bounce permutation so
// every built step is exactly unitary.

#include <map>
#include <memory>
#include <random>
#include <string>

#include <Eigen/SparseCore>

#include "qrec/types.hpp"

namespace qrec {

struct BasisLabel {
  int site0 = 0;       // x (1D) or first lattice coordinate
  int site1 = 0;       // second lattice coordinate / sublattice tag
  int internal = 0;    // coin component
  std::string text;    // human-readable label for reports
};

struct StateSpace {
  std::vector<BasisLabel> labels;
  std::vector<std::vector<int>> locality_graph;  // step-adjacency, bounded degree
  long dim() const { return static_cast<long>(labels.size()); }
};

inline constexpr long kDenseStorageLimit = 4096;
inline constexpr long kUnlimitedHorizon = std::numeric_limits<long>::max();

class UnitaryStep {
 public:
  using Triplet = Eigen::Triplet<cplx>;

  static UnitaryStep from_dense(std::shared_ptr<const StateSpace> space,
                                MatC u, bool genuinely_finite = true,
                                long exact_horizon = kUnlimitedHorizon,
                                std::string tag = "custom");
  static UnitaryStep from_triplets(std::shared_ptr<const StateSpace> space,
                                   const std::vector<Triplet>& entries,
                                   bool genuinely_finite, long exact_horizon,
                                   std::string tag);

  const StateSpace& space() const { return *space_; }
  std::shared_ptr<const StateSpace> space_ptr() const { return space_; }
  long dim() const { return dim_; }
  bool genuinely_finite() const { return finite_; }
  long exact_horizon() const { return horizon_; }
  int locality_radius() const { return locality_radius_; }
  int truncation_margin() const { return truncation_margin_; }
  int region_of_interest() const { return roi_; }
  const std::string& tag() const { return tag_; }
  bool dense_storage() const { return dense_storage_; }

  VecC apply(const VecC& v) const;
  VecC apply_adjoint(const VecC& v) const;
  // Dense copy for spectral work; guarded against accidental huge requests.
  MatC dense() const;

  void set_roi(int roi) { roi_ = roi; }
  void set_truncation_margin(int m) { truncation_margin_ = m; }

 private:
  std::shared_ptr<const StateSpace> space_;
  long dim_ = 0;
  bool dense_storage_ = true;
  MatC dense_;
  Eigen::SparseMatrix<cplx> sparse_;
  bool finite_ = true;
  long horizon_ = kUnlimitedHorizon;
  int locality_radius_ = 1;
  int truncation_margin_ = 0;
  int roi_ = 0;
  std::string tag_ = "custom";
};

struct Subspace {
  MatC frame;                  // dim x m, orthonormal columns
  std::vector<long> support;   // basis indices the frame lives on (may be empty)
  long dim_v() const { return frame.cols(); }
  VecC lift(const VecC& coeffs) const { return frame * coeffs; }
  VecC coeffs(const VecC& psi) const { return frame.adjoint() * psi; }
  VecC project(const VecC& psi) const { return frame * (frame.adjoint() * psi); }
};

// Orthonormality certificate; throws CheckFailed beyond tol.
void validate_frame(const Subspace& v, double tol = 1e-12);

// ---------------------------------------------------------------------------
// 1D coin specifications.
// ---------------------------------------------------------------------------
enum class Lattice1D { half_line, finite, line };

struct CoinSpec1D {
  Lattice1D kind = Lattice1D::half_line;
  int num_sites = 0;             // finite lattices only
  std::map<int, cplx> window;    // explicit per-site coin parameters
  cplx default_gamma = cplx(0);  // sites outside the window
  // Coin parameter gamma_{2x} of site x; validates the site range and
  // |gamma| < 1.
  cplx gamma(int x) const;
};

enum class Lattice2D { square, hexagonal };

struct CoinSpec2D {
  Lattice2D kind = Lattice2D::square;
  MatC coin;  // 4x4 (square) or 3x3 (hexagonal), unitary
  int internal_dim() const { return kind == Lattice2D::square ? 4 : 3; }
  void validate() const;
};

// ---------------------------------------------------------------------------
// Builders.
// ---------------------------------------------------------------------------

// Cyclic shift |j> -> |j+1 mod N>; genuinely finite.
UnitaryStep build_cyclic_shift(int N);

// Direct sum of a two-level flip with a truncated bilateral shift, plus the
// canonical monitored pair psi = |up>, phi = (|down> + |0>)/sqrt(2).
struct ShiftFlipModel {
  UnitaryStep step;
  VecC psi, phi;
  Subspace subspace;  // span{psi, phi}
};
ShiftFlipModel build_shift_plus_flip(long horizon);

// Coined walk, basis e_{2x} = |x,up>, e_{2x+1} = |x,down>; the
// spin-preserving shift (up -> x+1, down -> x-1) reflects at physical edges
// (half-line left edge, finite lattice both edges). Truncated kinds allocate
// horizon + 2 sites beyond the region of interest `roi`.
UnitaryStep build_coined_1d(const CoinSpec1D& spec, long horizon, int roi = 0);
Subspace site_subspace_1d(const UnitaryStep& u, int x);

// Coined 2D walk as an explicit operator (reference path for moderate
// horizons; the production evolution streams the step instead, see walk2d).
UnitaryStep build_coined_2d(const CoinSpec2D& spec, long horizon);
Subspace origin_subspace_2d(const UnitaryStep& u);

// U^n psi with a horizon guard.
VecC apply_power(const UnitaryStep& u, const VecC& psi, long n);

// Standard coins.
MatC grover_coin(int d);
MatC fourier_coin(int d);
MatC c0_coin();

// Haar-distributed unitary as a genuinely finite step (for tests/verify).
UnitaryStep random_unitary_step(int dim, std::mt19937_64& rng);
MatC random_unitary_matrix(int dim, std::mt19937_64& rng);

}  // namespace qrec
