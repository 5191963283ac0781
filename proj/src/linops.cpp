#include "qrec/linops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <tuple>

namespace qrec {

namespace {

std::shared_ptr<StateSpace> make_space(std::vector<BasisLabel> labels) {
  auto sp = std::make_shared<StateSpace>();
  sp->labels = std::move(labels);
  return sp;
}

void attach_graph(StateSpace& space,
                  const std::vector<UnitaryStep::Triplet>& entries) {
  std::vector<std::set<int>> adj(space.labels.size());
  for (const auto& t : entries) {
    if (t.row() == t.col()) continue;
    adj[static_cast<size_t>(t.row())].insert(static_cast<int>(t.col()));
    adj[static_cast<size_t>(t.col())].insert(static_cast<int>(t.row()));
  }
  space.locality_graph.assign(adj.size(), {});
  for (size_t i = 0; i < adj.size(); ++i)
    space.locality_graph[i].assign(adj[i].begin(), adj[i].end());
}

}  // namespace

// ---------------------------------------------------------------------------
// UnitaryStep
// ---------------------------------------------------------------------------

UnitaryStep UnitaryStep::from_dense(std::shared_ptr<const StateSpace> space,
                                    MatC u, bool genuinely_finite,
                                    long exact_horizon, std::string tag) {
  if (!space || space->dim() != u.rows() || u.rows() != u.cols())
    throw InvalidInput("state space and matrix dimensions disagree");
  double defect = (u.adjoint() * u - MatC::Identity(u.rows(), u.cols()))
                      .cwiseAbs()
                      .maxCoeff();
  if (defect > 1e-12)
    throw CheckFailed("matrix is not unitary (defect " +
                      std::to_string(defect) + ")");
  UnitaryStep s;
  s.space_ = std::move(space);
  s.dim_ = u.rows();
  s.dense_storage_ = true;
  s.dense_ = std::move(u);
  s.finite_ = genuinely_finite;
  s.horizon_ = exact_horizon;
  s.tag_ = std::move(tag);
  return s;
}

UnitaryStep UnitaryStep::from_triplets(
    std::shared_ptr<const StateSpace> space,
    const std::vector<Triplet>& entries, bool genuinely_finite,
    long exact_horizon, std::string tag) {
  if (!space || space->dim() <= 0) throw InvalidInput("empty state space");
  UnitaryStep s;
  s.space_ = std::move(space);
  s.dim_ = s.space_->dim();
  s.finite_ = genuinely_finite;
  s.horizon_ = exact_horizon;
  s.tag_ = std::move(tag);
  if (s.dim_ < kDenseStorageLimit) {
    s.dense_storage_ = true;
    s.dense_ = MatC::Zero(s.dim_, s.dim_);
    for (const auto& t : entries) s.dense_(t.row(), t.col()) += t.value();
  } else {
    s.dense_storage_ = false;
    s.sparse_.resize(s.dim_, s.dim_);
    s.sparse_.setFromTriplets(entries.begin(), entries.end());
    s.sparse_.makeCompressed();
  }
  return s;
}

VecC UnitaryStep::apply(const VecC& v) const {
  if (v.size() != dim_) throw InvalidInput("state dimension mismatch");
  return dense_storage_ ? VecC(dense_ * v) : VecC(sparse_ * v);
}

VecC UnitaryStep::apply_adjoint(const VecC& v) const {
  if (v.size() != dim_) throw InvalidInput("state dimension mismatch");
  return dense_storage_ ? VecC(dense_.adjoint() * v)
                        : VecC(sparse_.adjoint() * v);
}

MatC UnitaryStep::dense() const {
  if (dense_storage_) return dense_;
  if (dim_ > 16384)
    throw ResourceBudget("dense copy of a large sparse step was refused");
  return MatC(sparse_);
}

void validate_frame(const Subspace& v, double tol) {
  MatC g = v.frame.adjoint() * v.frame;
  double defect =
      (g - MatC::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (defect > tol)
    throw CheckFailed("subspace frame is not orthonormal (defect " +
                      std::to_string(defect) + ")");
}

// ---------------------------------------------------------------------------
// Coin specifications
// ---------------------------------------------------------------------------

cplx CoinSpec1D::gamma(int x) const {
  if (kind == Lattice1D::half_line && x < 0)
    throw InvalidInput("half-line site index must be >= 0");
  if (kind == Lattice1D::finite && (x < 0 || x >= num_sites))
    throw InvalidInput("finite-lattice site index out of range");
  auto it = window.find(x);
  cplx g = (it != window.end()) ? it->second : default_gamma;
  if (std::abs(g) >= 1.0)
    throw InvalidInput("coin parameter must lie strictly inside the unit disk");
  return g;
}

void CoinSpec2D::validate() const {
  int d = internal_dim();
  if (coin.rows() != d || coin.cols() != d)
    throw InvalidInput("coin dimension does not match the lattice");
  double defect =
      (coin.adjoint() * coin - MatC::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw InvalidInput("coin matrix is not unitary");
}

// ---------------------------------------------------------------------------
// Cyclic shift
// ---------------------------------------------------------------------------

UnitaryStep build_cyclic_shift(int N) {
  if (N < 1) throw InvalidInput("cyclic shift needs at least one site");
  std::vector<BasisLabel> labels(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j)
    labels[static_cast<size_t>(j)] = {j, 0, 0, "x=" + std::to_string(j)};
  auto space = make_space(std::move(labels));
  std::vector<UnitaryStep::Triplet> entries;
  entries.reserve(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j)
    entries.emplace_back((j + 1) % N, j, cplx(1));
  attach_graph(*space, entries);
  return UnitaryStep::from_triplets(space, entries, true, kUnlimitedHorizon,
                                    "cyclic");
}

// ---------------------------------------------------------------------------
// Shift plus flip
// ---------------------------------------------------------------------------

ShiftFlipModel build_shift_plus_flip(long horizon) {
  if (horizon < 2) throw InvalidInput("horizon must be >= 2");
  const long w = horizon + 2;
  const long sites = 2 * w + 1;
  std::vector<BasisLabel> labels;
  labels.reserve(static_cast<size_t>(2 + sites));
  labels.push_back({0, 0, 0, "spin_up"});
  labels.push_back({0, 0, 1, "spin_down"});
  for (long x = -w; x <= w; ++x)
    labels.push_back({static_cast<int>(x), 0, 0,
                      "x=" + std::to_string(x)});
  auto space = make_space(std::move(labels));
  auto site_index = [w](long x) { return 2 + (x + w); };

  std::vector<UnitaryStep::Triplet> entries;
  entries.emplace_back(1, 0, cplx(1));  // |up> -> |down>
  entries.emplace_back(0, 1, cplx(1));  // |down> -> |up>
  for (long x = -w; x <= w; ++x) {
    long tgt = (x == w) ? -w : x + 1;  // cyclic closure at the truncation edge
    entries.emplace_back(site_index(tgt), site_index(x), cplx(1));
  }
  attach_graph(*space, entries);
  ShiftFlipModel model{
      UnitaryStep::from_triplets(space, entries, false, horizon, "shift_flip"),
      VecC::Zero(2 + sites), VecC::Zero(2 + sites), Subspace{}};
  model.step.set_truncation_margin(2);
  model.psi(0) = cplx(1);
  model.phi(1) = cplx(1.0 / std::sqrt(2.0));
  model.phi(site_index(0)) = cplx(1.0 / std::sqrt(2.0));
  model.subspace.frame = MatC::Zero(2 + sites, 2);
  model.subspace.frame.col(0) = model.psi;
  model.subspace.frame.col(1) = model.phi;
  model.subspace.support = {0, 1, site_index(0)};
  return model;
}

// ---------------------------------------------------------------------------
// Coined 1D walks
// ---------------------------------------------------------------------------

UnitaryStep build_coined_1d(const CoinSpec1D& spec, long horizon, int roi) {
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  long x_lo = 0, x_hi = 0;
  bool finite = false;
  switch (spec.kind) {
    case Lattice1D::half_line:
      if (roi < 0) throw InvalidInput("half-line site must be >= 0");
      x_lo = 0;
      x_hi = roi + horizon + 2;
      break;
    case Lattice1D::finite:
      if (spec.num_sites < 2)
        throw InvalidInput("finite lattice needs at least two sites");
      if (roi < 0 || roi >= spec.num_sites)
        throw InvalidInput("region of interest outside the lattice");
      x_lo = 0;
      x_hi = spec.num_sites - 1;
      finite = true;
      break;
    case Lattice1D::line:
      x_lo = roi - (horizon + 2);
      x_hi = roi + (horizon + 2);
      break;
  }
  const long n_sites = x_hi - x_lo + 1;
  std::vector<BasisLabel> labels;
  labels.reserve(static_cast<size_t>(2 * n_sites));
  for (long x = x_lo; x <= x_hi; ++x) {
    labels.push_back({static_cast<int>(x), 0, 0,
                      "x=" + std::to_string(x) + ",up"});
    labels.push_back({static_cast<int>(x), 0, 1,
                      "x=" + std::to_string(x) + ",down"});
  }
  auto space = make_space(std::move(labels));
  auto up = [x_lo](long x) { return 2 * (x - x_lo); };
  auto down = [x_lo](long x) { return 2 * (x - x_lo) + 1; };

  std::vector<UnitaryStep::Triplet> entries;
  entries.reserve(static_cast<size_t>(4 * n_sites));
  for (long x = x_lo; x <= x_hi; ++x) {
    cplx g = spec.gamma(static_cast<int>(x));
    double rho = std::sqrt(1.0 - std::norm(g));
    // Coin columns: C|x,up> = rho|x,up> + conj(g)|x,down>,
    //               C|x,down> = -g|x,up> + rho|x,down>.
    // Spin-preserving shift (up -> x+1, down -> x-1) with reflections that
    // turn the mover around at the edges.
    long up_tgt = (x == x_hi) ? down(x) : up(x + 1);
    long down_tgt = (x == x_lo) ? up(x) : down(x - 1);
    entries.emplace_back(up_tgt, up(x), cplx(rho));
    entries.emplace_back(down_tgt, up(x), std::conj(g));
    entries.emplace_back(up_tgt, down(x), -g);
    entries.emplace_back(down_tgt, down(x), cplx(rho));
  }
  attach_graph(*space, entries);
  UnitaryStep u = UnitaryStep::from_triplets(
      space, entries, finite, finite ? kUnlimitedHorizon : horizon, "coined1d");
  u.set_roi(roi);
  u.set_truncation_margin(finite ? 0 : 2);
  return u;
}

Subspace site_subspace_1d(const UnitaryStep& u, int x) {
  const auto& labels = u.space().labels;
  long i_up = -1, i_down = -1;
  for (long i = 0; i < u.dim(); ++i) {
    if (labels[static_cast<size_t>(i)].site0 == x) {
      if (labels[static_cast<size_t>(i)].internal == 0) i_up = i;
      if (labels[static_cast<size_t>(i)].internal == 1) i_down = i;
    }
  }
  if (i_up < 0 || i_down < 0)
    throw InvalidInput("site is not part of the allocated lattice");
  if (!u.genuinely_finite()) {
    // Compressions P U^n P touch the boundary columns only via round trips,
    // so n <= 2 d - 1 is exact when d is the distance to the artificial edge.
    long x_lo = labels.front().site0, x_hi = labels.back().site0;
    long d = std::numeric_limits<long>::max();
    if (u.tag() == "coined1d") {
      bool left_artificial =
          !(x_lo == 0);  // half-line keeps its physical left edge at 0
      if (left_artificial) d = std::min(d, static_cast<long>(x - x_lo));
      d = std::min(d, static_cast<long>(x_hi - x));
    }
    if (2 * d - 1 < u.exact_horizon())
      throw HorizonExceeded(
          "site subspace is too close to the truncation edge for the stored "
          "horizon");
  }
  Subspace v;
  v.frame = MatC::Zero(u.dim(), 2);
  v.frame(i_up, 0) = cplx(1);
  v.frame(i_down, 1) = cplx(1);
  v.support = {i_up, i_down};
  return v;
}

// ---------------------------------------------------------------------------
// Coined 2D walks (explicit operator)
// ---------------------------------------------------------------------------

namespace {

struct Cell {
  int a = 0;
  int b = 0;  // lattice coordinates (square: x,y; hexagonal: cell i,j)
  bool operator<(const Cell& o) const {
    return std::tie(a, b) < std::tie(o.a, o.b);
  }
  bool operator==(const Cell& o) const { return a == o.a && b == o.b; }
};

Cell square_neighbor(const Cell& c, int dir) {
  static constexpr int dx[4] = {1, 0, -1, 0};
  static constexpr int dy[4] = {0, 1, 0, -1};
  return {c.a + dx[dir], c.b + dy[dir]};
}

// "Hexagonal" walk: three-direction walk on the triangular Bravais lattice,
// S|x,k> = |x + v_k, k> with v_0 = (1,0), v_1 = (0,1), v_2 = (-1,-1) in
// oblique cell coordinates, so v_0 + v_1 + v_2 = 0 and the targets sit at
// mutual 120-degree angles (the three nearest neighbors reachable per step).
constexpr int kTriDi[3] = {1, 0, -1};
constexpr int kTriDj[3] = {0, 1, -1};

// Periodic truncation for the hexagonal walk: the direction set has no
// self-inverse pairs, so a reflecting closure cannot be matched per site;
// wrapping at L = 2(horizon+2)+1 keeps U exactly unitary while no wavefront
// can travel far enough to wrap onto monitored sites within the horizon.
UnitaryStep build_hex_torus(const CoinSpec2D& spec, long horizon) {
  const int d = 3;
  const long radius = horizon + 2;
  const long L = 2 * radius + 1;
  const long n_cells = L * L;
  const long rm_origin = radius * L + radius;
  auto wrapc = [radius, L](long v) {
    return ((v + radius) % L + L) % L - radius;
  };
  auto cell_index = [&](long i, long j) {
    const long rm = (i + radius) * L + (j + radius);
    if (rm == rm_origin) return 0L;
    return rm < rm_origin ? rm + 1 : rm;
  };

  std::vector<BasisLabel> labels(static_cast<size_t>(n_cells * d));
  for (long i = -radius; i <= radius; ++i)
    for (long j = -radius; j <= radius; ++j) {
      const long ci = cell_index(i, j);
      for (int k = 0; k < d; ++k)
        labels[static_cast<size_t>(ci * d + k)] = {
            static_cast<int>(i), static_cast<int>(j), k,
            "(" + std::to_string(i) + "," + std::to_string(j) +
                "),dir=" + std::to_string(k)};
    }
  auto space = make_space(std::move(labels));
  auto state = [d](long cell, int dir) { return cell * d + dir; };

  std::vector<UnitaryStep::Triplet> entries;
  entries.reserve(static_cast<size_t>(n_cells * d * d));
  for (long i = -radius; i <= radius; ++i)
    for (long j = -radius; j <= radius; ++j) {
      const long ci = cell_index(i, j);
      for (int alpha = 0; alpha < d; ++alpha) {
        const long target = state(
            cell_index(wrapc(i + kTriDi[alpha]), wrapc(j + kTriDj[alpha])),
            alpha);
        for (int beta = 0; beta < d; ++beta) {
          cplx amp = spec.coin(alpha, beta);
          if (amp == cplx(0)) continue;
          entries.emplace_back(target, state(ci, beta), amp);
        }
      }
    }
  attach_graph(*space, entries);
  UnitaryStep u = UnitaryStep::from_triplets(space, entries, false, horizon,
                                             "coined2d");
  u.set_truncation_margin(2);
  return u;
}

}  // namespace

UnitaryStep build_coined_2d(const CoinSpec2D& spec, long horizon) {
  if (horizon < 1) throw InvalidInput("horizon must be >= 1");
  spec.validate();
  if (spec.kind == Lattice2D::hexagonal) return build_hex_torus(spec, horizon);
  const int d = spec.internal_dim();
  const long radius = horizon + 2;

  auto neighbor = [&](const Cell& c, int dir) { return square_neighbor(c, dir); };

  // Sites within graph distance `radius` of the origin.
  std::map<Cell, long> index;
  std::vector<Cell> cells;
  {
    std::deque<std::pair<Cell, long>> queue;
    Cell origin{0, 0};
    index[origin] = 0;
    cells.push_back(origin);
    queue.emplace_back(origin, 0);
    while (!queue.empty()) {
      auto [c, dist] = queue.front();
      queue.pop_front();
      if (dist == radius) continue;
      for (int dir = 0; dir < d; ++dir) {
        Cell n = neighbor(c, dir);
        if (index.count(n)) continue;
        index[n] = static_cast<long>(cells.size());
        cells.push_back(n);
        queue.emplace_back(n, dist + 1);
      }
    }
  }

  const long n_cells = static_cast<long>(cells.size());
  std::vector<BasisLabel> labels;
  labels.reserve(static_cast<size_t>(n_cells * d));
  for (const Cell& c : cells)
    for (int k = 0; k < d; ++k)
      labels.push_back({c.a, c.b, k,
                        "(" + std::to_string(c.a) + "," + std::to_string(c.b) +
                            "),dir=" + std::to_string(k)});
  auto space = make_space(std::move(labels));
  auto state = [d](long cell, int dir) { return cell * d + dir; };

  // Shift permutation with the bounce completion at the artificial boundary:
  // at each site, directions whose neighbor is missing are matched index-wise
  // (sorted) with the directions whose inbound partner is missing.
  std::vector<long> shift_target(static_cast<size_t>(n_cells * d), -1);
  for (long ci = 0; ci < n_cells; ++ci) {
    const Cell& c = cells[static_cast<size_t>(ci)];
    std::vector<int> missing_out, orphan_in;
    for (int dir = 0; dir < d; ++dir) {
      Cell out = neighbor(c, dir);
      // Inbound partner of (c, dir) under the directional shift: c - e_dir.
      Cell origin_nb = square_neighbor(Cell{0, 0}, dir);
      Cell in{c.a - origin_nb.a, c.b - origin_nb.b};
      if (index.count(out))
        shift_target[static_cast<size_t>(state(ci, dir))] =
            state(index.at(out), dir);
      else
        missing_out.push_back(dir);
      if (!index.count(in)) orphan_in.push_back(dir);
    }
    if (missing_out.size() != orphan_in.size())
      throw CheckFailed("boundary completion mismatch");
    for (size_t k = 0; k < missing_out.size(); ++k)
      shift_target[static_cast<size_t>(state(ci, missing_out[k]))] =
          state(ci, orphan_in[k]);
  }

  std::vector<UnitaryStep::Triplet> entries;
  entries.reserve(static_cast<size_t>(n_cells * d * d));
  for (long ci = 0; ci < n_cells; ++ci)
    for (int beta = 0; beta < d; ++beta)
      for (int alpha = 0; alpha < d; ++alpha) {
        cplx amp = spec.coin(alpha, beta);
        if (amp == cplx(0)) continue;
        entries.emplace_back(
            shift_target[static_cast<size_t>(state(ci, alpha))],
            state(ci, beta), amp);
      }
  attach_graph(*space, entries);
  UnitaryStep u = UnitaryStep::from_triplets(space, entries, false, horizon,
                                             "coined2d");
  u.set_truncation_margin(2);
  return u;
}

Subspace origin_subspace_2d(const UnitaryStep& u) {
  // The BFS in build_coined_2d puts the origin first.
  const auto& labels = u.space().labels;
  int d = 0;
  while (d < static_cast<int>(labels.size()) && labels[static_cast<size_t>(d)].site0 == 0 &&
         labels[static_cast<size_t>(d)].site1 == 0 &&
         labels[static_cast<size_t>(d)].internal == d)
    ++d;
  if (d < 3) throw InvalidInput("origin site not found");
  Subspace v;
  v.frame = MatC::Zero(u.dim(), d);
  for (int k = 0; k < d; ++k) {
    v.frame(k, k) = cplx(1);
    v.support.push_back(k);
  }
  return v;
}

VecC apply_power(const UnitaryStep& u, const VecC& psi, long n) {
  if (n < 0) throw InvalidInput("power must be >= 0");
  if (!u.genuinely_finite() && n > u.exact_horizon())
    throw HorizonExceeded("requested power exceeds the exactness horizon");
  VecC v = psi;
  for (long k = 0; k < n; ++k) v = u.apply(v);
  return v;
}

// ---------------------------------------------------------------------------
// Coins / random unitaries
// ---------------------------------------------------------------------------

MatC grover_coin(int d) {
  if (d < 2) throw InvalidInput("coin dimension must be >= 2");
  return MatC::Constant(d, d, cplx(2.0 / d)) - MatC::Identity(d, d);
}

MatC fourier_coin(int d) {
  if (d < 2) throw InvalidInput("coin dimension must be >= 2");
  MatC c(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      c(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                           2.0 * kPi * j * k / d);
  return c;
}

MatC c0_coin() {
  MatC c(3, 3);
  double s = 1.0 / std::sqrt(2.0);
  c << cplx(0), cplx(0), cplx(1),
       cplx(s), cplx(s), cplx(0),
       cplx(s), cplx(-s), cplx(0);
  return c;
}

MatC random_unitary_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatC g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<MatC> qr(g);
  MatC q = qr.householderQ();
  MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    cplx d = r(j, j);
    q.col(j) *= (d == cplx(0)) ? cplx(1) : d / std::abs(d);
  }
  return q;
}

UnitaryStep random_unitary_step(int dim, std::mt19937_64& rng) {
  std::vector<BasisLabel> labels(static_cast<size_t>(dim));
  for (int j = 0; j < dim; ++j)
    labels[static_cast<size_t>(j)] = {j, 0, 0, "e" + std::to_string(j)};
  return UnitaryStep::from_dense(make_space(std::move(labels)),
                                 random_unitary_matrix(dim, rng), true,
                                 kUnlimitedHorizon, "random");
}

}  // namespace qrec
