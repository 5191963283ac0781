#include "qrec/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrec {

namespace {

void check_horizon(const UnitaryStep& u, long n_max) {
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
  if (!u.genuinely_finite() && n_max > u.exact_horizon())
    throw HorizonExceeded("n_max exceeds the exactness horizon of the model");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Compressions and first-return amplitudes
// ---------------------------------------------------------------------------

MatSeries mu_sequence(const UnitaryStep& u, const Subspace& v, long n_max) {
  check_horizon(u, n_max);
  const long m = v.dim_v();
  MatSeries mu(static_cast<size_t>(n_max) + 1, MatC::Zero(m, m));
  mu[0] = MatC::Identity(m, m);
  std::vector<VecC> cols(static_cast<size_t>(m));
  for (long j = 0; j < m; ++j) cols[static_cast<size_t>(j)] = v.frame.col(j);
  for (long n = 1; n <= n_max; ++n)
    for (long j = 0; j < m; ++j) {
      cols[static_cast<size_t>(j)] = u.apply(cols[static_cast<size_t>(j)]);
      mu[static_cast<size_t>(n)].col(j) =
          v.frame.adjoint() * cols[static_cast<size_t>(j)];
    }
  return mu;
}

FirstReturnData first_return_direct(const UnitaryStep& u, const Subspace& v,
                                    long n_max) {
  check_horizon(u, n_max);
  const long m = v.dim_v();
  FirstReturnData out;
  out.a.assign(static_cast<size_t>(n_max) + 1, MatC::Zero(m, m));
  out.survival.setZero(n_max + 1, m);
  std::vector<VecC> cols(static_cast<size_t>(m));
  for (long j = 0; j < m; ++j) {
    cols[static_cast<size_t>(j)] = v.frame.col(j);
    out.survival(0, j) = 1.0;
  }
  for (long n = 1; n <= n_max; ++n)
    for (long j = 0; j < m; ++j) {
      VecC w = u.apply(cols[static_cast<size_t>(j)]);
      VecC c = v.frame.adjoint() * w;
      out.a[static_cast<size_t>(n)].col(j) = c;
      w -= v.frame * c;  // survivor (I-P)Uw
      out.survival(n, j) = w.squaredNorm();
      cols[static_cast<size_t>(j)] = std::move(w);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Renewal relation
// ---------------------------------------------------------------------------

MatSeries amplitudes_from_mu(const MatSeries& mu) {
  if (mu.empty()) throw InvalidInput("empty compression sequence");
  const long d = mu[0].rows();
  if ((mu[0] - MatC::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidInput("mu_0 must be the identity");
  MatSeries a(mu.size(), MatC::Zero(d, d));
  for (size_t n = 1; n < mu.size(); ++n) {
    MatC acc = mu[n];
    for (size_t k = 1; k < n; ++k) acc -= mu[k] * a[n - k];
    a[n] = acc;
  }
  return a;
}

MatSeries mu_from_amplitudes(const MatSeries& a) {
  if (a.empty()) throw InvalidInput("empty amplitude sequence");
  const long d = a[0].rows();
  if (a[0].cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidInput("a_0 must vanish");
  MatSeries mu(a.size(), MatC::Zero(d, d));
  mu[0] = MatC::Identity(d, d);
  for (size_t n = 1; n < a.size(); ++n) {
    MatC acc = a[n];
    for (size_t k = 1; k < n; ++k) acc += mu[k] * a[n - k];
    mu[n] = acc;
  }
  return mu;
}

Coeffs scalar_amplitudes_from_mu(const Coeffs& mu) {
  if (mu.empty()) throw InvalidInput("empty compression sequence");
  if (std::abs(mu[0] - cplx(1)) > 1e-9)
    throw InvalidInput("mu_0 must be 1");
  Coeffs a(mu.size(), cplx(0));
  for (size_t n = 1; n < mu.size(); ++n) {
    cplx acc = mu[n];
    for (size_t k = 1; k < n; ++k) acc -= mu[k] * a[n - k];
    a[n] = acc;
  }
  return a;
}

Coeffs scalar_mu_from_amplitudes(const Coeffs& a) {
  if (a.empty()) throw InvalidInput("empty amplitude sequence");
  if (std::abs(a[0]) > 1e-9) throw InvalidInput("a_0 must vanish");
  Coeffs mu(a.size(), cplx(0));
  mu[0] = cplx(1);
  for (size_t n = 1; n < a.size(); ++n) {
    cplx acc = a[n];
    for (size_t k = 1; k < n; ++k) acc += mu[k] * a[n - k];
    mu[n] = acc;
  }
  return mu;
}

MatSeries schur_from_amplitudes(const MatSeries& a) {
  if (a.size() < 2) throw InvalidInput("need at least a_1");
  MatSeries f(a.size() - 1);
  for (size_t m = 0; m + 1 < a.size(); ++m) f[m] = a[m + 1].adjoint();
  return f;
}

MatSeries caratheodory_from_mu(const MatSeries& mu) {
  if (mu.empty()) throw InvalidInput("empty compression sequence");
  const long d = mu[0].rows();
  MatSeries f(mu.size());
  f[0] = MatC::Identity(d, d);
  for (size_t m = 1; m < mu.size(); ++m) f[m] = 2.0 * mu[m].adjoint();
  return f;
}

// ---------------------------------------------------------------------------
// Return probability operator
// ---------------------------------------------------------------------------

ReturnProbability return_probability(const MatSeries& a, TailPolicy policy) {
  if (a.empty()) throw InvalidInput("empty amplitude sequence");
  const long d = a[0].rows();
  ReturnProbability out;
  out.partial = MatC::Zero(d, d);
  std::vector<double> increments(a.size(), 0.0);
  long last_nonzero = 0;
  for (size_t n = 1; n < a.size(); ++n) {
    out.partial += a[n].adjoint() * a[n];
    increments[n] = a[n].squaredNorm();  // tr(a_n^dag a_n)
    if (a[n].cwiseAbs().maxCoeff() > 1e-13) last_nonzero = static_cast<long>(n);
  }
  out.trace_remainder = 0.0;
  if (policy == TailPolicy::power_law) {
    out.fit =
        fit_power_law_tail(increments, static_cast<long>(a.size()) - 1);
    const bool terminated = last_nonzero <= static_cast<long>(a.size() - 1) / 2;
    if (out.fit.valid) {
      out.trace_remainder = out.fit.remainder;
    } else if (!terminated) {
      // No usable tail model on a still-active series: fall back to the
      // rigorous bound Tr(R) <= dim V on the dropped trace.
      out.trace_remainder = std::max(
          0.0, static_cast<double>(d) - std::real(out.partial.trace()));
    }
  }
  return out;
}

double transition_probability(const MatSeries& a, const VecC& psi,
                              const VecC& phi) {
  KahanSum p;
  for (size_t n = 1; n < a.size(); ++n)
    p.add(std::norm(phi.dot(a[n] * psi)));
  return p.value();
}

std::vector<EigenvalueEstimate> return_probability_eigenvalues(
    const ReturnProbability& r) {
  MatC h = 0.5 * (r.partial + r.partial.adjoint());
  Eigen::SelfAdjointEigenSolver<MatC> es(h);
  if (es.info() != Eigen::Success)
    throw CheckFailed("eigenvalue solve failed");
  std::vector<EigenvalueEstimate> out;
  for (long k = es.eigenvalues().size() - 1; k >= 0; --k) {
    EigenvalueEstimate e;
    e.value = es.eigenvalues()(k);
    e.enclosure = {e.value, std::min(e.value + r.trace_remainder, 1.0)};
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expected return time
// ---------------------------------------------------------------------------

ReturnTimeOperator tau_operator(const MatSeries& a) {
  if (a.empty()) throw InvalidInput("empty amplitude sequence");
  const long d = a[0].rows();
  ReturnTimeOperator out;
  out.partial = MatC::Zero(d, d);
  long last_nonzero = 0;
  for (size_t n = 1; n < a.size(); ++n) {
    if (a[n].cwiseAbs().maxCoeff() > 1e-13) last_nonzero = static_cast<long>(n);
    out.partial += static_cast<double>(n) * (a[n].adjoint() * a[n]);
  }
  out.exact = last_nonzero <= static_cast<long>(a.size() - 1) / 2;
  return out;
}

StateRecurrence state_recurrence(const Coeffs& scalar_mu,
                                 double recurrence_tol) {
  StateRecurrence out;
  out.amplitudes = scalar_amplitudes_from_mu(scalar_mu);
  const long n_max = static_cast<long>(out.amplitudes.size()) - 1;
  KahanSum mass, moment;
  std::vector<double> q(out.amplitudes.size(), 0.0);
  for (long n = 1; n <= n_max; ++n) {
    q[static_cast<size_t>(n)] = std::norm(out.amplitudes[static_cast<size_t>(n)]);
    mass.add(q[static_cast<size_t>(n)]);
    moment.add(static_cast<double>(n) * q[static_cast<size_t>(n)]);
  }
  out.return_probability = mass.value();
  out.tau_partial = moment.value();
  out.fit = fit_power_law_tail(q, n_max);
  double mass_tail = out.fit.valid ? out.fit.remainder : 0.0;
  double upper = std::min(out.return_probability + mass_tail, 1.0);
  out.return_probability_interval = {out.return_probability, upper};
  out.recurrent = 1.0 - upper <= recurrence_tol;
  if (!out.recurrent) {
    out.tau = kInf;
    out.tau_finite = false;
    out.tau_interval = {out.tau_partial, kInf};
    return out;
  }
  // First-moment tail sum_{n>N} n q_n ~ C N^{2-p}/(p-2) needs p > 2.
  if (out.fit.valid && out.fit.exponent > 2.1) {
    double p = out.fit.exponent;
    double tail = out.fit.amplitude *
                  std::pow(static_cast<double>(n_max), 2.0 - p) / (p - 2.0);
    out.tau = out.tau_partial + tail;
    out.tau_finite = true;
    out.tau_interval = {out.tau_partial, out.tau_partial + 2.0 * tail};
  } else if (!out.fit.valid && 1.0 - out.return_probability <= recurrence_tol) {
    // Tail already numerically negligible (fast decay defeats the fit).
    out.tau = out.tau_partial;
    out.tau_finite = true;
    out.tau_interval = {out.tau_partial,
                        out.tau_partial + recurrence_tol * n_max};
  } else {
    out.tau = kInf;
    out.tau_finite = false;
    out.tau_interval = {out.tau_partial, kInf};
  }
  return out;
}

StateRecurrence monitored_state(const UnitaryStep& u, const VecC& psi,
                                long n_max, double recurrence_tol) {
  check_horizon(u, n_max);
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw InvalidInput("state must be normalized");
  Coeffs mu(static_cast<size_t>(n_max) + 1);
  mu[0] = cplx(1);
  VecC v = psi;
  for (long n = 1; n <= n_max; ++n) {
    v = u.apply(v);
    mu[static_cast<size_t>(n)] = psi.dot(v);  // <psi, U^n psi>
  }
  return state_recurrence(mu, recurrence_tol);
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

SpectralDecomposition spectral_decompose(const UnitaryStep& u,
                                         double cluster_tol) {
  if (!u.genuinely_finite())
    throw NotApplicable("spectral decomposition needs a genuinely finite model");
  if (u.dim() > 512)
    throw ResourceBudget("spectral decomposition limited to dim <= 512");
  const long d = u.dim();
  MatC m = u.dense();
  // The Schur form of a normal matrix is diagonal, so the Schur vectors are
  // an orthonormal eigenbasis; the off-diagonal residual of T certifies it.
  Eigen::ComplexSchur<MatC> schur(m, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw CheckFailed("eigenvalue solve failed");
  const MatC& q = schur.matrixU();
  const MatC& t = schur.matrixT();
  double offdiag = 0.0;
  for (long i = 0; i < d; ++i)
    for (long j = i + 1; j < d; ++j)
      offdiag = std::max(offdiag, std::abs(t(i, j)));
  if (offdiag > 1e-8)
    throw CheckFailed("spectral decomposition certificate failed (defect " +
                      std::to_string(offdiag) + ")");

  // Group eigenvalues by angle (merging across the -pi/pi seam).
  std::vector<std::pair<double, long>> angles(static_cast<size_t>(d));
  for (long j = 0; j < d; ++j)
    angles[static_cast<size_t>(j)] = {std::arg(t(j, j)), j};
  std::sort(angles.begin(), angles.end());
  std::vector<std::vector<long>> groups;
  double prev_angle = 0.0;
  for (size_t i = 0; i < angles.size(); ++i) {
    if (i > 0 && angles[i].first - prev_angle < cluster_tol) {
      groups.back().push_back(angles[i].second);
    } else {
      groups.push_back({angles[i].second});
    }
    prev_angle = angles[i].first;
  }
  if (groups.size() > 1 &&
      (angles.front().first + 2.0 * kPi) - angles.back().first < cluster_tol) {
    for (long j : groups.back()) groups.front().push_back(j);
    groups.pop_back();
  }

  SpectralDecomposition out;
  for (const auto& g : groups) {
    cplx lambda(0, 0);
    MatC proj = MatC::Zero(d, d);
    for (long j : g) {
      lambda += t(j, j);
      proj += q.col(j) * q.col(j).adjoint();
    }
    lambda /= std::abs(lambda);
    out.eigenvalues.push_back(lambda);
    out.multiplicities.push_back(static_cast<int>(g.size()));
    out.projectors.push_back(std::move(proj));
  }
  return out;
}

SpectralMeasure subspace_spectral_measure(const SpectralDecomposition& d,
                                          const Subspace& v, double rank_tol) {
  SpectralMeasure out;
  for (size_t k = 0; k < d.eigenvalues.size(); ++k) {
    MatC mass = v.frame.adjoint() * d.projectors[k] * v.frame;
    Eigen::JacobiSVD<MatC> svd(mass);
    int rank = 0;
    for (long j = 0; j < svd.singularValues().size(); ++j)
      if (svd.singularValues()(j) > rank_tol) ++rank;
    out.eigenvalues.push_back(d.eigenvalues[k]);
    out.masses.push_back(std::move(mass));
    out.ranks.push_back(rank);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary evaluator
// ---------------------------------------------------------------------------

BoundaryEvaluator::BoundaryEvaluator(const UnitaryStep& u, const Subspace& v) {
  if (!u.genuinely_finite())
    throw NotApplicable("exact boundary evaluation needs a genuinely finite model");
  MatC udense = u.dense();
  const long d = u.dim();
  const long m = v.dim_v();
  // Krylov closure of V under U with modified Gram-Schmidt.
  std::vector<VecC> basis;
  auto add_vector = [&](VecC w) {
    for (int pass = 0; pass < 2; ++pass)
      for (const VecC& b : basis) w -= b.dot(w) * b;
    double nrm = w.norm();
    if (nrm < 1e-9) return false;
    basis.push_back(w / nrm);
    return true;
  };
  for (long j = 0; j < m; ++j) add_vector(v.frame.col(j));
  size_t frontier = 0;
  while (frontier < basis.size() && static_cast<long>(basis.size()) < d) {
    size_t stop = basis.size();
    for (size_t j = frontier; j < stop; ++j) add_vector(udense * basis[j]);
    frontier = stop;
  }
  const long k = static_cast<long>(basis.size());
  MatC q(d, k);
  for (long j = 0; j < k; ++j) q.col(j) = basis[static_cast<size_t>(j)];
  u_min_ = q.adjoint() * udense * q;
  double defect =
      (u_min_.adjoint() * u_min_ - MatC::Identity(k, k)).cwiseAbs().maxCoeff();
  if (defect > 1e-8)
    throw CheckFailed("minimal invariant subspace closure failed (defect " +
                      std::to_string(defect) + ")");
  frame_min_ = q.adjoint() * v.frame;
  ut_min_ = u_min_ - frame_min_ * (frame_min_.adjoint() * u_min_);
}

MatC BoundaryEvaluator::a_hat(cplx z) const {
  if (std::abs(z) > 1.0 + 1e-12)
    throw InvalidInput("a_hat is defined on the closed unit disk");
  const long k = u_min_.rows();
  MatC sys = MatC::Identity(k, k) - z * ut_min_;
  MatC sol = sys.partialPivLu().solve(frame_min_);
  return z * (frame_min_.adjoint() * (u_min_ * sol));
}

// ---------------------------------------------------------------------------
// K invariant
// ---------------------------------------------------------------------------

long k_spectral(const SpectralMeasure& m) {
  long k = 0;
  for (int r : m.ranks) k += r;
  return k;
}

long k_winding(const BoundaryEvaluator& ev) {
  WindingResult w = winding_number(
      [&](double theta) { return ev.a_hat(std::polar(1.0, theta)).determinant(); });
  return w.winding;
}

double k_frobenius(const UnitaryStep& u, const Subspace& v, long max_steps,
                   double tol) {
  const long m = v.dim_v();
  std::vector<VecC> cols(static_cast<size_t>(m));
  for (long j = 0; j < m; ++j) cols[static_cast<size_t>(j)] = v.frame.col(j);
  KahanSum total;
  total.add(static_cast<double>(m));  // n = 0 term: ||P||_F^2 = dim V
  for (long n = 1; n <= max_steps; ++n) {
    if (!u.genuinely_finite() && n > u.exact_horizon())
      throw HorizonExceeded("Frobenius sum exceeded the exactness horizon");
    double inc = 0.0;
    for (long j = 0; j < m; ++j) {
      VecC w = u.apply(cols[static_cast<size_t>(j)]);
      w -= v.frame * (v.frame.adjoint() * w);
      inc += w.squaredNorm();
      cols[static_cast<size_t>(j)] = std::move(w);
    }
    total.add(inc);
    if (inc < tol) return total.value();
  }
  throw NotApplicable("survival weights did not decay; K may be infinite");
}

long k_dim_minus_nu(const UnitaryStep& u, const SpectralDecomposition& d,
                    const Subspace& v, double rank_tol) {
  long nu = 0;
  for (size_t k = 0; k < d.eigenvalues.size(); ++k) {
    // dim(V_k cap V^perp) = mult_k - rank(frame^dag E_k).
    MatC overlap = v.frame.adjoint() * d.projectors[k];
    Eigen::JacobiSVD<MatC> svd(overlap);
    int rank = 0;
    for (long j = 0; j < svd.singularValues().size(); ++j)
      if (svd.singularValues()(j) > rank_tol) ++rank;
    nu += d.multiplicities[static_cast<size_t>(k)] - rank;
  }
  return u.dim() - nu;
}

KInvariant k_invariant(const UnitaryStep& u, const Subspace& v) {
  KInvariant out;
  SpectralDecomposition d = spectral_decompose(u);
  out.spectral = k_spectral(subspace_spectral_measure(d, v));
  BoundaryEvaluator ev(u, v);
  out.winding = k_winding(ev);
  out.frobenius = k_frobenius(u, v);
  out.dim_minus_nu = k_dim_minus_nu(u, d, v);
  long rounded = std::llround(out.frobenius);
  if (out.spectral != out.winding || out.spectral != out.dim_minus_nu ||
      std::abs(out.frobenius - static_cast<double>(rounded)) > 1e-6 ||
      rounded != out.spectral)
    throw CheckFailed("the four K computations disagree");
  out.value = out.spectral;
  return out;
}

// ---------------------------------------------------------------------------
// Loop winding
// ---------------------------------------------------------------------------

namespace {

// Accumulated Bargmann phase of the discrete loop, in units of 2 pi.
double bargmann_sum(const std::vector<VecC>& v) {
  KahanSum phase;
  const size_t m = v.size();
  for (size_t j = 0; j < m; ++j) {
    cplx o = v[j].dot(v[(j + 1) % m]);  // <v_j, v_{j+1}>
    if (std::abs(o) < 1e-12)
      throw NotApplicable("loop winding undefined: consecutive samples orthogonal");
    phase.add(std::arg(o));
  }
  return phase.value() / (2.0 * kPi);
}

}  // namespace

BerryResult berry_phase_loop(const std::function<VecC(double)>& loop,
                             double tol, long initial_grid, long max_grid) {
  BerryResult out;
  auto sample = [&](long grid) {
    std::vector<VecC> v(static_cast<size_t>(grid));
    for (long j = 0; j < grid; ++j) {
      v[static_cast<size_t>(j)] = loop(2.0 * kPi * j / grid);
      double nrm = v[static_cast<size_t>(j)].norm();
      out.norm_defect = std::max(out.norm_defect, std::abs(nrm - 1.0));
      if (nrm < 1e-12)
        throw NotApplicable("loop passes through the origin");
      v[static_cast<size_t>(j)] /= nrm;
    }
    return v;
  };
  long grid = std::max<long>(initial_grid, 8);
  double prev = bargmann_sum(sample(grid));
  while (true) {
    grid *= 2;
    if (grid > max_grid)
      throw NotApplicable("loop winding did not stabilize");
    double cur = bargmann_sum(sample(grid));
    if (std::abs(cur - prev) < tol / 4.0) {
      out.value = (4.0 * cur - prev) / 3.0;  // Richardson, O(1/M^2) error model
      out.grid = grid;
      return out;
    }
    prev = cur;
  }
}

double return_time_winding(const BoundaryEvaluator& ev, const VecC& psi_coeffs,
                           double tol, double norm_tol) {
  if (std::abs(psi_coeffs.norm() - 1.0) > 1e-10)
    throw InvalidInput("state must be normalized");
  BerryResult r = berry_phase_loop(
      [&](double theta) {
        return VecC(ev.a_hat(std::polar(1.0, theta)) * psi_coeffs);
      },
      tol);
  if (r.norm_defect > norm_tol)
    throw NotApplicable(
        "loop left the unit sphere: the state is not recurrent, expected "
        "return time is infinite");
  return r.value;
}

}  // namespace qrec
