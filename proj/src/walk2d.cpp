#include "qrec/walk2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

namespace qrec {

namespace {

bool coin_is_real(const MatC& c) {
  for (long i = 0; i < c.rows(); ++i)
    for (long j = 0; j < c.cols(); ++j)
      if (c(i, j).imag() != 0.0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Square lattice kernel.
//
// One split-component plane per internal direction; gather form
//   out_alpha[x][y] = sum_beta C(alpha,beta) in_beta[x-dx_a][y-dy_a]
// looped over the exact support of the previous step (|sx|+|sy| <= n-1).
// Direction-alpha amplitudes at step n live exactly on that support shifted
// by e_alpha, which contains the set written two steps earlier, so planes
// stay exact everywhere (zero outside the written set) without clearing.
// Each output element is produced by one fixed expression, making serial and
// row-parallel runs bit-identical.
// ---------------------------------------------------------------------------

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

struct SquarePlanes {
  long R = 0, W = 0;
  std::array<std::vector<double>, 4> re, im;
  void init(long radius) {
    R = radius;
    W = 2 * radius + 1;
    for (auto& p : re) p.assign(static_cast<size_t>(W) * W, 0.0);
    for (auto& p : im) p.assign(static_cast<size_t>(W) * W, 0.0);
  }
  size_t at(long x, long y) const {
    return static_cast<size_t>(x + R) * static_cast<size_t>(W) +
           static_cast<size_t>(y + R);
  }
};

template <bool kRealCoin>
void square_step(const SquarePlanes& in, SquarePlanes& out, long n,
                 const double* cr, const double* ci, bool par) {
  const long s_max = n - 1;
  for (int alpha = 0; alpha < 4; ++alpha) {
    const double* crow = cr + 4 * alpha;
    const double* cirow = ci + 4 * alpha;
    double* plane_r = out.re[static_cast<size_t>(alpha)].data();
    double* plane_i = out.im[static_cast<size_t>(alpha)].data();
#pragma omp parallel for schedule(static) if (par)
    for (long sx = -s_max; sx <= s_max; ++sx) {
      const long span = s_max - std::labs(sx);
      const size_t o0 = out.at(sx + kDx[alpha], -span + kDy[alpha]);
      const size_t s0 = in.at(sx, -span);
      double* out_r = plane_r + o0;
      double* out_i = plane_i + o0;
      const double* in_r[4];
      const double* in_i[4];
      for (int b = 0; b < 4; ++b) {
        in_r[b] = in.re[static_cast<size_t>(b)].data() + s0;
        in_i[b] = in.im[static_cast<size_t>(b)].data() + s0;
      }
      const long len = 2 * span + 1;
      for (long k = 0; k < len; ++k) {
        double ar = 0.0, ai = 0.0;
        for (int b = 0; b < 4; ++b) {
          const double xr = in_r[b][k], xi = in_i[b][k];
          if constexpr (kRealCoin) {
            ar += crow[b] * xr;
            ai += crow[b] * xi;
          } else {
            ar += crow[b] * xr - cirow[b] * xi;
            ai += crow[b] * xi + cirow[b] * xr;
          }
        }
        out_r[k] = ar;
        out_i[k] = ai;
      }
    }
  }
}

template <bool kRealCoin>
void square_trajectory(const Walk2DJob& job, int b0, const double* cr,
                       const double* ci, MatSeries& mu) {
  SquarePlanes a, b;
  a.init(job.n_max + 2);
  b.init(job.n_max + 2);
  a.re[static_cast<size_t>(b0)][a.at(0, 0)] = 1.0;
  SquarePlanes* in = &a;
  SquarePlanes* out = &b;
  const size_t origin = a.at(0, 0);
  for (long n = 1; n <= job.n_max; ++n) {
    square_step<kRealCoin>(*in, *out, n, cr, ci, job.parallel);
    for (int alpha = 0; alpha < 4; ++alpha)
      mu[static_cast<size_t>(n)](alpha, b0) =
          cplx(out->re[static_cast<size_t>(alpha)][origin],
               out->im[static_cast<size_t>(alpha)][origin]);
    std::swap(in, out);
  }
}

// ---------------------------------------------------------------------------
// Hexagonal kernel.
//
// Three-direction walk on the triangular Bravais lattice, matching the
// explicit operator builder: S|x,k> = |x + v_k, k> with v_0 = (1,0),
// v_1 = (0,1), v_2 = (-1,-1) in oblique cell coordinates (the vectors sum to
// zero, so returns happen at multiples of three steps).  Support after n
// steps sits inside the box |i|,|j| <= n, which is reassigned in full each
// step; the same growing-window argument as for the square kernel keeps the
// planes exact without clearing.
// ---------------------------------------------------------------------------

constexpr int kTriDi[3] = {1, 0, -1};
constexpr int kTriDj[3] = {0, 1, -1};

struct HexPlanes {
  long R = 0, W = 0;
  std::array<std::vector<double>, 3> re, im;
  void init(long radius) {
    R = radius;
    W = 2 * radius + 1;
    for (auto& p : re) p.assign(static_cast<size_t>(W) * W, 0.0);
    for (auto& p : im) p.assign(static_cast<size_t>(W) * W, 0.0);
  }
  size_t at(long i, long j) const {
    return static_cast<size_t>(i + R) * static_cast<size_t>(W) +
           static_cast<size_t>(j + R);
  }
};

template <bool kRealCoin>
void hex_step(const HexPlanes& in, HexPlanes& out, long n, const double* cr,
              const double* ci, bool par) {
  const long m = std::min(n, in.R - 1);
  for (int alpha = 0; alpha < 3; ++alpha) {
    const double* crow = cr + 3 * alpha;
    const double* cirow = ci + 3 * alpha;
    double* plane_r = out.re[static_cast<size_t>(alpha)].data();
    double* plane_i = out.im[static_cast<size_t>(alpha)].data();
#pragma omp parallel for schedule(static) if (par)
    for (long i = -m; i <= m; ++i) {
      const size_t o0 = out.at(i, -m);
      const size_t s0 = in.at(i - kTriDi[alpha], -m - kTriDj[alpha]);
      double* out_r = plane_r + o0;
      double* out_i = plane_i + o0;
      const double* in_r[3];
      const double* in_i[3];
      for (int b = 0; b < 3; ++b) {
        in_r[b] = in.re[static_cast<size_t>(b)].data() + s0;
        in_i[b] = in.im[static_cast<size_t>(b)].data() + s0;
      }
      const long len = 2 * m + 1;
      for (long k = 0; k < len; ++k) {
        double ar = 0.0, ai = 0.0;
        for (int b = 0; b < 3; ++b) {
          const double xr = in_r[b][k], xi = in_i[b][k];
          if constexpr (kRealCoin) {
            ar += crow[b] * xr;
            ai += crow[b] * xi;
          } else {
            ar += crow[b] * xr - cirow[b] * xi;
            ai += crow[b] * xi + cirow[b] * xr;
          }
        }
        out_r[k] = ar;
        out_i[k] = ai;
      }
    }
  }
}

template <bool kRealCoin>
void hex_trajectory(const Walk2DJob& job, int b0, const double* cr,
                    const double* ci, MatSeries& mu) {
  HexPlanes a, b;
  a.init(job.n_max + 2);
  b.init(job.n_max + 2);
  a.re[static_cast<size_t>(b0)][a.at(0, 0)] = 1.0;
  HexPlanes* in = &a;
  HexPlanes* out = &b;
  const size_t origin = a.at(0, 0);
  for (long n = 1; n <= job.n_max; ++n) {
    hex_step<kRealCoin>(*in, *out, n, cr, ci, job.parallel);
    for (int alpha = 0; alpha < 3; ++alpha)
      mu[static_cast<size_t>(n)](alpha, b0) =
          cplx(out->re[static_cast<size_t>(alpha)][origin],
               out->im[static_cast<size_t>(alpha)][origin]);
    std::swap(in, out);
  }
}

}  // namespace

void Walk2DJob::validate() const {
  if (n_max < 1) throw InvalidInput("walk horizon must be >= 1");
  spec.validate();
  if (memory_budget_gb <= 0)
    throw InvalidInput("memory budget must be positive");
}

double evolution_bytes(const Walk2DJob& job) {
  const double w = static_cast<double>(2 * (job.n_max + 2) + 1);
  const double planes = job.spec.kind == Lattice2D::square ? 4.0 : 3.0;
  return 2.0 * planes * 2.0 * w * w * sizeof(double);
}

MatSeries origin_mu_sequence(const Walk2DJob& job) {
  job.validate();
  const double need = evolution_bytes(job);
  if (need > job.memory_budget_gb * 1e9)
    throw ResourceBudget("streamed evolution needs about " +
                         std::to_string(need / 1e9) + " GB, budget is " +
                         std::to_string(job.memory_budget_gb) + " GB");
  const int d = job.spec.internal_dim();
  std::vector<double> cr(static_cast<size_t>(d) * d),
      ci(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      cr[static_cast<size_t>(a * d + b)] = job.spec.coin(a, b).real();
      ci[static_cast<size_t>(a * d + b)] = job.spec.coin(a, b).imag();
    }
  const bool real_coin = coin_is_real(job.spec.coin);
  MatSeries mu(static_cast<size_t>(job.n_max) + 1, MatC::Zero(d, d));
  mu[0] = MatC::Identity(d, d);
  for (int b0 = 0; b0 < d; ++b0) {
    if (job.spec.kind == Lattice2D::square) {
      if (real_coin)
        square_trajectory<true>(job, b0, cr.data(), ci.data(), mu);
      else
        square_trajectory<false>(job, b0, cr.data(), ci.data(), mu);
    } else {
      if (real_coin)
        hex_trajectory<true>(job, b0, cr.data(), ci.data(), mu);
      else
        hex_trajectory<false>(job, b0, cr.data(), ci.data(), mu);
    }
  }
  return mu;
}

RSpectrum r_eigenvalues(const Walk2DJob& job, double pair_tol) {
  MatSeries mu = origin_mu_sequence(job);
  MatSeries a = amplitudes_from_mu(mu);
  RSpectrum out;
  out.r = return_probability(a, job.tail);
  out.eigenvalues = return_probability_eigenvalues(out.r);
  for (size_t k = 0; k + 1 < out.eigenvalues.size(); ++k)
    if (std::abs(out.eigenvalues[k].value - out.eigenvalues[k + 1].value) <
        pair_tol)
      out.degenerate_pairs.emplace_back(static_cast<int>(k),
                                        static_cast<int>(k + 1));
  return out;
}

SubspaceCurves2D subspace_curves_2d(
    const Walk2DJob& job, const std::vector<MatC>& nested_frames,
    const std::function<VecC(double)>& qubit_path, int num_points) {
  if (num_points < 2) throw InvalidInput("need at least two path points");
  const int d = job.spec.internal_dim();

  for (const MatC& w : nested_frames) {
    if (w.rows() != d || w.cols() < 1 || w.cols() > d)
      throw InvalidInput("frame shape does not match the site dimension");
    if ((MatC(w.adjoint() * w) - MatC::Identity(w.cols(), w.cols()))
            .cwiseAbs()
            .maxCoeff() > 1e-10)
      throw CheckFailed("subspace frame is not orthonormal");
  }
  for (size_t k = 0; k + 1 < nested_frames.size(); ++k) {
    const MatC& small = nested_frames[k];
    const MatC& big = nested_frames[k + 1];
    if (small.cols() > big.cols() ||
        (MatC(big * (big.adjoint() * small)) - small).cwiseAbs().maxCoeff() >
            1e-10)
      throw InvalidInput("subspace frames must be nested");
  }

  MatSeries mu = origin_mu_sequence(job);

  SubspaceCurves2D out;
  out.labels.push_back("state");
  std::vector<MatC> r_ops;  // return operator per fixed frame, then site
  for (const MatC& w : nested_frames) {
    MatSeries mu_w(mu.size());
    for (size_t n = 0; n < mu.size(); ++n) mu_w[n] = w.adjoint() * mu[n] * w;
    r_ops.push_back(return_probability(amplitudes_from_mu(mu_w)).partial);
    out.labels.push_back("dim-" + std::to_string(w.cols()));
  }
  r_ops.push_back(return_probability(amplitudes_from_mu(mu)).partial);
  out.labels.push_back("site");
  out.probability.assign(out.labels.size(), {});

  for (int p = 0; p < num_points; ++p) {
    const double t =
        kPi * static_cast<double>(p) / static_cast<double>(num_points - 1);
    VecC psi = qubit_path(t);
    if (psi.size() != d) throw InvalidInput("path state has wrong dimension");
    if (std::abs(psi.norm() - 1.0) > 1e-9)
      throw InvalidInput("path states must be normalized");
    out.t.push_back(t);

    Coeffs scalar_mu(mu.size());
    for (size_t n = 0; n < mu.size(); ++n)
      scalar_mu[n] = psi.dot(mu[n] * psi);
    out.probability[0].push_back(
        state_recurrence(scalar_mu).return_probability);

    for (size_t k = 0; k < nested_frames.size(); ++k) {
      const MatC& w = nested_frames[k];
      VecC coords = w.adjoint() * psi;
      if ((VecC(w * coords) - psi).norm() > 1e-9)
        throw InvalidInput("path leaves the smallest absorbing subspace");
      out.probability[k + 1].push_back(
          std::real(coords.dot(r_ops[k] * coords)));
    }
    out.probability[out.labels.size() - 1].push_back(
        std::real(psi.dot(r_ops.back() * psi)));
  }
  return out;
}

}  // namespace qrec
