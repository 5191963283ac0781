#include "qrec/site1d.hpp"

#include <cmath>
#include <limits>

namespace qrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_inside_disk(cplx g, const char* what) {
  if (std::abs(g) >= 1.0)
    throw InvalidInput(std::string(what) +
                       " coin parameter must lie strictly inside the unit disk");
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter sequences of one site.
// ---------------------------------------------------------------------------

SiteSchur site_schur(const CoinSpec1D& spec, int x) {
  SiteSchur s;
  s.gamma = spec.gamma(x);  // validates the site index and |gamma| < 1
  s.rho = std::sqrt(1.0 - std::norm(s.gamma));

  // Right function: parameters (0, g_{x+1}, 0, g_{x+2}, ...).
  if (spec.kind == Lattice1D::finite) {
    std::vector<cplx> pre;
    for (int j = x + 1; j < spec.num_sites; ++j) {
      pre.push_back(cplx(0));
      pre.push_back(spec.gamma(j));
    }
    s.right = SchurParams::terminated(std::move(pre), cplx(1));
    s.right_degree = s.right.free_count();
  } else {
    require_inside_disk(spec.default_gamma, "default");
    int hi = x;
    if (!spec.window.empty()) hi = std::max(hi, spec.window.rbegin()->first);
    std::vector<cplx> pre;
    for (int j = x + 1; j <= hi; ++j) {
      pre.push_back(cplx(0));
      pre.push_back(spec.gamma(j));
    }
    if (spec.default_gamma == cplx(0)) {
      s.right.prefix = std::move(pre);  // zero tail
    } else {
      s.right = SchurParams::eventually_periodic(
          std::move(pre), {cplx(0), spec.default_gamma});
    }
  }

  // Left function: parameters (0, -conj(g_{x-1}), 0, -conj(g_{x-2}), ...).
  if (spec.kind == Lattice1D::half_line || spec.kind == Lattice1D::finite) {
    std::vector<cplx> pre;
    for (int j = x - 1; j >= 0; --j) {
      pre.push_back(cplx(0));
      pre.push_back(-std::conj(spec.gamma(j)));
    }
    s.left = SchurParams::terminated(std::move(pre), cplx(1));
    s.left_degree = s.left.free_count();
  } else {
    require_inside_disk(spec.default_gamma, "default");
    int lo = x;
    if (!spec.window.empty()) lo = std::min(lo, spec.window.begin()->first);
    std::vector<cplx> pre;
    for (int j = x - 1; j >= lo; --j) {
      pre.push_back(cplx(0));
      pre.push_back(-std::conj(spec.gamma(j)));
    }
    if (spec.default_gamma == cplx(0)) {
      s.left.prefix = std::move(pre);  // zero tail
    } else {
      s.left = SchurParams::eventually_periodic(
          std::move(pre), {cplx(0), -std::conj(spec.default_gamma)});
    }
  }

  s.left.validate();
  s.right.validate();
  return s;
}

SiteQubits site_qubits(cplx gamma) {
  require_inside_disk(gamma, "site");
  double rho = std::sqrt(1.0 - std::norm(gamma));
  SiteQubits q;
  q.left << gamma, rho;
  q.right << rho, -std::conj(gamma);
  q.proj_left = q.left * q.left.adjoint();
  q.proj_right = q.right * q.right.adjoint();
  return q;
}

// ---------------------------------------------------------------------------
// Pointwise values, Taylor coefficients, first-return generating function.
// ---------------------------------------------------------------------------

Mat2 site_schur_matrix(const SiteSchur& s, cplx z) {
  cplx l = eval_schur(s.left, z);
  cplx r = eval_schur(s.right, z);
  Mat2 f;
  f << s.gamma * l, s.rho * r, s.rho * l, -std::conj(s.gamma) * r;
  return f;
}

MatSeries site_schur_taylor(const SiteSchur& s, int n_max) {
  Coeffs l = taylor_coeffs(s.left, n_max);
  Coeffs r = taylor_coeffs(s.right, n_max);
  MatSeries f(static_cast<size_t>(n_max) + 1);
  for (size_t m = 0; m < f.size(); ++m) {
    Mat2 fm;
    fm << s.gamma * l[m], s.rho * r[m], s.rho * l[m],
        -std::conj(s.gamma) * r[m];
    f[m] = fm;
  }
  return f;
}

Mat2 site_a_hat(const SiteSchur& s, cplx z) {
  if (std::abs(z) > 1.0 + 1e-12)
    throw InvalidInput("a_hat is defined on the closed unit disk");
  return z * Mat2(site_schur_matrix(s, std::conj(z)).adjoint());
}

// ---------------------------------------------------------------------------
// Return probability matrix.
// ---------------------------------------------------------------------------

SiteReturn site_return_matrix(const SiteSchur& s, int order) {
  SiteReturn out;
  out.left_norm_sq = l2_norm_sq(s.left, order);
  out.right_norm_sq = l2_norm_sq(s.right, order);
  SiteQubits q = site_qubits(s.gamma);
  out.matrix = out.left_norm_sq.partial * q.proj_left +
               out.right_norm_sq.partial * q.proj_right;
  out.average = 0.5 * (out.left_norm_sq.partial + out.right_norm_sq.partial);
  return out;
}

// ---------------------------------------------------------------------------
// Expected return times.
// ---------------------------------------------------------------------------

SiteTau site_tau_matrix(const SiteSchur& s) {
  SiteTau out;
  out.left_tau = s.left_degree >= 0 ? 1.0 + static_cast<double>(s.left_degree)
                                    : kInf;
  out.right_tau = s.right_degree >= 0
                      ? 1.0 + static_cast<double>(s.right_degree)
                      : kInf;
  out.matrix_finite = s.left_degree >= 0 && s.right_degree >= 0;
  out.matrix = Mat2::Zero();
  if (out.matrix_finite) {
    SiteQubits q = site_qubits(s.gamma);
    out.matrix = Mat2::Identity() +
                 static_cast<double>(s.left_degree) * q.proj_left +
                 static_cast<double>(s.right_degree) * q.proj_right;
    out.average = 0.5 * (out.left_tau + out.right_tau);
  } else {
    out.average = kInf;
  }
  return out;
}

SiteTauRadial site_tau_radial(const SiteSchur& s, double r, int order) {
  if (r <= 0.0 || r >= 1.0) throw InvalidInput("radius must be in (0, 1)");
  SiteTauRadial out;
  out.left = tau_r(taylor_coeffs(s.left, order), r);
  out.right = tau_r(taylor_coeffs(s.right, order), r);
  return out;
}

// ---------------------------------------------------------------------------
// Constant coin on the line: closed forms.
// ---------------------------------------------------------------------------

ConstantCoinSite constant_coin_site(cplx gamma, int n_max) {
  if (std::abs(gamma) <= 0.0 || std::abs(gamma) >= 1.0)
    throw InvalidInput(
        "constant-coin closed forms need 0 < |gamma| < 1 (gamma = 0 "
        "decouples the walk into a pure shift)");
  if (n_max < 1) throw InvalidInput("n_max must be >= 1");

  const double g2 = std::norm(gamma);
  const double rho = std::sqrt(1.0 - g2);
  const double c = 1.0 - 2.0 * g2;

  // Legendre polynomials P_k(c) by the three-term recurrence.
  const int k_max = n_max / 2 + 2;
  std::vector<double> P(static_cast<size_t>(k_max) + 1);
  P[0] = 1.0;
  P[1] = c;
  for (int k = 1; k < k_max; ++k)
    P[static_cast<size_t>(k) + 1] =
        ((2.0 * k + 1.0) * c * P[static_cast<size_t>(k)] -
         k * P[static_cast<size_t>(k) - 1]) /
        (k + 1.0);

  ConstantCoinSite out;
  out.right_taylor.assign(static_cast<size_t>(n_max) + 1, cplx(0));
  out.left_taylor.assign(static_cast<size_t>(n_max) + 1, cplx(0));
  out.pair_weight.assign(static_cast<size_t>(n_max) / 2 + 1, 0.0);

  // Scalar weights d_n of the even-step amplitudes; the odd Taylor
  // coefficients are c_{2n+1} = conj(gamma) d_{n+1}, c_1 = conj(gamma).
  for (size_t n = 1; n < out.pair_weight.size(); ++n)
    out.pair_weight[n] =
        (n == 1) ? 1.0
                 : (P[n - 2] - c * P[n - 1]) / (2.0 * g2 * static_cast<double>(n));

  auto weight = [&](size_t pair) {
    if (pair == 1) return 1.0;
    if (pair < out.pair_weight.size()) return out.pair_weight[pair];
    return (P[pair - 2] - c * P[pair - 1]) /
           (2.0 * g2 * static_cast<double>(pair));
  };
  for (long m = 1; m <= n_max; m += 2) {
    cplx cn = std::conj(gamma) * weight(static_cast<size_t>(m + 1) / 2);
    out.right_taylor[static_cast<size_t>(m)] = std::conj(cn);
    out.left_taylor[static_cast<size_t>(m)] = -cn;
  }

  out.upsilon << -g2, -rho * gamma, rho * std::conj(gamma), -g2;

  const double ag = std::abs(gamma);
  out.norm_sq = 2.0 / (kPi * g2) *
                (rho * ag + (1.0 - 2.0 * rho * rho) * std::asin(ag));
  return out;
}

// ---------------------------------------------------------------------------
// State-versus-site curve.
// ---------------------------------------------------------------------------

StateSiteCurve state_site_curve(const SiteSchur& s, int num_points,
                                cplx down_phase, int order) {
  if (num_points < 2) throw InvalidInput("need at least two curve points");
  if (std::abs(std::abs(down_phase) - 1.0) > 1e-12)
    throw InvalidInput("down_phase must be unimodular");

  MatSeries f = site_schur_taylor(s, order);
  MatSeries big_f = caratheodory_series_from_schur(f);
  SiteReturn ret = site_return_matrix(s, order);
  SiteQubits q = site_qubits(s.gamma);

  StateSiteCurve curve;
  for (int i = 0; i < num_points; ++i) {
    double t = kPi * static_cast<double>(i) / (num_points - 1);
    Vec2 qc;
    qc << std::cos(t), down_phase * std::sin(t);

    double site = ret.left_norm_sq.partial * std::norm(q.left.dot(qc)) +
                  ret.right_norm_sq.partial * std::norm(q.right.dot(qc));

    Coeffs big_f_state(big_f.size());
    for (size_t m = 0; m < big_f.size(); ++m)
      big_f_state[m] = (qc.adjoint() * big_f[m] * qc)(0);
    Coeffs f_state = schur_series_from_caratheodory(big_f_state);
    double state = l2_norm_sq(f_state).partial;

    curve.t.push_back(t);
    curve.state_probability.push_back(state);
    curve.site_probability.push_back(site);
  }
  return curve;
}

}  // namespace qrec
