#include "qrec/schur.hpp"

#include <algorithm>
#include <cmath>

namespace qrec {

namespace {
constexpr double kUnitCircleTol = 1e-10;

double rho_of(cplx gamma) {
  double g2 = std::norm(gamma);
  if (g2 >= 1.0) throw InvalidInput("|gamma| >= 1 where a contraction is required");
  return std::sqrt(1.0 - g2);
}
}  // namespace

// ---------------------------------------------------------------------------
// SchurParams
// ---------------------------------------------------------------------------

void SchurParams::validate() const {
  for (cplx g : prefix)
    if (std::abs(g) >= 1.0)
      throw InvalidInput("Schur parameter with |gamma| >= 1 before the terminator");
  for (cplx g : cycle)
    if (std::abs(g) >= 1.0)
      throw InvalidInput("cyclic Schur parameter with |gamma| >= 1");
  if (terminator) {
    if (!cycle.empty())
      throw InvalidInput("terminated parameter sequence cannot carry a cycle");
    if (std::abs(std::abs(*terminator) - 1.0) > 1e-12)
      throw InvalidInput("terminator must be unimodular");
  }
}

SchurParams SchurParams::terminated(std::vector<cplx> prefix, cplx zeta) {
  SchurParams p;
  p.prefix = std::move(prefix);
  p.terminator = zeta / std::abs(zeta);
  p.validate();
  return p;
}

SchurParams SchurParams::eventually_periodic(std::vector<cplx> prefix,
                                             std::vector<cplx> cycle) {
  SchurParams p;
  p.prefix = std::move(prefix);
  p.cycle = std::move(cycle);
  p.validate();
  return p;
}

cplx SchurParams::param(long k) const {
  if (k < 0) throw InvalidInput("negative Schur parameter index");
  long n = static_cast<long>(prefix.size());
  if (k < n) return prefix[static_cast<size_t>(k)];
  if (terminator) {
    if (k == n) return *terminator;
    throw InvalidInput("parameter index beyond the terminator");
  }
  if (cycle.empty()) return cplx(0);  // zero tail
  return cycle[static_cast<size_t>((k - n) % static_cast<long>(cycle.size()))];
}

long SchurParams::length() const {
  if (terminator) return static_cast<long>(prefix.size()) + 1;
  return -1;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {
// One backward sweep seeded with `seed` at level `depth`.
cplx eval_backward(const SchurParams& p, cplx z, long depth, cplx seed) {
  cplx f = seed;
  for (long k = depth - 1; k >= 0; --k) {
    cplx g = p.param(k);
    cplx zf = z * f;
    f = (g + zf) / (cplx(1) + std::conj(g) * zf);
  }
  return f;
}
}  // namespace

cplx eval_schur(const SchurParams& p, cplx z, const EvalOptions& opt) {
  if (p.rational_inner()) {
    // The continued fraction closes exactly; valid on the closed disk.
    return eval_backward(p, z, p.free_count(), *p.terminator);
  }
  if (std::abs(z) >= 1.0)
    throw NotApplicable(
        "boundary evaluation of a non-terminated Schur function; use Taylor sections");
  long depth = 32;
  cplx prev = eval_backward(p, z, depth, cplx(0));
  while (depth < opt.max_depth) {
    depth *= 2;
    cplx next = eval_backward(p, z, depth, cplx(0));
    if (std::abs(next - prev) < opt.tol) return next;
    prev = next;
  }
  return prev;
}

namespace {
// -- transfer-matrix route to Taylor sections -------------------------------
// One continued-fraction level T_g(w) = (g + z w)/(1 + conj(g) z w) acts on
// the tail function as the projective matrix [[z, g], [conj(g) z, 1]];
// composing levels multiplies the matrices.  Tracking the four polynomial
// entries turns the whole parameter sequence into a single division, which
// keeps high-order sections affordable.

Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
  Coeffs c(a.size() + b.size() - 1, cplx(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx(0)) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Coeffs poly_add(const Coeffs& a, const Coeffs& b) {
  Coeffs c(std::max(a.size(), b.size()), cplx(0));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

struct Mobius {
  Coeffs m11, m12, m21, m22;  // f -> (m11 f + m12) / (m21 f + m22)
};

Mobius mobius_mul(const Mobius& a, const Mobius& b) {
  return {poly_add(poly_mul(a.m11, b.m11), poly_mul(a.m12, b.m21)),
          poly_add(poly_mul(a.m11, b.m12), poly_mul(a.m12, b.m22)),
          poly_add(poly_mul(a.m21, b.m11), poly_mul(a.m22, b.m21)),
          poly_add(poly_mul(a.m21, b.m12), poly_mul(a.m22, b.m22))};
}

Mobius transfer(const std::vector<cplx>& gs) {
  Mobius m{{cplx(1)}, {cplx(0)}, {cplx(0)}, {cplx(1)}};
  for (cplx g : gs) {
    Mobius level{{cplx(0), cplx(1)}, {g}, {cplx(0), std::conj(g)}, {cplx(1)}};
    m = mobius_mul(m, level);
  }
  return m;
}

// num / den truncated at order n_max; den[0] must be nonzero.  Costs
// O(len(den) * n_max), so polynomial denominators stay linear in the order.
Coeffs truncated_div(const Coeffs& num, const Coeffs& den, int n_max) {
  Coeffs c(static_cast<size_t>(n_max) + 1, cplx(0));
  for (size_t n = 0; n < c.size(); ++n) {
    cplx acc = n < num.size() ? num[n] : cplx(0);
    size_t m_hi = std::min(n, den.size() - 1);
    for (size_t m = 1; m <= m_hi; ++m) acc -= den[m] * c[n - m];
    c[n] = acc / den[0];
  }
  return c;
}

// Taylor section of the periodic-tail fixed point: with M the transfer
// matrix of one cycle, h solves m21 h^2 + (m22 - m11) h - m12 = 0.  Since
// m21(0) = m11(0) = 0 and m22(0) = 1, the branch analytic at z = 0 is unique
// (the other root has a pole), so the coefficient recursion needs no branch
// choice.
Coeffs cycle_fixed_point(const Mobius& m, int n_max) {
  Coeffs qa = m.m21;
  Coeffs qb = poly_add(m.m22, series_scale(cplx(-1), m.m11));
  const size_t n1 = static_cast<size_t>(n_max) + 1;
  Coeffs h(n1, cplx(0)), sq(n1, cplx(0));
  for (size_t n = 0; n < n1; ++n) {
    cplx acc = n < m.m12.size() ? m.m12[n] : cplx(0);
    for (size_t k = 1; k <= std::min(n, qb.size() - 1); ++k)
      acc -= qb[k] * h[n - k];
    for (size_t k = 1; k <= std::min(n, qa.size() - 1); ++k)
      acc -= qa[k] * sq[n - k];
    h[n] = acc / qb[0];
    cplx s(0);
    for (size_t i = 0; i <= n; ++i) s += h[i] * h[n - i];
    sq[n] = s;
  }
  return h;
}

// poly * series truncated to length n1.
Coeffs poly_series(const Coeffs& poly, const Coeffs& s, size_t n1) {
  Coeffs out(n1, cplx(0));
  for (size_t i = 0; i < poly.size() && i < n1; ++i) {
    if (poly[i] == cplx(0)) continue;
    for (size_t j = 0; i + j < n1 && j < s.size(); ++j)
      out[i + j] += poly[i] * s[j];
  }
  return out;
}
}  // namespace

Coeffs taylor_coeffs(const SchurParams& p, int n_max) {
  if (n_max < 0) throw InvalidInput("taylor order must be >= 0");
  const size_t n1 = static_cast<size_t>(n_max) + 1;
  if (p.terminator && p.free_count() <= n_max + 1) {
    // Rational inner: the whole sequence closes on the unimodular constant.
    Mobius m = transfer(p.prefix);
    Coeffs num = poly_add(series_scale(*p.terminator, m.m11), m.m12);
    Coeffs den = poly_add(series_scale(*p.terminator, m.m21), m.m22);
    return truncated_div(num, den, n_max);
  }
  if (!p.terminator && !p.cycle.empty() && p.prefix.size() < n1 &&
      p.cycle.size() <= n1) {
    Mobius m = transfer(p.prefix);
    Coeffs h = cycle_fixed_point(transfer(p.cycle), n_max);
    Coeffs num = poly_add(poly_series(m.m11, h, n1), m.m12);
    Coeffs den = poly_add(poly_series(m.m21, h, n1), m.m22);
    num.resize(n1, cplx(0));
    den.resize(n1, cplx(0));
    return truncated_div(num, den, n_max);
  }
  // Zero tail, or structure reaching past the section: level k first
  // contributes at order z^k, so parameters beyond n_max may be dropped.
  const bool zero_tail = !p.terminator && p.cycle.empty();
  const size_t limit = zero_tail ? std::min(n1, p.prefix.size()) : n1;
  std::vector<cplx> visible;
  visible.reserve(limit);
  for (size_t k = 0; k < limit; ++k)
    visible.push_back(p.param(static_cast<long>(k)));
  Mobius m = transfer(visible);
  return truncated_div(m.m12, m.m22, n_max);
}

SchurAlgorithmResult schur_params_from_taylor(const Coeffs& taylor, int k_max) {
  SchurAlgorithmResult out;
  Coeffs c = taylor;
  long limit = (k_max < 0) ? static_cast<long>(taylor.size())
                           : static_cast<long>(k_max);
  while (static_cast<long>(out.params.prefix.size()) < limit && !c.empty()) {
    cplx g = c[0];
    if (std::abs(g) >= 1.0 - kUnitCircleTol) {
      out.params.terminator = g / std::abs(g);
      out.hit_unit_circle = true;
      break;
    }
    out.params.prefix.push_back(g);
    if (c.size() == 1) break;
    // f_{k+1} = (1/z) (f_k - gamma) / (1 - conj(gamma) f_k)
    Coeffs num = c;
    num[0] -= g;
    Coeffs den = series_scale(-std::conj(g), c);
    den[0] += cplx(1);
    Coeffs quot = series_mul(num, series_inv(den));
    quot[0] = cplx(0);  // exact zero by construction
    c = series_shift_down(quot);
  }
  out.extracted = static_cast<int>(out.params.prefix.size());
  return out;
}

// ---------------------------------------------------------------------------
// Iterates
// ---------------------------------------------------------------------------

SchurParams iterate(const SchurParams& p, long k) {
  if (k < 0) throw InvalidInput("iterate index must be >= 0");
  long n = static_cast<long>(p.prefix.size());
  SchurParams out;
  if (p.terminator) {
    if (k > n) throw InvalidInput("iterate index beyond the terminator");
    out.prefix.assign(p.prefix.begin() + k, p.prefix.end());
    out.terminator = p.terminator;
    return out;
  }
  if (k <= n) {
    out.prefix.assign(p.prefix.begin() + k, p.prefix.end());
    out.cycle = p.cycle;
    return out;
  }
  if (p.cycle.empty()) return out;  // zero tail stays a zero tail
  long d = (k - n) % static_cast<long>(p.cycle.size());
  out.cycle.assign(p.cycle.begin() + d, p.cycle.end());
  out.cycle.insert(out.cycle.end(), p.cycle.begin(), p.cycle.begin() + d);
  return out;
}

SchurParams inverse_iterate(const SchurParams& p, long k) {
  if (k < -1) throw InvalidInput("inverse iterate index must be >= -1");
  if (k == -1) return SchurParams::terminated({}, cplx(1));  // f^{-1} == 1
  if (p.terminator && k >= p.free_count())
    throw InvalidInput("inverse iterate index must precede the terminator");
  std::vector<cplx> rev(static_cast<size_t>(k) + 1);
  for (long j = 0; j <= k; ++j)
    rev[static_cast<size_t>(j)] = -std::conj(p.param(k - j));
  return SchurParams::terminated(std::move(rev), cplx(1));
}

// ---------------------------------------------------------------------------
// Caratheodory transforms
// ---------------------------------------------------------------------------

cplx caratheodory_from_schur(cplx f, cplx z) {
  cplx w = z * f;
  return (cplx(1) + w) / (cplx(1) - w);
}

cplx schur_from_caratheodory(cplx F, cplx z) {
  if (z == cplx(0))
    throw InvalidInput("inverse Caratheodory transform is singular at z = 0");
  return (F - cplx(1)) / (z * (F + cplx(1)));
}

Coeffs caratheodory_series_from_schur(const Coeffs& f) {
  Coeffs zf = series_shift_up(f);
  Coeffs num = zf;
  num[0] += cplx(1);
  Coeffs den = series_scale(cplx(-1), zf);
  den[0] += cplx(1);
  return series_mul(num, series_inv(den));
}

Coeffs schur_series_from_caratheodory(const Coeffs& F) {
  if (F.empty() || std::abs(F[0] - cplx(1)) > 1e-9)
    throw InvalidInput("Caratheodory series must have F(0) = 1");
  Coeffs num = F;
  num[0] -= cplx(1);
  num[0] = cplx(0);
  Coeffs shifted = series_shift_down(num);  // one order shorter
  Coeffs den = F;
  den[0] += cplx(1);
  Coeffs deninv = series_inv(den);
  deninv.resize(shifted.size());
  return series_mul(shifted, deninv);
}

MatSeries caratheodory_series_from_schur(const MatSeries& f) {
  const auto d = f.at(0).rows();
  MatSeries zf = mat_series_shift_up(f);
  MatSeries plus = zf;
  plus[0] += MatC::Identity(d, d);
  MatSeries minus = zf;
  for (auto& m : minus) m = -m;
  minus[0] = MatC::Identity(d, d);  // zf has no constant term
  return mat_series_mul(mat_series_inv(minus), plus);
}

MatSeries schur_series_from_caratheodory(const MatSeries& F) {
  const auto d = F.at(0).rows();
  if ((F[0] - MatC::Identity(d, d)).norm() > 1e-9)
    throw InvalidInput("Caratheodory series must have F(0) = I");
  MatSeries num = F;
  num[0] = MatC::Zero(d, d);
  MatSeries shifted = mat_series_shift_down(num);
  MatSeries den = F;
  den[0] += MatC::Identity(d, d);
  MatSeries deninv = mat_series_inv(den);
  deninv.resize(shifted.size());
  return mat_series_mul(shifted, deninv);
}

// ---------------------------------------------------------------------------
// Szego polynomials
// ---------------------------------------------------------------------------

SzegoSystem szego_polynomials(const SchurParams& p, int k_max) {
  if (k_max < 0) throw InvalidInput("polynomial index must be >= 0");
  if (p.terminator && k_max > p.free_count())
    throw InvalidInput(
        "Szego recurrence defined up to the last free parameter only");
  SzegoSystem sys;
  auto step = [&](std::vector<Coeffs>& a, std::vector<Coeffs>& a_star,
                  bool second_kind) {
    a.assign(1, series_const(cplx(1), k_max));
    a_star.assign(1, series_const(cplx(1), k_max));
    for (int k = 0; k < k_max; ++k) {
      cplx g = p.param(k);
      if (second_kind) g = -g;
      double rho = rho_of(g);
      Coeffs za = series_shift_up(a.back());
      Coeffs next = series_scale(cplx(1.0 / rho, 0),
                                 series_sub(za, series_scale(std::conj(g),
                                                             a_star.back())));
      Coeffs next_star = series_scale(
          cplx(1.0 / rho, 0),
          series_sub(a_star.back(), series_scale(g, za)));
      a.push_back(std::move(next));
      a_star.push_back(std::move(next_star));
    }
  };
  step(sys.phi, sys.phi_star, false);
  step(sys.omega, sys.omega_star, true);
  return sys;
}

// ---------------------------------------------------------------------------
// Khrushchev formulas
// ---------------------------------------------------------------------------

KhrushchevValues khrushchev_Fk(const SchurParams& p, long k, cplx z,
                               const EvalOptions& opt) {
  if (k < 0) throw InvalidInput("Khrushchev index must be >= 0");
  cplx f_k = eval_schur(iterate(p, k), z, opt);
  cplx f_k1 = eval_schur(iterate(p, k + 1), z, opt);
  cplx f_up_km1 = eval_schur(inverse_iterate(p, k - 1), z, opt);
  cplx f_up_k = eval_schur(inverse_iterate(p, k), z, opt);
  cplx g = p.param(k);
  double rho = rho_of(g);

  KhrushchevValues out;
  cplx w = z * f_up_km1 * f_k;
  out.F_k = (cplx(1) + w) / (cplx(1) - w);
  cplx den = (cplx(1) - g * z * f_up_km1) * (cplx(1) - z * f_up_k * f_k1);
  out.G_k = 2.0 * rho * z * f_up_km1 / den;
  out.G_tilde_k = 2.0 * rho * z * f_k1 / den;
  return out;
}

// ---------------------------------------------------------------------------
// Norms / windings / tau_r
// ---------------------------------------------------------------------------

NormSq l2_norm_sq(const Coeffs& c) {
  NormSq out;
  KahanSum sum;
  std::vector<double> weights(c.size(), 0.0);
  for (size_t n = 0; n < c.size(); ++n) {
    double w = std::norm(c[n]);
    weights[n] = w;
    sum.add(w);
  }
  out.partial = sum.value();
  out.tail = fit_power_law_tail(weights, static_cast<int>(c.size()) - 1);
  out.interval = {out.partial,
                  out.partial + (out.tail.valid ? out.tail.remainder
                                                : std::numeric_limits<double>::infinity())};
  return out;
}

NormSq l2_norm_sq(const SchurParams& p, int order) {
  if (p.rational_inner()) {
    NormSq out;
    out.partial = 1.0;
    out.interval = {1.0, 1.0};
    out.tail.valid = true;
    out.tail.remainder = 0.0;
    out.tail.exponent = std::numeric_limits<double>::infinity();
    return out;
  }
  return l2_norm_sq(taylor_coeffs(p, order));
}

WindingResult winding_number(const std::function<cplx(double)>& boundary,
                             int initial_grid, int max_grid) {
  int M = std::max(initial_grid, 8);
  for (;; M *= 2) {
    std::vector<cplx> w(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j) {
      w[static_cast<size_t>(j)] = boundary(2.0 * kPi * j / M);
      if (std::abs(w[static_cast<size_t>(j)]) < 1e-8)
        throw NotApplicable("winding number of a boundary function with a near-zero");
    }
    KahanSum total;
    bool fine = true;
    for (int j = 0; j < M; ++j) {
      cplx ratio = w[static_cast<size_t>((j + 1) % M)] / w[static_cast<size_t>(j)];
      double d = std::arg(ratio);
      if (std::abs(d) >= kPi / 2) {
        fine = false;
        break;
      }
      total.add(d);
    }
    if (fine) {
      double t = total.value() / (2.0 * kPi);
      WindingResult out;
      out.winding = std::llround(t);
      out.residue = std::abs(t - static_cast<double>(out.winding));
      out.grid = M;
      return out;
    }
    if (M >= max_grid)
      throw NotApplicable("winding number grid refinement exceeded its cap");
  }
}

double tau_r(const Coeffs& c, double r) {
  if (!(r >= 0.0 && r < 1.0))
    throw InvalidInput("tau_r requires 0 <= r < 1");
  KahanSum sum;
  double r2 = r * r;
  double rpow = 1.0;
  for (size_t n = 1; n < c.size(); ++n) {
    rpow *= r2;
    sum.add(static_cast<double>(n) * std::norm(c[n]) * rpow);
  }
  return sum.value();
}

}  // namespace qrec
