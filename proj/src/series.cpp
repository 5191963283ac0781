#include "qrec/series.hpp"

#include <algorithm>
#include <cstdio>

namespace qrec {

namespace {
void require_same_size(const Coeffs& a, const Coeffs& b) {
  if (a.size() != b.size())
    throw InvalidInput("series arithmetic requires equal truncation orders");
}
void require_nonempty(const Coeffs& a) {
  if (a.empty()) throw InvalidInput("empty series");
}
}  // namespace

Coeffs series_const(cplx c0, int order) {
  if (order < 0) throw InvalidInput("series order must be >= 0");
  Coeffs c(static_cast<size_t>(order) + 1, cplx(0));
  c[0] = c0;
  return c;
}

Coeffs series_add(const Coeffs& a, const Coeffs& b) {
  require_same_size(a, b);
  Coeffs c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
  return c;
}

Coeffs series_sub(const Coeffs& a, const Coeffs& b) {
  require_same_size(a, b);
  Coeffs c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = a[k] - b[k];
  return c;
}

Coeffs series_scale(cplx s, const Coeffs& a) {
  Coeffs c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = s * a[k];
  return c;
}

Coeffs series_mul(const Coeffs& a, const Coeffs& b) {
  require_same_size(a, b);
  Coeffs c(a.size(), cplx(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx(0)) continue;
    for (size_t j = 0; i + j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Coeffs series_inv(const Coeffs& a) {
  require_nonempty(a);
  if (std::abs(a[0]) == 0.0)
    throw InvalidInput("series inversion needs a nonzero constant term");
  Coeffs b(a.size(), cplx(0));
  b[0] = cplx(1) / a[0];
  for (size_t k = 1; k < a.size(); ++k) {
    cplx acc(0);
    for (size_t j = 1; j <= k; ++j) acc += a[j] * b[k - j];
    b[k] = -acc / a[0];
  }
  return b;
}

Coeffs series_div(const Coeffs& a, const Coeffs& b) {
  return series_mul(a, series_inv(b));
}

Coeffs series_shift_up(const Coeffs& a) {
  require_nonempty(a);
  Coeffs c(a.size(), cplx(0));
  for (size_t k = 1; k < a.size(); ++k) c[k] = a[k - 1];
  return c;
}

Coeffs series_shift_down(const Coeffs& a, double tol) {
  require_nonempty(a);
  if (std::abs(a[0]) > tol)
    throw InvalidInput("series division by z needs a vanishing constant term");
  return Coeffs(a.begin() + 1, a.end());
}

cplx series_eval(const Coeffs& a, cplx z) {
  cplx v(0);
  for (size_t k = a.size(); k-- > 0;) v = v * z + a[k];
  return v;
}

namespace {
void require_same_shape(const MatSeries& a, const MatSeries& b) {
  if (a.size() != b.size() || a.empty() || b.empty() ||
      a[0].rows() != b[0].rows() || a[0].cols() != b[0].cols())
    throw InvalidInput("matrix series arithmetic requires matching shapes");
}
}  // namespace

MatSeries mat_series_const(const MatC& m0, int order) {
  if (order < 0) throw InvalidInput("series order must be >= 0");
  MatSeries c(static_cast<size_t>(order) + 1,
              MatC::Zero(m0.rows(), m0.cols()));
  c[0] = m0;
  return c;
}

MatSeries mat_series_add(const MatSeries& a, const MatSeries& b) {
  require_same_shape(a, b);
  MatSeries c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b[k];
  return c;
}

MatSeries mat_series_sub(const MatSeries& a, const MatSeries& b) {
  require_same_shape(a, b);
  MatSeries c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = a[k] - b[k];
  return c;
}

MatSeries mat_series_mul(const MatSeries& a, const MatSeries& b) {
  require_same_shape(a, b);
  MatSeries c(a.size(), MatC::Zero(a[0].rows(), b[0].cols()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; i + j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

MatSeries mat_series_inv(const MatSeries& a) {
  if (a.empty()) throw InvalidInput("empty series");
  const auto dim = a[0].rows();
  if (a[0].cols() != dim) throw InvalidInput("matrix series must be square");
  Eigen::FullPivLU<MatC> lu(a[0]);
  if (!lu.isInvertible())
    throw InvalidInput("matrix series inversion needs invertible constant term");
  MatSeries b(a.size(), MatC::Zero(dim, dim));
  b[0] = lu.inverse();
  for (size_t k = 1; k < a.size(); ++k) {
    MatC acc = MatC::Zero(dim, dim);
    for (size_t j = 1; j <= k; ++j) acc += a[j] * b[k - j];
    b[k] = -b[0] * acc;
  }
  return b;
}

MatSeries mat_series_shift_up(const MatSeries& a) {
  if (a.empty()) throw InvalidInput("empty series");
  MatSeries c(a.size(), MatC::Zero(a[0].rows(), a[0].cols()));
  for (size_t k = 1; k < a.size(); ++k) c[k] = a[k - 1];
  return c;
}

MatSeries mat_series_shift_down(const MatSeries& a, double tol) {
  if (a.empty()) throw InvalidInput("empty series");
  if (a[0].norm() > tol)
    throw InvalidInput("series division by z needs a vanishing constant term");
  return MatSeries(a.begin() + 1, a.end());
}

MatC mat_series_eval(const MatSeries& a, cplx z) {
  if (a.empty()) throw InvalidInput("empty series");
  MatC v = MatC::Zero(a[0].rows(), a[0].cols());
  for (size_t k = a.size(); k-- > 0;) v = (v * z + a[k]).eval();
  return v;
}

Coeffs mat_series_contract(const MatSeries& a, const VecC& psi) {
  if (a.empty()) throw InvalidInput("empty series");
  if (a[0].rows() != psi.size() || a[0].cols() != psi.size())
    throw InvalidInput("contraction vector does not match series dimension");
  Coeffs c(a.size());
  for (size_t k = 0; k < a.size(); ++k) c[k] = psi.dot(a[k] * psi);
  return c;
}

// ---------------------------------------------------------------------------
// Tail diagnostics (declared in types.hpp).
// ---------------------------------------------------------------------------

double fit_decay_exponent(const std::vector<double>& t, int lo, int hi) {
  lo = std::max(lo, 1);
  hi = std::min<int>(hi, static_cast<int>(t.size()) - 1);
  // Least squares on log t_n = log C - p log n over nonzero entries.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int n = lo; n <= hi; ++n) {
    if (t[static_cast<size_t>(n)] <= 0.0) continue;
    double x = std::log(static_cast<double>(n));
    double y = std::log(t[static_cast<size_t>(n)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 4) return std::numeric_limits<double>::quiet_NaN();
  double denom = m * sxx - sx * sx;
  if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  // Slope of the log-log fit is -p; report the decay exponent p itself.
  return -(m * sxy - sx * sy) / denom;
}

PowerLawTail fit_power_law_tail(const std::vector<double>& t, int horizon) {
  PowerLawTail fit;
  if (horizon < 8 || static_cast<size_t>(horizon) >= t.size() + 1) {
    horizon = static_cast<int>(t.size()) - 1;
  }
  if (horizon < 8) return fit;
  int lo = std::max(1, horizon / 10);
  double p = fit_decay_exponent(t, lo, horizon);
  if (!std::isfinite(p)) return fit;
  // Recover C from the fit restricted to the same window.
  double sx = 0, sy = 0;
  int m = 0;
  for (int n = lo; n <= horizon; ++n) {
    if (t[static_cast<size_t>(n)] <= 0.0) continue;
    sx += std::log(static_cast<double>(n));
    sy += std::log(t[static_cast<size_t>(n)]);
    ++m;
  }
  if (m < 4) return fit;
  double logC = (sy + p * sx) / m;
  fit.amplitude = std::exp(logC);
  fit.exponent = p;
  if (p > 1.0 + 1e-6) {
    fit.valid = true;
    fit.remainder =
        fit.amplitude * std::pow(static_cast<double>(horizon), 1.0 - p) /
        (p - 1.0);
  }
  return fit;
}

std::string format_complex(cplx v) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
  return std::string(buf);
}

}  // namespace qrec
