#pragma once
// Core aliases, error categories and small numerics shared by all modules.

#include <complex>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrec {

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Error categories. The CLI maps them onto exit codes: invalid input -> 2,
// resource budget -> 3, failed numeric certification -> 1.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something malformed: bad dimensions, |gamma| >= 1, unknown
// lattice, non-unitary coin, horizon <= 0, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A power of a truncated step was requested beyond the exactness horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

// Estimated allocation exceeds the configured memory budget.
class ResourceBudget : public Error {
 public:
  using Error::Error;
};

// The operation's mathematical precondition failed at run time (truncated
// model where a genuinely finite one is required, boundary loop leaving the
// unit sphere, vanishing boundary values, ...).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

// A certified tolerance was not met (winding residue too large, method
// disagreement, non-contractive amplitude input, ...).
class CheckFailed : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Compensated (Kahan) accumulator: used for every long scalar accumulation so
// results do not depend on summation length via cancellation noise.
// ---------------------------------------------------------------------------
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// ---------------------------------------------------------------------------
// Power-law tail diagnostics. Fits t_n ~ C * n^(-p) on the last decade of the
// nonzero entries (log-log least squares) and bounds the remainder past the
// horizon by the integral estimate C * N^(1-p) / (p-1). Zero entries (exact
// parity zeros of bipartite walks) are skipped. The fit is diagnostic: it is
// reported next to partial sums, never silently added to them.
// ---------------------------------------------------------------------------
struct PowerLawTail {
  bool valid = false;    // enough points and p > 1
  double amplitude = 0;  // C
  double exponent = 0;   // p  (t_n ~ C n^-p)
  double remainder = 0;  // estimated sum over n > horizon (0 when !valid)
};

PowerLawTail fit_power_law_tail(const std::vector<double>& t, int horizon);

// Fitted decay exponent p of t_n ~ C n^{-p} (series indexed from 1; entry
// t[n] is the weight of index n). Returns NaN when fewer than 4 usable
// points. Positive p means decay.
double fit_decay_exponent(const std::vector<double>& t, int lo, int hi);

std::string format_complex(cplx v);

}  // namespace qrec
