#pragma once
// Truncated power-series arithmetic (scalar and square-matrix coefficients).
//
// Convention: a series of order N is a vector of N+1 coefficients, c[k] being
// the coefficient of z^k. Binary operations require equal sizes; everything
// is truncated at the common order. shift_up multiplies by z (drops the top
// coefficient), shift_down divides by z (the constant term must vanish; the
// result has one order less and is one entry shorter).

#include <vector>

#include "qrec/types.hpp"

namespace qrec {

using Coeffs = std::vector<cplx>;
using MatSeries = std::vector<MatC>;

Coeffs series_const(cplx c0, int order);
Coeffs series_add(const Coeffs& a, const Coeffs& b);
Coeffs series_sub(const Coeffs& a, const Coeffs& b);
Coeffs series_scale(cplx s, const Coeffs& a);
Coeffs series_mul(const Coeffs& a, const Coeffs& b);
Coeffs series_inv(const Coeffs& a);  // a[0] != 0
Coeffs series_div(const Coeffs& a, const Coeffs& b);
Coeffs series_shift_up(const Coeffs& a);
Coeffs series_shift_down(const Coeffs& a, double tol = 1e-9);
cplx series_eval(const Coeffs& a, cplx z);

MatSeries mat_series_const(const MatC& m0, int order);
MatSeries mat_series_add(const MatSeries& a, const MatSeries& b);
MatSeries mat_series_sub(const MatSeries& a, const MatSeries& b);
MatSeries mat_series_mul(const MatSeries& a, const MatSeries& b);
MatSeries mat_series_inv(const MatSeries& a);  // a[0] invertible
MatSeries mat_series_shift_up(const MatSeries& a);
MatSeries mat_series_shift_down(const MatSeries& a, double tol = 1e-9);
MatC mat_series_eval(const MatSeries& a, cplx z);

// Scalar contraction <psi| A(z) |psi> of a matrix series.
Coeffs mat_series_contract(const MatSeries& a, const VecC& psi);

}  // namespace qrec
