/*
 * special.hpp - special numbers consumed by the trace formulas.
 *
 * Bernoulli numbers (B_1 = -1/2), zeta at non-positive integers, Bernoulli
 * polynomials, factorials, the elementary hyperbolic series as exact
 * rational Laurent data, and exact monomial moments on the unit sphere
 * S^{2n-1} of R^{2n} (always a rational multiple of pi^n).
 */
#pragma once

#include "heisen/laurent.hpp"
#include "heisen/poly.hpp"
#include "heisen/radial.hpp"

namespace heisen {

Rat factorial(int k);
Rat binomial(int n, int k);
Rat bernoulli(int k);
Rat zeta_neg(int k);
Rat bernoulli_poly(int k, const Rat& x);

// Value = coef * pi^pipow.
struct PiMultiple {
  CRat coef;
  int pipow = 0;
  cplx value() const;
};

// Moment of x^alpha over S^{2n-1} divided by pi^n; zero for odd alpha.
Rat sphere_moment_over_pi_n(const Mono& alpha, int n);
PiMultiple sphere_integral_exact(const PolyC& p);
cplx sphere_integral(const PolyD& p);
PiMultiple sphere_integral_exact(const RadialRatC& a);
cplx sphere_integral(const RadialRatD& a);

// Power series (lead 0) through t^order with rational coefficients.
LaurentC series_sinh_over_t(int order);
LaurentC series_cosh(int order);
LaurentC series_tanh(int order);

}  // namespace heisen
