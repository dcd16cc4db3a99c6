/*
 * rtrace.hpp - residue trace, regularized trace via the heat route, and the
 * trace tau on paired symbols.
 *
 * Tr Op(a) = (2pi)^{-n} int a dx dxi and e^{-tH} has symbol
 * h_t = cosh^{-n}(t) exp(-Q tanh t), so the heat trace of a is
 * theta(t) = (2pi)^{-n} int a h_t. For a homogeneous polynomial P_d with
 * D = n + d/2 and S = int_{S^{2n-1}} P_d,
 *   polynomial   theta = (2pi)^{-n} S Gamma(D)/2 sinh^{-D} t cosh^{D-n} t
 *   P_d e^{-lQ}  theta = (2pi)^{-n} S Gamma(D)/2 cosh^{-n} t (l + tanh t)^{-D}
 *   P_d F^{(k)}  theta = (2pi)^{-n} S Gamma(D)/2 cosh^{-n} t I(tanh t),
 *                I(s) = int_0^1 W(u) (u + s)^{-D} du,  W(u) = (-u)^k w(u).
 * I(s) is expanded at s = 0 by splitting W into its Taylor polynomial of
 * degree J-1, whose integrals are elementary (powers of s, log s and
 * rational series), and a remainder of order u^J whose s-Taylor coefficients
 * are one-dimensional integrals. The result is theta = L0(t) + L1(t) log t;
 * TRh is the t^0 coefficient of L0 and the t^0 coefficient of L1 equals Res.
 */
#pragma once

#include <optional>
#include <string>

#include "heisen/fock.hpp"
#include "heisen/paired.hpp"
#include "heisen/special.hpp"

namespace heisen {

enum class TraceRoute { HeatClosedForm, NumericR, FockTrace };
const char* trace_route_name(TraceRoute r);

struct TraceReport {
  cplx value = 0.0;
  TraceRoute route = TraceRoute::HeatClosedForm;
  cplx residual_log_coeff = 0.0;
  double error_estimate = 0.0;
  std::optional<CRat> exact;  // set when the route is exact rational
  // remainder least-squares diagnostic (resolvent classes only)
  std::optional<cplx> fit_constant;
  double fit_condition = 0.0;
};

struct HeatTrace {
  LaurentD regular;   // L0
  LaurentD log_part;  // L1, coefficient series of log t
  bool exact = false;
  LaurentC regular_exact;  // valid when exact
};

// Res a = -1/(2 (2pi)^n) int_{S^{2n-1}} a_{-2n}.
CRat res_exact(const PhgExpansion<CRat>& a);
cplx res(const PhgExpansion<CRat>& a);

// Exact heat trace for polynomial and Gaussian parts, through t^order.
LaurentC heat_trace_exact(const SymbolC& a, int order = kDefaultLaurentMargin);
HeatTrace heat_trace(const SymbolC& a, int order = kDefaultLaurentMargin);

// Constant term of the heat trace. Strict mode rejects Res != 0.
TraceReport trh(const SymbolC& a, bool strict = true);

// Least-squares fit of the numerically integrated remainder (closure minus
// the expansion terms of degree > -2n, traced against h_t) at 8 log-spaced
// t in [0.05, 0.8]. Returns the fitted constant and the condition number.
std::pair<cplx, double> remainder_fit(const SymbolC& a);

// The combined symbol w+ - (-1)^n w- (A convention) of a pair.
SymbolC tau_combined(const PairedSymbol<CRat>& s);

TraceReport tau(const PairedSymbol<CRat>& s, bool with_fit = false);
// (2pi)^{-n} int R(sigma), R = combined symbol minus its terms of degree > -2n.
TraceReport tau_numeric(const PairedSymbol<CRat>& s);
// Schwartz pairs only: Tr+ + (-1)^{n+1} Tr- on a Fock basis, doubling the
// cutoff until stable.
TraceReport tau_fock(const PairedSymbol<CRat>& s, int cutoff = 0);

// Trace of a Gaussian-class symbol on a truncated Fock basis (adaptive).
cplx fock_trace(const SymbolC& a, int cutoff = 0);

}  // namespace heisen
