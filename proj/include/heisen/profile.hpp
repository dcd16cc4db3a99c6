/*
 * profile.hpp - the resolvent radial profile F_gamma and its derivatives.
 *
 * F_gamma(Q) is the Weyl symbol of (H - gamma)^{-1}, H the harmonic
 * oscillator with spectrum 2N + n. Subordination to the Mehler kernel with
 * u = tanh t gives
 *
 *   F_gamma^{(k)}(Q) = int_0^1 (-u)^k w(u) e^{-Qu} du,
 *   w(u) = (1+u)^{(gamma+n)/2 - 1} (1-u)^{(n-gamma)/2 - 1},
 *
 * valid for gamma < n. Pairs need F_gamma and F_{-gamma}, so |gamma| < n is
 * enforced. Large Q follows from Watson's lemma with the exact Taylor
 * coefficients w_j of w:
 *
 *   F_gamma^{(k)}(Q) ~ (-1)^k sum_j w_j (j+k)! / Q^{j+k+1}.
 */
#pragma once

#include <vector>

#include "heisen/scalar.hpp"

namespace heisen {

void check_resolvent_parameter(int n, const Rat& gamma);

// Exponents (a, b) of w(u) = (1+u)^a (1-u)^b.
std::pair<Rat, Rat> resolvent_weight_exponents(int n, const Rat& gamma);

// Taylor coefficients w_0..w_J of w at u = 0.
std::vector<Rat> resolvent_weight_taylor(int n, const Rat& gamma, int J);

double resolvent_weight(int n, double gamma, double u);

// F_gamma^{(k)}(Q) by quadrature.
double resolvent_profile(int n, const Rat& gamma, int k, double Q);

// Watson series of F_gamma^{(k)}(Q) summed up to its smallest term.
double resolvent_profile_asymptotic(int n, const Rat& gamma, int k, double Q);

// Generalized binomial coefficient C(a, j) for rational a.
Rat gen_binomial(const Rat& a, int j);

}  // namespace heisen
