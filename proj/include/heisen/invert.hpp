/*
 * invert.hpp - inverses of elliptic (matrix) paired symbols.
 *
 * Expansion part: the leading term must be C Q^{m/2} with C an invertible
 * constant matrix. With L^{-1} = C^{-1} Q^{-m/2}, the terms of b = a^{-1}
 * solve (a # b)_p = delta_{p0} I term by term:
 *   b_0 = L^{-1},  b_p = -L^{-1} sum_{k+l+q=p, q<p} (i/2)^k B_k(a_l, b_q),
 * with term indices counting steps of 2 in degree.
 * Closures are inverted where the result stays in a closed class:
 *   constant matrices                      C^{-1}
 *   scalar alpha Q + beta                  alpha^{-1} F_gamma, gamma = -beta/alpha
 *   C + Hermite part (P e^{-Q})            Fock compression
 * Op(P e^{-Q}) is supported on occupations <= deg P, so C + G is inverted
 * exactly on that subspace and converted back through the matrix units E_kl.
 * Other Schwartz parts are rejected.
 *
 * The minus component multiplies in the opposite order, so its inverse is
 * the transpose of the inverse of the transposed minus matrix.
 */
#pragma once

#include "heisen/paired.hpp"

namespace heisen {

// r x r row-major matrix of expansions.
using ExpansionMatrix = std::vector<PhgExpansion<CRat>>;

// Formal two-sided inverse of the expansion part through `depth`; the
// result carries the inverted closure when one exists.
ExpansionMatrix invert_expansion(const ExpansionMatrix& a, int r, int depth);

MatrixSymbol<CRat> invert(const MatrixSymbol<CRat>& s, int depth);
PairedSymbol<CRat> invert(const PairedSymbol<CRat>& s, int depth);

// Exact inverse of a dense r x r matrix; throws NotElliptic when singular.
std::vector<CRat> invert_exact(std::vector<CRat> m, int r);

}  // namespace heisen
