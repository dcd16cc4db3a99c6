/*
 * fock.hpp - Weyl quantization on a truncated Fock (Hermite) basis.
 *
 * With z_j = x_j + i xi_j, Op(z_j) = sqrt(2) a_j and Op(zbar_j) = sqrt(2) a_j^*.
 * Two bases are offered:
 *   Normalized  orthonormal |k>, complex double entries;
 *   Rational    e_k = Op(zbar)^k |0>, where Op(zbar) e_k = e_{k+1} and
 *               Op(z) e_k = 2k e_{k-1}; entries are exact rationals, the
 *               trace and the diagonal agree with the orthonormal basis.
 * Operators are applied to sparse vectors with no intermediate truncation and
 * only the final result is projected onto the basis, so every stored entry is
 * exact (no truncation error inside the matrix).
 *
 * Weyl ordering comes from z # F = z F + d_zbar F, giving
 *   Op(z^a zbar^b) = Op(z) Op(z^{a-1} zbar^b) - b Op(z^{a-1} zbar^{b-1}).
 * For the Gaussian class with g = e^{-lQ} (per mode),
 *   Op(zbar^a z^b g) = [Op(zbar) Op(zbar^{a-1} z^b g) + b Op(zbar^{a-1} z^{b-1} g)] / (1+l),
 *   Op(z^b g) = Op(z^{b-1} g) Op(z) / (1+l),
 *   Op(g) |k> = (1+l)^{-1} ((1-l)/(1+l))^k |k>.
 */
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "heisen/symbol.hpp"

namespace heisen {

using Occ = std::array<int, 4>;

enum class FockNorm { Normalized, Rational };

class FockBasis {
 public:
  FockBasis() = default;
  FockBasis(int n, int cutoff);

  int n() const { return n_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const Occ& state(int i) const { return states_[i]; }
  int total(int i) const;
  // -1 when outside the basis.
  int index(const Occ& k) const;

 private:
  int n_ = 1;
  int cutoff_ = 0;
  std::vector<Occ> states_;
  std::map<Occ, int> index_;
};

int default_fock_cutoff(int n);

template <class T>
struct FockOp {
  FockBasis basis;
  FockNorm norm = FockNorm::Normalized;
  std::vector<T> mat;  // row-major dim x dim

  int dim() const { return basis.dim(); }
  T& operator()(int i, int j) { return mat[static_cast<size_t>(i) * dim() + j]; }
  const T& operator()(int i, int j) const { return mat[static_cast<size_t>(i) * dim() + j]; }
  T trace() const {
    T s = Field<T>::zero();
    for (int i = 0; i < dim(); ++i) s += (*this)(i, i);
    return s;
  }
};

using SparseVec = std::map<Occ, cplx>;

// Matrices; Rational norm requires T = CRat, Normalized requires T = cplx.
FockOp<CRat> quantize_poly_exact(const PolyC& P, const FockBasis& basis);
FockOp<cplx> quantize_poly(const PolyD& P, const FockBasis& basis);
FockOp<CRat> quantize_gauss_exact(const PolyC& P, const Rat& lambda, const FockBasis& basis);
FockOp<cplx> quantize_gauss(const PolyD& P, const Rat& lambda, const FockBasis& basis);
// Diagonal of quantize_gauss only (trace computations on large bases).
std::vector<cplx> quantize_gauss_diagonal(const PolyD& P, const Rat& lambda, const FockBasis& basis);
// Polynomial plus Gaussian parts; resolvent parts are rejected.
FockOp<cplx> quantize_symbol(const SymbolD& s, const FockBasis& basis);

// Rewrites a polynomial in (x, xi) as one in (z, zbar): variable j is z_j,
// variable n + j is zbar_j.
template <class T>
Poly<T> to_complex_coords(const Poly<T>& P);

Eigen::MatrixXcd to_eigen(const FockOp<cplx>& op);
FockOp<cplx> from_eigen(const Eigen::MatrixXcd& m, const FockBasis& basis);
FockOp<cplx> to_normalized(const FockOp<CRat>& op);

// Symbol (cosh t)^{-n} e^{-Q tanh t} of e^{-tH}.
SymbolD mehler_symbol(int n, double t);
FockOp<cplx> vacuum_projection(const FockBasis& basis);
// s = 2^n e^{-Q}.
SymbolC vacuum_symbol(int n);
// Symbol of the rank-one operator E_kl (e_k -> ... in the rational basis):
// E_kl = zbar^k # s # z^l / prod_j (2^{l_j} l_j!).
SymbolC matrix_unit_symbol(int n, const Occ& k, const Occ& l);

// Taylor coefficients in u^2 of phi_z(u) = (artanh(u)/u)^{z-1} (1-u^2)^{(n-2)/2}.
std::vector<cplx> hz_coefficients(cplx z, int K, int n);
// Same series in powers of u (odd coefficients should vanish).
std::vector<cplx> hz_series_in_u(cplx z, int K, int n);
// Coefficient h_j(z) of rho^j in rho^{-2z} h^{-z}; zero unless 4 | j.
cplx hz_term(cplx z, int j, int n);
// Independent assembly from the full u-series: the u^{j/2} coefficient times
// Gamma(z + j/2)/Gamma(z); odd j has no matching power of u.
cplx hz_term_from_u_series(cplx z, int j, int n);

}  // namespace heisen
