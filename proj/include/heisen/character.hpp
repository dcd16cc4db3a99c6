/*
 * character.hpp - symbol-valued forms, the connection on them, and the
 * index character.
 *
 * mu^{-1}(phi) = -(i/2) omega(phi v, v) is the quadratic Hamiltonian whose
 * Moyal commutator is the derivation (phi.w)(v) = -w(phi v); mu^{-1}(J_std)
 * = (i/2) Q. nu(phi) = (mu^{-1} phi, -mu^{-1} phi) in the absolute convention.
 *
 * A symbol-valued form is stored factored: eta = sum_k C_k (x) b_k, with b_k
 * exact paired symbols shared by every node and C_k r x r matrix-valued
 * coordinate forms. Products multiply the b_k exactly and wedge the C_k, so
 * a word in sigma^{-1}, nabla sigma, theta needs one exact trace per tuple of
 * fiber factors, reused at every node:
 *   tau(word) = sum_tuples tau(b_{k1} ... b_{kL}) tr(C_{k1} ^ ... ^ C_{kL}).
 * The connection term uses beta = sum_A beta^A X_A in a basis of sp(2n)
 * adapted to u(n) + p, so [nu(beta), eta] = sum (beta^A ^ C_k) (x) [nu(X_A), b_k].
 *
 * chi(sigma) = sum over l, i_0..i_{2l+1} of
 *   (-1/2 pi i)^{I+l+1} l!/(I+2l+1)!
 *   tau tr(sigma^{-1} theta^{i_0} nabla sigma theta^{i_1} nabla sigma^{-1} ... nabla sigma theta^{i_{2l+1}}),
 * I = sum i_m, restricted to form degree 2I + 2l + 1 <= dim M.
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "heisen/contactgeo.hpp"
#include "heisen/paired.hpp"
#include "heisen/rtrace.hpp"

namespace heisen {

using PairC = PairedSymbol<CRat>;

// Exact 2n x 2n rational matrices, row-major, acting on (x_1..x_n, xi_1..xi_n).
using RatMatrix = std::vector<CRat>;

bool is_symplectic_lie(const RatMatrix& phi, int n);
PolyC mu_inverse(const RatMatrix& phi, int n);  // throws NotSymplecticLieAlgebra
PairC nu(const RatMatrix& phi, int n, int depth);
// The derivation (phi.w)(v) = -w(phi v) on a polynomial.
PolyC lie_action(const RatMatrix& phi, const PolyC& w);

// Basis of sp(2n): u(n) part ([[A, -B], [B, A]], A antisymmetric, B
// symmetric) first, then p ([[A, B], [B, -A]], A, B symmetric).
struct SpBasis {
  int n = 1;
  std::vector<RatMatrix> X;
  int unitary_count = 0;  // the first unitary_count elements span u(n)
  // Coordinates of a (numeric) sp(2n) matrix in the basis.
  std::vector<cplx> coordinates(const cplx* M) const;
};
const SpBasis& sp_basis(int n);

struct FiberTerm {
  PairC b;
  Form C;
};

struct FiberForm {
  ManifoldPtr M;
  int degree = 0;
  int r = 1;
  std::vector<FiberTerm> terms;

  FiberForm() = default;
  FiberForm(ManifoldPtr M_, int degree_, int r_) : M(std::move(M_)), degree(degree_), r(r_) {}
  void add(const PairC& b, Form C);  // merges exactly equal b, drops zero C
};

FiberForm operator+(const FiberForm& a, const FiberForm& b);
FiberForm operator-(const FiberForm& a, const FiberForm& b);
FiberForm fiber_mul(const FiberForm& a, const FiberForm& b, Exec ex = Exec::Parallel);
FiberForm fiber_commutator(const FiberForm& a, const FiberForm& b, Exec ex = Exec::Parallel);  // graded

// Applies a scalar functional to the fiber factors: sum_k f(b_k) C_k.
Form apply_functional(const FiberForm& a, const std::function<cplx(const PairC&)>& f);
// Pointwise value of the plus (or minus) closures at a phase-space point.
Form evaluate_closure(const FiberForm& a, const std::vector<double>& v, bool plus = true);

// Identity pair, s~ = (s, 0), and constant sections.
PairC identity_pair(int n, int depth);
PairC vacuum_pair(int n, int depth);
FiberForm constant_section(ManifoldPtr M, const MatrixSymbol<CRat>& s);
FiberForm function_section(const Form& g, int depth);  // g (x) 1, g invertible r x r
// (f s + (1 - s), 1); throws NotUnitary if f is not unitary to 1e-12.
FiberForm toeplitz_symbol(const Form& f, int depth);
FiberForm direct_sum(const FiberForm& a, const FiberForm& b);

// Nodewise inverse of a degree-0 section. A single factor is inverted
// exactly; otherwise the factors must span a product-closed algebra
// (b_j b_k a multiple of some b_l, the identity among them) and the inverse
// is solved in that finite algebra at each node.
FiberForm fiber_inverse(const FiberForm& sigma);

// nu(beta) and theta_bold = nu(theta), factored in the sp basis.
FiberForm nu_beta(const Connection& c, int depth);
FiberForm theta_bold(const Connection& c, int depth);
// d eta + [nu(beta), eta]
FiberForm nabla(const FiberForm& eta, const Connection& c, int depth, Exec ex = Exec::Parallel);

// tau by class dispatch: exact zero for polynomial pairs, Fock trace for
// Schwartz pairs, heat route otherwise.
enum class TauPath { PolynomialZero, Fock, Heat };
const char* tau_path_name(TauPath p);
TauPath tau_path(const PairC& p);
cplx tau_dispatch(const PairC& p);

struct WordTerm {
  std::string word;
  int degree = 0;
  cplx coefficient = 0;
  int tuples = 0;        // fiber tuples with a nonzero trace
  Form value;            // scalar form of this word's contribution
};

struct ChiResult {
  FormSeries chi;  // indexed by degree; even degrees are zero
  std::vector<WordTerm> words;
  std::map<std::string, int> tau_paths;  // path name -> count of distinct fiber words
};

ChiResult chi(const FiberForm& sigma, const Connection& c, int depth, Exec ex = Exec::Parallel);

struct IndexReport {
  cplx value = 0;
  long nearest = 0;
  double abs_error = 0;
  std::vector<std::pair<std::string, cplx>> per_term;
};
// int_M chi(sigma) ^ A-hat(M).
IndexReport index(const FiberForm& sigma, const Connection& c, int depth, Exec ex = Exec::Parallel);

// tau(theta^k) check: the polynomial shortcut at every node, and the heat
// route on products nu(theta_I1) ... nu(theta_Ik) of node values at the
// given sample nodes (sp coordinates rationalised exactly from doubles).
struct TauThetaReport {
  double shortcut_max = 0;   // max |tau| over nodes and k via the dispatch
  double heat_max = 0;       // max |tau| from the heat route at sampled nodes
  int heat_evaluations = 0;
  int nodes = 0;
};
TauThetaReport tau_theta_check(const Connection& c, int kmax, int samples, int depth);

// Closed form Ch(f) ^ exp(c1/2) truncated at the form dimension.
FormSeries toeplitz_character_closed(const Form& f, const Connection& c, Exec ex = Exec::Parallel);

}  // namespace heisen
