/*
 * forms.hpp - charted manifolds on uniform grids and matrix-valued
 * differential forms.
 *
 * A chart is a box [-L, L]^D sampled at N^D nodes (row-major, last axis
 * fastest) with a partition-of-unity weight rho per node. Forms are stored
 * in the coordinate basis du^I, I an increasing multi-index encoded as a
 * bitmask, with an r x r complex matrix per component (r = 1 for scalars;
 * r = 1 factors broadcast against matrices in products).
 *
 * d uses 4th-order central differences; nodes closer than two steps to the
 * box boundary have no stencil and hold NaN. Integrals of top forms are
 * sum_charts orientation * sum_nodes rho h^D f, which is spectrally accurate
 * because rho vanishes smoothly well inside each box.
 *
 * Every kernel takes an Exec policy: Parallel runs the node loop under
 * OpenMP, Serial is the reference used by the tests and the benchmark.
 */
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "heisen/scalar.hpp"

namespace heisen {

enum class Exec { Serial, Parallel };

struct Chart {
  int dim = 3;
  int N = 1;      // nodes per axis
  double L = 0;   // half-width of the box
  double h = 0;   // grid step
  double orientation = 1;  // sign of alpha (d alpha)^n in coordinate order
  std::vector<double> rho;     // partition function per node
  // embedding into R^4 and its Jacobian dX_J/du_mu (S^3 charts only)
  std::vector<double> X, DX;
  // contact data in the coordinate basis
  std::vector<double> alpha;   // dim per node
  std::vector<double> dalpha;  // C(dim, 2) per node
  std::vector<double> reeb;    // dim per node
  std::vector<double> frame;   // 2n vectors of dim per node
  std::vector<double> J;       // 2n x 2n per node, in the frame

  size_t nodes() const;
  double coord(size_t node, int axis) const;
  int axis_index(size_t node, int axis) const;
  size_t stride(int axis) const;
  // Whether a central stencil of half-width `margin` fits at the node.
  bool interior(size_t node, int margin) const;
};

struct Manifold {
  std::string name;
  int n = 1;    // half-dimension of H
  int dim = 3;  // form dimension (2n + 1, or larger for formal point fibers)
  std::vector<Chart> charts;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

// Increasing multi-indices of size k in dimension D, as bitmasks in
// lexicographic order.
const std::vector<unsigned>& components(int D, int k);
int component_index(int D, unsigned mask);
// Sign of du^A ^ du^B relative to du^{A|B}; 0 if A and B overlap.
int wedge_sign(unsigned a, unsigned b);

class Form {
 public:
  Form() = default;
  Form(ManifoldPtr M, int degree, int r);

  const ManifoldPtr& manifold() const { return M_; }
  int degree() const { return deg_; }
  int r() const { return r_; }
  int ncomp() const { return ncomp_; }
  size_t block() const { return static_cast<size_t>(r_) * r_; }

  cplx* at(size_t chart, size_t node, int comp) { return &data_[chart][(node * ncomp_ + comp) * block()]; }
  const cplx* at(size_t chart, size_t node, int comp) const {
    return &data_[chart][(node * ncomp_ + comp) * block()];
  }
  std::vector<cplx>& chart_data(size_t c) { return data_[c]; }
  const std::vector<cplx>& chart_data(size_t c) const { return data_[c]; }

  bool is_zero() const;  // NaN (no stencil) counts as absent
  double max_abs(int margin = 0) const;  // over nodes with a stencil of `margin`

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(cplx s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, cplx s) { return a *= s; }
  friend Form operator*(cplx s, Form a) { return a *= s; }

 private:
  ManifoldPtr M_;
  int deg_ = 0, r_ = 1, ncomp_ = 1;
  std::vector<std::vector<cplx>> data_;  // per chart
};

// 0-form from a function of (chart, node); fills an r x r block.
Form function_form(ManifoldPtr M, int r, const std::function<void(size_t, size_t, cplx*)>& fn);
Form scalar_function(ManifoldPtr M, const std::function<cplx(size_t, size_t)>& fn);
// 1-form from coordinate components: fn(chart, node, axis) -> r x r block.
Form one_form(ManifoldPtr M, int r, const std::function<void(size_t, size_t, int, cplx*)>& fn);

Form d(const Form& a, Exec ex = Exec::Parallel);
Form wedge(const Form& a, const Form& b, Exec ex = Exec::Parallel);
// Graded commutator a ^ b - (-1)^{|a||b|} b ^ a.
Form graded_commutator(const Form& a, const Form& b, Exec ex = Exec::Parallel);
Form matrix_trace(const Form& a);
// Integral of the top component of a scalar form; throws BoundaryStencil if
// a node with rho > 0 has no value.
cplx integrate(const Form& top, Exec ex = Exec::Parallel);
// Same integral restricted to one chart with weight 1 (for overlap tests).
cplx integrate_chart(const Form& top, size_t chart, Exec ex = Exec::Parallel);
// Integral after checking that a two-chart form is one global form: the
// overlap weight rho (1 - rho) must give the same integral in both charts,
// up to rel_tol times the overlap integral of |top|. Throws ChartOverlapMismatch.
cplx integrate_checked(const Form& top, double rel_tol = 1e-6, Exec ex = Exec::Parallel);

}  // namespace heisen
