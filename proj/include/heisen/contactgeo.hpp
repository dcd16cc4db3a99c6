/*
 * contactgeo.hpp - the standard contact S^3, fiberwise point manifolds,
 * symplectic connections on H and characteristic forms.
 *
 * S^3 in C^2 = R^4 with coordinates X = (a1, b1, a2, b2), z_j = a_j + i b_j.
 * The contact form is the restriction of -i d'r, r = |z|^2 - 1:
 *   alpha = sum_j (a_j db_j - b_j da_j),   d alpha = 2 sum_j da_j ^ db_j,
 *   T = (-b1, a1, -b2, a2)                 (Hopf field),
 *   e1 = (-a2, b2, a1, -b1), e2 = J e1 = (-b2, -a2, b1, a1)  spanning H.
 * The symplectic frame of H is f1 = e2/sqrt2, f2 = e1/sqrt2, so that
 * omega(f1, f2) = 1 for omega = -d alpha. Fiber coordinates (x, xi) are the
 * coordinates in this frame.
 *
 * Two stereographic charts cover S^3: chart 0 projects from b2 = +1, chart 1
 * from b2 = -1, each sampled on [-L, L]^3. A smooth step in b2 on
 * [-blend, blend] gives the partition of unity. All geometric data are
 * evaluated analytically at the nodes; only d of sampled forms uses finite
 * differences.
 */
#pragma once

#include <string>

#include "heisen/forms.hpp"

namespace heisen {

struct S3Options {
  int grid = 32;
  double half_width = 1.65;
  double blend = 0.3;
};

ManifoldPtr std_s3(const S3Options& opt = {});
ManifoldPtr std_s3(int grid);

// One node, no geometry; forms of degree <= dim in a formal exterior
// algebra, for fiberwise identities.
ManifoldPtr point_fiber(int n, int dim);

// Largest residual of each contact invariant over all nodes.
struct ContactInvariants {
  double alpha_T = 0;        // |alpha(T) - 1|
  double dalpha_T = 0;       // |d alpha(T, .)|
  double alpha_frame = 0;    // |alpha(f_a)|
  double omega_frame = 0;    // |omega(f_a, f_b) - Omega_ab|
  double J_square = 0;       // |J^2 + 1|
  double J_symplectic = 0;   // |J^T Omega J - Omega|
  double compat_min = 0;     // min over frame vectors of omega(J v, v)
  double volume_min = 0;     // min |(alpha ^ d alpha)_{123}|
};
ContactInvariants contact_invariants(const Manifold& M);

// Scalar forms from the contact data.
Form alpha_form(ManifoldPtr M);
Form dalpha_form(ManifoldPtr M);
// Interior product with a vector field given in chart coordinates.
Form contract(const Form& a, const std::function<double(size_t, size_t, int)>& field);
Form reeb_contract(const Form& a);

// Ambient coordinate X_j at a node of an S^3 chart, and its differential.
double ambient(const Manifold& M, size_t chart, size_t node, int j);
double ambient_d(const Manifold& M, size_t chart, size_t node, int j, int axis);

// Symplectic connection in the fixed frame: beta is an sp(2n)-valued 1-form
// (2n x 2n blocks), theta = d beta + beta ^ beta.
struct Connection {
  std::string name;
  Form beta, theta;
};

// "flat": beta = 0.
// "levi": beta = A (x) J_std, A = 0.7 a1 db2 + 0.4 b1 da2; u(1)-valued, not flat.
// "sl2":  beta = A1 (x) H + A2 (x) E + A3 (x) F with non-commuting generators
//         (symplectic, not unitary); used for Bianchi and change-of-connection checks.
Connection make_connection(ManifoldPtr M, const std::string& name, Exec ex = Exec::Parallel);
Connection connection_from_beta(std::string name, Form beta, Exec ex = Exec::Parallel);
// d theta + [beta, theta]
Form bianchi_residual(const Connection& c, Exec ex = Exec::Parallel);

// Standard complex structure of the fiber coordinates, (x, xi) -> x + i xi.
std::vector<double> j_std(int n);

// Characteristic forms, truncated at the form dimension. Each returns the
// sum of its components of every degree as a vector indexed by degree.
using FormSeries = std::vector<Form>;
// c1 = -(1/2 pi i) tr_C theta, with tr_C T = -(i/2) tr(J_std T) for u(n)
// valued theta; throws NotUnitary if theta does not commute with J_std.
Form c1(const Connection& c);
FormSeries todd(const Connection& c);   // 1 + c1/2 + ... up to the form dimension
FormSeries a_hat(const Connection& c);  // 1 on manifolds of dimension < 4
// Ch(f) = -sum_l (2 pi i)^{-(l+1)} l!/(2l+1)! tr (f^{-1} df)^{2l+1}
FormSeries ch_odd(const Form& f, Exec ex = Exec::Parallel);

// Top-degree part of a wedge product of two series.
Form top_wedge(const FormSeries& a, const FormSeries& b, Exec ex = Exec::Parallel);

// Matrix-valued 0-forms used by the examples: bott = [[z1, -conj z2], [z2, conj z1]].
Form bott_map(ManifoldPtr M);
// Pointwise inverse of an r x r matrix-valued 0-form.
Form pointwise_inverse(const Form& f);
// max over nodes of |f^* f - 1|.
double unitarity_defect(const Form& f);

}  // namespace heisen
