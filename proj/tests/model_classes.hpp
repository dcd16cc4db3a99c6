// Random paired symbols from the model classes, shared by the unit and
// acceptance tests.
//   poly      step-2 polynomial expansion of even order 0..4
//   gauss     (P e^{-lQ}, 0)
//   resolvent c F_g, |g| < n
// Composable products: poly x anything, gauss x gauss, and resolvent x
// resolvent with distinct parameters.
#pragma once

#include <random>
#include <string>

#include "heisen/paired.hpp"
#include "unit/test_util.hpp"

namespace heisen::test {

enum class ModelClass { Poly, Gauss, Resolvent };

inline const char* model_class_name(ModelClass c) {
  switch (c) {
    case ModelClass::Poly: return "poly";
    case ModelClass::Gauss: return "gauss";
    case ModelClass::Resolvent: return "resolvent";
  }
  return "?";
}

inline PairedSymbol<CRat> random_model_pair(std::mt19937& rng, int n, ModelClass c, int depth,
                                            const Rat& gamma = Rat(1, 2)) {
  if (c == ModelClass::Poly) {
    int m = 2 * std::uniform_int_distribution<int>(0, 2)(rng);
    PolyC p(n);
    for (int d = m; d >= 0; d -= 2) p += random_homogeneous(rng, n, d, 2);
    if (p.is_zero()) p = PolyC::constant(n, CRat(1));
    return make_paired(expand(SymbolC(p), m, depth));
  }
  if (c == ModelClass::Gauss) {
    static const Rat lambdas[] = {Rat(1, 2), Rat(1), Rat(2)};
    Rat l = lambdas[std::uniform_int_distribution<int>(0, 2)(rng)];
    PolyC p = random_poly(rng, n, 2, 3);
    if (p.is_zero()) p = PolyC::constant(n, CRat(1));
    return make_paired(expand(SymbolC::gauss(p, l), 0, depth));
  }
  CRat a = random_crat(rng);
  if (a.is_zero()) a = CRat(1);
  return make_paired(expand(SymbolC::resolvent(PolyC::constant(n, a), gamma), -2, depth));
}

// Orthogonal symplectic rational matrix on (x_1..x_n, xi_1..xi_n): a
// rotation in each (x_j, xi_j) plane followed, for n = 2, by the same
// rotation of (x_1, x_2) and (xi_1, xi_2).
inline std::vector<CRat> random_unitary_subst(std::mt19937& rng, int n) {
  auto rot = [&](Rat& c, Rat& s) {
    Rat t(std::uniform_int_distribution<int>(1, 5)(rng), std::uniform_int_distribution<int>(1, 5)(rng));
    t.canonicalize();
    c = (1 - t * t) / (1 + t * t);
    s = 2 * t / (1 + t * t);
  };
  int nv = 2 * n;
  std::vector<CRat> M(nv * nv, CRat(0));
  for (int j = 0; j < n; ++j) {
    Rat c, s;
    rot(c, s);
    M[j * nv + j] = c;
    M[j * nv + n + j] = Rat(-s);
    M[(n + j) * nv + j] = s;
    M[(n + j) * nv + n + j] = c;
  }
  if (n == 2) {
    Rat c, s;
    rot(c, s);
    std::vector<CRat> R(nv * nv, CRat(0));
    for (int h = 0; h < 2; ++h) {
      int o = 2 * h;
      R[o * nv + o] = c;
      R[o * nv + o + 1] = Rat(-s);
      R[(o + 1) * nv + o] = s;
      R[(o + 1) * nv + o + 1] = c;
    }
    std::vector<CRat> P(nv * nv, CRat(0));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j)
        for (int k = 0; k < nv; ++k) P[i * nv + j] += R[i * nv + k] * M[k * nv + j];
    M = P;
  }
  return M;
}

// Rational symplectic matrix: product of the shears [[1,S],[0,1]] and
// [[1,0],[S',1]] with S, S' symmetric.
inline std::vector<CRat> random_symplectic_subst(std::mt19937& rng, int n) {
  int nv = 2 * n;
  auto sym = [&]() {
    std::vector<Rat> S(n * n);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Rat v(num(rng), 2);
        v.canonicalize();
        S[i * n + j] = S[j * n + i] = v;
      }
    return S;
  };
  auto upper = sym(), lower = sym();
  std::vector<CRat> A(nv * nv, CRat(0)), B(nv * nv, CRat(0)), M(nv * nv, CRat(0));
  for (int i = 0; i < nv; ++i) A[i * nv + i] = B[i * nv + i] = CRat(1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A[i * nv + n + j] = upper[i * n + j];
      B[(n + i) * nv + j] = lower[i * n + j];
    }
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      for (int k = 0; k < nv; ++k) M[i * nv + j] += A[i * nv + k] * B[k * nv + j];
  return M;
}

}  // namespace heisen::test
