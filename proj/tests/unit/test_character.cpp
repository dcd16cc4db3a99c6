#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "heisen/character.hpp"
#include "heisen/errors.hpp"
#include "heisen/fock.hpp"
#include "heisen/moyal.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace heisen;

namespace {

constexpr int kDepth = 4;

ManifoldPtr s3_32() {
  static ManifoldPtr M = std_s3(32);
  return M;
}

template <class V>
RatMatrix to_rat(const V& m) {
  RatMatrix r;
  for (cplx x : m) r.push_back(CRat(Rat(x.real()), Rat(x.imag())));
  return r;
}

RatMatrix bracket(const RatMatrix& a, const RatMatrix& b, int m) {
  RatMatrix c(m * m, CRat(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) c[i * m + j] += a[i * m + k] * b[k * m + j] - b[i * m + k] * a[k * m + j];
  return c;
}

// Random element of sp(2n) as a rational combination of the basis.
RatMatrix random_sp(std::mt19937& rng, int n) {
  const SpBasis& B = sp_basis(n);
  int m = 2 * n;
  RatMatrix X(m * m, CRat(0));
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  for (const auto& b : B.X) {
    Rat q(num(rng), den(rng));
    q.canonicalize();
    CRat c(q);
    for (int i = 0; i < m * m; ++i) X[i] += c * b[i];
  }
  return X;
}

SymbolC commutator(const PolyC& a, const PolyC& b) {
  return symbol_star(SymbolC(a), SymbolC(b)) - symbol_star(SymbolC(b), SymbolC(a));
}

double max_diff(const Form& a, const Form& b, int margin = 3) { return (a - b).max_abs(margin); }

}  // namespace

TEST_CASE("mu inverse of the complex structure is (i/2) Q") {
  for (int n = 1; n <= 2; ++n) {
    PolyC X = mu_inverse(to_rat(j_std(n)), n);
    CHECK(X == PolyC::Q(n) * CRat(Rat(0), Rat(1, 2)));
  }
  CHECK(mu_inverse(RatMatrix(4, CRat(0)), 1).is_zero());
  RatMatrix bad(4, CRat(0));
  bad[0] = CRat(1);
  CHECK_FALSE(is_symplectic_lie(bad, 1));
  CHECK_THROWS_AS(mu_inverse(bad, 1), NotSymplecticLieAlgebra);
}

TEST_CASE("sp basis spans sp(2n) and coordinates round-trip") {
  for (int n = 1; n <= 2; ++n) {
    const SpBasis& B = sp_basis(n);
    int m = 2 * n;
    CHECK(static_cast<int>(B.X.size()) == n * (2 * n + 1));
    CHECK(B.unitary_count == n * n);
    for (size_t A = 0; A < B.X.size(); ++A) {
      CHECK(is_symplectic_lie(B.X[A], n));
      std::vector<cplx> num;
      for (const auto& x : B.X[A]) num.push_back(x.to_cplx());
      auto co = B.coordinates(num.data());
      for (size_t k = 0; k < co.size(); ++k) CHECK(std::abs(co[k] - (k == A ? 1.0 : 0.0)) < 1e-14);
      // the first unitary_count elements commute with J
      auto J = to_rat(j_std(n));
      bool commutes = true;
      for (const auto& e : bracket(B.X[A], J, m)) commutes = commutes && e.is_zero();
      CHECK(commutes == (static_cast<int>(A) < B.unitary_count));
    }
  }
}

TEST_CASE("nu is a Lie homomorphism and the action on linear symbols is phi") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 2; ++n) {
    int m = 2 * n;
    for (int trial = 0; trial < 4; ++trial) {
      RatMatrix a = random_sp(rng, n), b = random_sp(rng, n);
      CHECK(commutator(mu_inverse(a, n), mu_inverse(b, n)) == SymbolC(mu_inverse(bracket(a, b, m), n)));
      for (int k = 0; k < m; ++k) {
        PolyC w = PolyC::var(n, k, CRat(1));
        CHECK(commutator(mu_inverse(a, n), w) == SymbolC(lie_action(a, w)));
      }
      // the action on a quadratic is inner
      PolyC q = test::random_homogeneous(rng, n, 2, 3);
      CHECK(commutator(mu_inverse(a, n), q) == SymbolC(lie_action(a, q)));
    }
  }
}

TEST_CASE("unitary generators act on the vacuum by half the complex trace") {
  std::mt19937 rng(11);
  for (int n = 1; n <= 2; ++n) {
    const SpBasis& B = sp_basis(n);
    SymbolC s = vacuum_symbol(n);
    for (int trial = 0; trial < 3; ++trial) {
      int m = 2 * n;
      RatMatrix T(m * m, CRat(0));
      std::uniform_int_distribution<int> num(-3, 3);
      for (int A = 0; A < B.unitary_count; ++A) {
        CRat c(Rat(num(rng)));
        for (int i = 0; i < m * m; ++i) T[i] += c * B.X[A][i];
      }
      // T = [[A, -B], [B, A]] is A + iB on C^n
      CRat half_tr(0);
      for (int k = 0; k < n; ++k) half_tr += (T[k * m + k] + CRat(Rat(0), Rat(1)) * T[(n + k) * m + k]);
      half_tr = half_tr * CRat(Rat(1, 2));
      CHECK(symbol_star(SymbolC(mu_inverse(T, n)), s) == s * half_tr);
      CHECK(symbol_star(s, SymbolC(mu_inverse(T, n))) == s * half_tr);
      // Fock trace of nu(T)^i s~ is (tr T / 2)^i
      PairC p = vacuum_pair(n, kDepth);
      PairC nt = nu(T, n, kDepth);
      CRat expect(1);
      for (int i = 1; i <= 2; ++i) {
        p = pair_mul(nt, p);
        expect = expect * half_tr;
        CHECK(std::abs(tau_fock(p).value - expect.to_cplx()) < 1e-10);
      }
    }
  }
}

TEST_CASE("fiber forms: flat curvature, tau of curvature powers") {
  ManifoldPtr M = s3_32();
  CHECK(theta_bold(make_connection(M, "flat"), kDepth).terms.empty());
  Connection levi = make_connection(M, "levi");
  FiberForm th = theta_bold(levi, kDepth);
  CHECK_FALSE(th.terms.empty());
  for (const auto& t : th.terms) CHECK(tau_path(t.b) == TauPath::PolynomialZero);
  TauThetaReport rep = tau_theta_check(levi, 3, 4, kDepth);
  CHECK(rep.shortcut_max == 0.0);
  CHECK(rep.heat_evaluations == 4 * (1 + 3 + 9 + 27));
  CHECK(rep.heat_max < 1e-12);
}

TEST_CASE("connection identities on symbol-valued forms") {
  ManifoldPtr M = s3_32();
  Connection sl2 = make_connection(M, "sl2");
  FiberForm eta = toeplitz_symbol(bott_map(M), kDepth);
  FiberForm th = theta_bold(sl2, kDepth);
  std::vector<double> v{0.3, -0.2};
  // nabla^2 eta = [theta, eta]
  FiberForm dd = nabla(nabla(eta, sl2, kDepth), sl2, kDepth);
  FiberForm rhs = fiber_commutator(th, eta);
  Form a = evaluate_closure(dd, v), b = evaluate_closure(rhs, v);
  double scale = b.max_abs(3);
  CHECK(scale > 0.1);
  CHECK(max_diff(a, b) < 2e-2 * scale);
  // Bianchi: nabla theta = 0
  Form bt = evaluate_closure(nabla(th, sl2, kDepth), v);
  CHECK(bt.max_abs(3) < 2e-2 * evaluate_closure(th, v).max_abs(3));
  // nu(beta) factoring reproduces beta on the linear symbols x: [nu(beta), x] = beta x
  FiberForm nb = nu_beta(sl2, kDepth);
  CHECK(nb.degree == 1);
  CHECK_FALSE(nb.terms.empty());
}

TEST_CASE("Toeplitz symbol structure") {
  ManifoldPtr M = s3_32();
  Form one = function_form(M, 2, [](size_t, size_t, cplx* o) { o[0] = o[3] = 1; o[1] = o[2] = 0; });
  FiberForm triv = toeplitz_symbol(one, kDepth);
  CHECK(triv.terms.size() == 1);
  Form f = bott_map(M);
  CHECK_THROWS_AS(toeplitz_symbol(f * cplx(1.01), kDepth), NotUnitary);
  FiberForm sig = toeplitz_symbol(f, kDepth);
  CHECK(sig.terms.size() == 2);
  // sigma sigma^{-1} = 1 on the vacuum closure and off it
  FiberForm inv = fiber_inverse(sig);
  FiberForm prod = fiber_mul(sig, inv);
  for (double x : {0.0, 0.7}) {
    Form val = evaluate_closure(prod, {x, 0.1});
    CHECK(max_diff(val, one, 0) < 1e-12);
  }
  // flat: nabla sigma = df (x) s~
  Connection flat = make_connection(M, "flat");
  FiberForm ds = nabla(sig, flat, kDepth);
  REQUIRE(ds.terms.size() == 1);
  CHECK(tau_path(ds.terms[0].b) == TauPath::Fock);
  Form sv = evaluate_closure(ds, {0.0, 0.0});
  CHECK(max_diff(sv, d(f) * vacuum_symbol(1).eval({0.0, 0.0})) < 1e-12);
  // levi: J commutes with s~, so the connection term drops out
  FiberForm dsl = nabla(sig, make_connection(M, "levi"), kDepth);
  CHECK(dsl.terms.size() == 1);
}

TEST_CASE("character of the Toeplitz symbol matches Ch(f) exp(c1/2)") {
  ManifoldPtr M = s3_32();
  // a scalar phase has Ch_1 != 0, so the c1 term is exercised; the Bott map
  // is SU(2)-valued and carries Ch_3
  Form phase = function_form(M, 1, [&](size_t c, size_t v, cplx* o) {
    const double* X = &M->charts[c].X[v * 4];
    o[0] = std::exp(cplx(0, X[0] * X[3] + std::sin(X[2] + 2 * X[1])));
  });
  for (const Form& f : {phase, bott_map(M)}) {
    FiberForm sig = toeplitz_symbol(f, kDepth);
    for (const char* name : {"flat", "levi"}) {
      CAPTURE(name);
      CAPTURE(f.r());
      Connection c = make_connection(M, name);
      ChiResult r = chi(sig, c, kDepth);
      FormSeries closed = toeplitz_character_closed(f, c);
      for (int k : {1, 3}) {
        CAPTURE(k);
        double scale = closed[k].max_abs(3);
        CHECK(max_diff(r.chi[k], closed[k]) < 1e-9 * (1 + scale));
      }
      CHECK(r.chi[0].is_zero());
      CHECK(r.chi[2].is_zero());
      CHECK(r.tau_paths.count("fock") == 1);
      CHECK(r.tau_paths.count("heat") == 0);
    }
  }
  // the c1 term is pointwise visible for the phase with the levi connection
  Connection levi = make_connection(M, "levi");
  FormSeries with = toeplitz_character_closed(phase, levi), without = toeplitz_character_closed(phase, make_connection(M, "flat"));
  CHECK(max_diff(with[3], without[3]) > 1e-3);
  // chi_1 of the phase is closed up to the stencil error
  Form chi1 = chi(toeplitz_symbol(phase, kDepth), levi, kDepth).chi[1];
  CHECK(chi1.max_abs(3) > 0.1);
  CHECK(d(chi1).max_abs(3) < 5e-2 * chi1.max_abs(3));
  // its index does not see the connection, although the character does
  FiberForm ps = toeplitz_symbol(phase, kDepth);
  cplx pf = index(ps, make_connection(M, "flat"), kDepth).value, pl = index(ps, levi, kDepth).value;
  CHECK(std::abs(pf) < 1e-3);
  CHECK(std::abs(pf - pl) < 1e-3);
}

TEST_CASE("index of the Bott Toeplitz symbol") {
  ManifoldPtr M = s3_32();
  FiberForm sig = toeplitz_symbol(bott_map(M), kDepth);
  double oracle = test::hopf_degree_oracle();
  IndexReport flat = index(sig, make_connection(M, "flat"), kDepth);
  IndexReport levi = index(sig, make_connection(M, "levi"), kDepth);
  IndexReport sl2 = index(sig, make_connection(M, "sl2"), kDepth);
  CHECK(std::abs(flat.value - oracle) < 1e-3);
  CHECK(flat.nearest == std::lround(oracle));
  CHECK(std::abs(levi.value - flat.value) < 1e-3);
  CHECK(std::abs(sl2.value - flat.value) < 1e-2);
  CHECK(std::abs(flat.value.imag()) < 1e-10);
}

TEST_CASE("character is additive and vanishes on trivial symbols") {
  ManifoldPtr M = s3_32();
  Connection levi = make_connection(M, "levi");
  Form f = bott_map(M);
  Form fbar = pointwise_inverse(f);
  FiberForm a = toeplitz_symbol(f, kDepth), b = toeplitz_symbol(fbar, kDepth);
  ChiResult ca = chi(a, levi, kDepth), cb = chi(b, levi, kDepth);
  ChiResult cs = chi(direct_sum(a, b), levi, kDepth);
  for (int k : {1, 3}) CHECK(max_diff(cs.chi[k], ca.chi[k] + cb.chi[k]) < 1e-9 * (1 + ca.chi[k].max_abs(3)));
  CHECK(std::abs(integrate(cs.chi[3])) < 2e-3);

  // automorphism g (x) 1: every word is polynomial
  ChiResult aut = chi(function_section(f, kDepth), levi, kDepth);
  for (const auto& form : aut.chi) CHECK(form.is_zero());
  CHECK(aut.tau_paths.count("fock") == 0);
  CHECK(aut.tau_paths.count("heat") == 0);

  // resolvent-type constant section: nabla sigma = 0
  MatrixSymbol<CRat> res{1, {}};
  CRat gam(Rat(1, 3));
  res.e.push_back(make_paired(expand(SymbolC(PolyC::Q(1) - PolyC::constant(1, gam)), 2, kDepth)));
  ChiResult cr = chi(constant_section(M, res), levi, kDepth);
  for (const auto& form : cr.chi) CHECK(form.is_zero());

  // a non-invertible symbol
  MatrixSymbol<CRat> bad{1, {make_paired(expand(SymbolC(PolyC::Q(1) - PolyC::constant(1, CRat(1))), 2, kDepth))}};
  CHECK_THROWS_AS(chi(constant_section(M, bad), levi, kDepth), NotElliptic);
}
