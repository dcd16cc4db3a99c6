#include <numbers>
#include <random>

#include "doctest.h"
#include "heisen/rtrace.hpp"
#include "../model_classes.hpp"
#include "test_util.hpp"

using namespace heisen;

namespace {
PolyC one(int n) { return PolyC::constant(n, CRat(1)); }

PairedSymbol<CRat> resolvent_pair(int n, const Rat& g, int depth) {
  return make_paired(expand(SymbolC::resolvent(one(n), g), -2, depth));
}
}  // namespace

TEST_CASE("trace table") {
  PolyC q = one(1);
  for (int k = 0; k <= 5; ++k) {
    TraceReport r = trh(SymbolC(q));
    REQUIRE(r.exact);
    Rat expect = (1 - Rat(1L << k)) * zeta_neg(k);
    CHECK(*r.exact == CRat(expect));
    q = poly_star(q, PolyC::Q(1));
  }
}

TEST_CASE("heat trace examples") {
  LaurentC h1 = heat_trace_exact(SymbolC(one(1)), 3);
  CHECK(h1.coeff(-2) == CRat(0));
  CHECK(h1.coeff(-1) == CRat(Rat(1, 2)));
  CHECK(h1.coeff(0) == CRat(0));
  CHECK(h1.coeff(1) == CRat(Rat(-1, 12)));
  CHECK(h1.coeff(3) == CRat(Rat(7, 720)));
  LaurentC hq = heat_trace_exact(SymbolC(PolyC::Q(1)), 2);
  CHECK(hq.coeff(-2) == CRat(Rat(1, 2)));
  CHECK(hq.coeff(0) == CRat(Rat(1, 12)));
  // Tr(s e^{-tH}) = e^{-nt}
  for (int n = 1; n <= 2; ++n) {
    LaurentC hs = heat_trace_exact(vacuum_symbol(n), 4);
    for (int p = 0; p <= 4; ++p) {
      Rat e = 1 / factorial(p);
      for (int i = 0; i < p; ++i) e *= -n;
      CHECK(hs.coeff(p) == CRat(e));
    }
  }
}

TEST_CASE("residue") {
  CHECK(res_exact(expand(SymbolC(PolyC::Q(1)), 2, 4)) == CRat(0));
  auto F = expand(SymbolC::resolvent(one(1), Rat(1, 3)) * CRat(5), -2, 4);
  CHECK(res_exact(F) == CRat(Rat(-5, 2)));
  std::mt19937 rng(41);
  for (int n = 1; n <= 2; ++n)
    for (int t = 0; t < 4; ++t) {
      PhgExpansion<CRat> e(n, 2, 2 + n);
      for (int j = 0; j <= e.depth; ++j) {
        RadialRatC r(n);
        for (int k = 0; k <= 2; ++k)
          if (2 - 2 * j + 2 * k >= 0) r.add(test::random_homogeneous(rng, n, 2 - 2 * j + 2 * k, 2), k);
        e.terms[j] = r;
      }
      CHECK(res_exact(iota(e, IotaKind::Absolute)) == res_exact(e) * CRat(parity_sign(n)));
    }
}

TEST_CASE("tau on basic pairs") {
  for (int n = 1; n <= 2; ++n) {
    auto p = make_paired(expand(SymbolC(PolyC::Q(n) * PolyC::x(n, 0) * PolyC::x(n, 0) + one(n)), 4, 4));
    CHECK(std::abs(tau(p).value) < 1e-14);
    CHECK(std::abs(tau_numeric(p).value) < 1e-14);
    auto s = make_paired(expand(vacuum_symbol(n)));
    CHECK(std::abs(tau(s).value - 1.0) < 1e-14);
    CHECK(std::abs(tau_numeric(s).value - 1.0) < 1e-8);
    CHECK(std::abs(tau_fock(s).value - 1.0) < 1e-12);
  }
}

TEST_CASE("tau on resolvent pairs against the spectrum") {
  for (Rat g : {Rat(1, 2), Rat(-1, 3), Rat(3, 4)}) {
    double gd = g.get_d();
    double exp1 = std::numbers::pi / 2 * std::tan(std::numbers::pi * gd / 2);
    auto p1 = resolvent_pair(1, g, 4);
    TraceReport r1 = tau(p1, true);
    MESSAGE("n=1 g=" << gd << " heat " << r1.value << " fit " << *r1.fit_constant << " cond " << r1.fit_condition);
    CHECK(std::abs(r1.value - exp1) < 1e-10);
    CHECK(std::abs(r1.residual_log_coeff) < 1e-12);
    TraceReport n1 = tau_numeric(p1);
    MESSAGE("numeric " << n1.value);
    CHECK(std::abs(n1.value - exp1) < 1e-8);
  }
  for (Rat g : {Rat(1, 2), Rat(-3, 2), Rat(1)}) {
    double gd = g.get_d();
    double exp2 = -std::numbers::pi * gd / 4 / std::tan(std::numbers::pi * gd / 2);
    auto p2 = resolvent_pair(2, g, 5);
    TraceReport r2 = tau(p2, true);
    MESSAGE("n=2 g=" << gd << " heat " << r2.value << " fit " << *r2.fit_constant);
    CHECK(std::abs(r2.value - exp2) < 1e-10);
    TraceReport n2 = tau_numeric(p2);
    MESSAGE("numeric " << n2.value);
    CHECK(std::abs(n2.value - exp2) < 1e-8);
  }
}

TEST_CASE("resolvent products close by partial fractions") {
  for (int n = 1; n <= 2; ++n) {
    auto a = expand(SymbolC::resolvent(one(n) * CRat(3), Rat(1, 2)), -2, 4 + n);
    auto b = expand(SymbolC::resolvent(one(n) * CRat(Rat(0), Rat(2)), Rat(-1, 3)), -2, 4 + n);
    auto c = star_product(a, b);
    REQUIRE(c.closure.has_value());
    // the degree -2 terms of the two resolvents cancel
    auto re = expand(*c.closure, -2, 5 + n);
    CHECK(re.terms[0].is_zero());
    for (int j = 0; j <= c.depth; ++j) CHECK(re.terms[j + 1] == c.terms[j]);
  }
}

TEST_CASE("tau is a trace on the model classes") {
  using test::ModelClass;
  const std::pair<ModelClass, ModelClass> combos[] = {
      {ModelClass::Poly, ModelClass::Poly},           {ModelClass::Poly, ModelClass::Gauss},
      {ModelClass::Gauss, ModelClass::Poly},          {ModelClass::Poly, ModelClass::Resolvent},
      {ModelClass::Resolvent, ModelClass::Poly},      {ModelClass::Gauss, ModelClass::Gauss},
      {ModelClass::Resolvent, ModelClass::Resolvent}};
  std::mt19937 rng(53);
  for (int n = 1; n <= 2; ++n) {
    int depth = 4 + n;
    for (const auto& [ca, cb] : combos) {
      auto a = test::random_model_pair(rng, n, ca, depth, Rat(1, 2));
      auto b = test::random_model_pair(rng, n, cb, depth, Rat(-1, 3));
      cplx ab = tau(pair_mul(a, b)).value, ba = tau(pair_mul(b, a)).value;
      INFO("n=" << n << " " << test::model_class_name(ca) << " x " << test::model_class_name(cb) << " " << ab << " "
                << ba);
      CHECK(std::abs(ab - ba) <= 1e-8 * std::max(1.0, std::abs(ab)));
    }
  }
}

TEST_CASE("tau is invariant under linear symplectic maps") {
  using test::ModelClass;
  std::mt19937 rng(59);
  for (int n = 1; n <= 2; ++n) {
    int depth = 4 + n;
    // polynomial pairs under general Sp(2n)
    auto p = test::random_model_pair(rng, n, ModelClass::Poly, depth);
    auto S = test::random_symplectic_subst(rng, n);
    CHECK(std::abs(tau(linear_subst(p, S)).value - tau(p).value) < 1e-12);
    // mixed classes under U(n)
    for (auto cb : {ModelClass::Gauss, ModelClass::Resolvent}) {
      auto a = test::random_model_pair(rng, n, ModelClass::Poly, depth);
      auto b = test::random_model_pair(rng, n, cb, depth);
      auto s = pair_mul(a, b);
      auto U = test::random_unitary_subst(rng, n);
      cplx t0 = tau(s).value, t1 = tau(linear_subst(s, U)).value;
      INFO(t0 << " " << t1);
      CHECK(std::abs(t0 - t1) <= 1e-8 * std::max(1.0, std::abs(t0)));
    }
  }
}

TEST_CASE("tau agrees across routes on mixed classes") {
  using test::ModelClass;
  std::mt19937 rng(61);
  for (int n = 1; n <= 2; ++n) {
    int depth = 4 + n;
    auto a = test::random_model_pair(rng, n, ModelClass::Poly, depth);
    auto g = test::random_model_pair(rng, n, ModelClass::Gauss, depth);
    auto r = test::random_model_pair(rng, n, ModelClass::Resolvent, depth);
    auto ag = pair_mul(a, g);
    cplx heat = tau(ag).value;
    CHECK(std::abs(heat - tau_numeric(ag).value) <= 1e-6 * std::max(1.0, std::abs(heat)));
    CHECK(std::abs(heat - tau_fock(ag).value) <= 1e-6 * std::max(1.0, std::abs(heat)));
    auto ar = pair_mul(a, r);
    cplx h2 = tau(ar).value;
    CHECK(std::abs(h2 - tau_numeric(ar).value) <= 1e-6 * std::max(1.0, std::abs(h2)));
  }
}
