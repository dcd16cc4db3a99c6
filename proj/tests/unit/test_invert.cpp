#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include "doctest.h"
#include "heisen/fock.hpp"
#include "heisen/invert.hpp"

using namespace heisen;

namespace {
PolyC one(int n) { return PolyC::constant(n, CRat(1)); }

void check_identity_expansion(const PhgExpansion<CRat>& e) {
  CHECK(e.terms[0] == RadialRatC(one(e.n)));
  for (int j = 1; j <= e.depth; ++j) CHECK(e.terms[j].is_zero());
}

// (f s + (1 - s), 1) with the expansion of the identity on both sides
PairedSymbol<CRat> toeplitz_pair(int n, const CRat& f, int depth) {
  auto p = make_paired(expand(SymbolC(one(n)), 0, depth));
  p.plus.closure = SymbolC(one(n)) + vacuum_symbol(n) * (f - CRat(1));
  return p;
}

SymbolC closure_product(const SymbolC& a, const SymbolC& b) { return symbol_star(a, b); }
}  // namespace

TEST_CASE("invert the identity") {
  for (int n = 1; n <= 2; ++n) {
    auto id = scalar_pair(n, CRat(1), 4);
    auto inv = invert(id, 4);
    check_identity_expansion(inv.plus);
    check_identity_expansion(inv.minus);
    CHECK(*inv.plus.closure == SymbolC(one(n)));
  }
}

TEST_CASE("invert the Q - gamma pair") {
  for (int n = 1; n <= 2; ++n) {
    Rat g(1, 3);
    int depth = n + 3;
    auto s = make_paired(expand(SymbolC(PolyC::Q(n) - one(n) * CRat(g)), 2, depth));
    auto inv = invert(s, depth);
    CHECK(inv.order() == -2);
    CHECK(inv.plus.terms[0] == RadialRatC(one(n), 1));
    REQUIRE(inv.plus.closure.has_value());
    CHECK(*inv.plus.closure == SymbolC::resolvent(one(n), g));
    CHECK(*inv.minus.closure == SymbolC::resolvent(one(n), -g));
    // the inverse expansion is the Watson expansion of the resolvent
    auto w = expand(SymbolC::resolvent(one(n), g), -2, depth);
    for (int j = 0; j <= depth; ++j) CHECK(inv.plus.terms[j] == w.terms[j]);
    auto prod = pair_mul(s, inv);
    check_identity_expansion(prod.plus);
    check_identity_expansion(prod.minus);
    auto prod2 = pair_mul(inv, s);
    check_identity_expansion(prod2.plus);
    // the composed closure equals 1 pointwise
    for (double r : {0.3, 1.1, 2.7}) {
      std::vector<double> v(2 * n, 0.0);
      v[0] = r * 0.6;
      v[2 * n - 1] = r * 0.8;
      CHECK(std::abs(prod.plus.closure->eval(v) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("inverse resolvent matches the spectral inverse") {
  // <k|Op(F)|k> = int_0^inf F(q) (-1)^k L_k(2q) e^{-q} dq for n = 1
  Rat g(1, 3);
  auto s = make_paired(expand(SymbolC(PolyC::Q(1) - one(1) * CRat(g)), 2, 4));
  SymbolC F = *invert(s, 4).plus.closure;
  boost::math::quadrature::exp_sinh<double> es;
  for (unsigned k = 0; k <= 4; ++k) {
    double v = es.integrate([&](double q) {
      if (q > 700) return 0.0;
      double pt[2] = {std::sqrt(q), 0.0};
      double sign = (k % 2) ? -1.0 : 1.0;
      return F.eval(pt).real() * sign * boost::math::laguerre(k, 2 * q) * std::exp(-q);
    });
    CHECK(std::abs(v - 1.0 / (2.0 * k + 1.0 - g.get_d())) < 1e-9);
  }
}

TEST_CASE("invert Toeplitz symbols") {
  for (int n = 1; n <= 2; ++n) {
    CRat f(Rat(3, 5), Rat(4, 5));
    auto t = toeplitz_pair(n, f, 3);
    auto inv = invert(t, 3);
    SymbolC expect = SymbolC(one(n)) + vacuum_symbol(n) * (CRat(1) / f - CRat(1));
    CHECK(*inv.plus.closure == expect);
    CHECK(*inv.minus.closure == SymbolC(one(n)));
    CHECK(closure_product(*t.plus.closure, *inv.plus.closure) == SymbolC(one(n)));
  }
  // 2 x 2 rational rotation
  int n = 1;
  CRat f[4] = {CRat(Rat(3, 5)), CRat(Rat(-4, 5)), CRat(Rat(4, 5)), CRat(Rat(3, 5))};
  MatrixSymbol<CRat> m{2, {}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto p = make_paired(expand(SymbolC(PolyC::constant(n, CRat(i == j ? 1 : 0))), 0, 3));
      p.plus.closure = SymbolC(PolyC::constant(n, CRat(i == j ? 1 : 0))) +
                       vacuum_symbol(n) * (f[i * 2 + j] - CRat(i == j ? 1 : 0));
      m.e.push_back(p);
    }
  auto mi = invert(m, 3);
  auto prod = m * mi;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      REQUIRE(prod.at(i, j).plus.closure.has_value());
      CHECK(*prod.at(i, j).plus.closure == SymbolC(PolyC::constant(n, CRat(i == j ? 1 : 0))));
      // f^{-1} = f^T
      SymbolC expect = SymbolC(PolyC::constant(n, CRat(i == j ? 1 : 0))) +
                       vacuum_symbol(n) * (f[j * 2 + i] - CRat(i == j ? 1 : 0));
      CHECK(*mi.at(i, j).plus.closure == expect);
    }
}

TEST_CASE("invert a higher Hermite perturbation") {
  for (int n = 1; n <= 2; ++n) {
    SymbolC a = SymbolC(one(n)) + SymbolC::gauss(PolyC::Q(n) * CRat(Rat(1, 3)) + PolyC::x(n, 0), Rat(1));
    auto p = make_paired(expand(SymbolC(one(n)), 0, 3));
    p.plus.closure = a;
    auto inv = invert(p, 3);
    CHECK(symbol_star(a, *inv.plus.closure) == SymbolC(one(n)));
    CHECK(symbol_star(*inv.plus.closure, a) == SymbolC(one(n)));
  }
}

TEST_CASE("invert errors") {
  // order 1
  auto x = make_paired(expand(SymbolC(PolyC::x(1, 0)), 1, 3));
  CHECK_THROWS_AS(invert(x, 3), NotElliptic);
  // leading term not C Q
  PolyC q2 = PolyC::x(1, 0) * PolyC::x(1, 0) + PolyC::xi(1, 0) * PolyC::xi(1, 0) * CRat(2);
  CHECK_THROWS_AS(invert(make_paired(expand(SymbolC(q2), 2, 3)), 3), NotElliptic);
  // gamma on the spectrum of Q (plus side) or of -Q (minus side)
  for (int n = 1; n <= 2; ++n)
    for (int g : {n, n + 2, -n, -(n + 4)}) {
      CAPTURE(g);
      auto s = make_paired(expand(SymbolC(PolyC::Q(n) - PolyC::constant(n, CRat(Rat(g)))), 2, 3));
      CHECK_THROWS_AS(invert(s, 3), NotElliptic);
    }
  // singular constant matrix
  MatrixSymbol<CRat> m{2, {}};
  for (int i = 0; i < 4; ++i) m.e.push_back(scalar_pair(1, CRat(1), 3));
  CHECK_THROWS_AS(invert(m, 3), NotElliptic);
  // Schwartz part outside the Hermite class
  auto p = scalar_pair(1, CRat(1), 3);
  p.plus.closure = SymbolC(one(1)) + SymbolC::gauss(one(1), Rat(1, 2));
  CHECK_THROWS_AS(invert(p, 3), DomainError);
}
