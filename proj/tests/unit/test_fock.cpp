#include <boost/math/quadrature/exp_sinh.hpp>
#include <random>

#include "doctest.h"
#include "heisen/fock.hpp"
#include "heisen/moyal.hpp"
#include "test_util.hpp"

using namespace heisen;

namespace {
const CRat I(Rat(0), Rat(1));

// Rows and columns with occupation <= limit must agree exactly.
bool interior_equal(const FockOp<CRat>& a, const FockOp<CRat>& b, int limit) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (a.basis.total(i) <= limit && a.basis.total(j) <= limit && a(i, j) != b(i, j)) return false;
  return true;
}

FockOp<CRat> matmul(const FockOp<CRat>& a, const FockOp<CRat>& b) {
  FockOp<CRat> c = a;
  int d = a.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CRat s;
      for (int k = 0; k < d; ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}
}  // namespace

TEST_CASE("basis layout") {
  FockBasis b(2, 3);
  CHECK(b.dim() == 10);
  CHECK(b.state(0) == Occ{0, 0, 0, 0});
  CHECK(b.state(1) == Occ{1, 0, 0, 0});
  CHECK(b.state(2) == Occ{0, 1, 0, 0});
  CHECK(FockBasis(1, 24).dim() == 25);
  CHECK(FockBasis(2, 12).dim() == 91);
}

TEST_CASE("quantize_poly examples") {
  FockBasis b(1, 8);
  auto q = quantize_poly_exact(PolyC::Q(1), b);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) CHECK(q(i, j) == (i == j ? CRat(2 * i + 1) : CRat(0)));
  auto id = quantize_poly(PolyD::constant(1, 1.0), b);
  for (int i = 0; i < b.dim(); ++i) CHECK(id(i, i) == cplx(1.0));
  // Op(x xi) = (X P + P X)/2 with X = (a + a*)/sqrt2, P = -i (a - a*)/sqrt2
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
  for (int k = 1; k < b.dim(); ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::MatrixXcd X = (a + a.adjoint()) / std::sqrt(2.0);
  Eigen::MatrixXcd D = (a - a.adjoint()) / std::sqrt(2.0);
  Eigen::MatrixXcd expect = cplx(0, -1) * (X * D + D * X) / 2.0;
  auto m = to_eigen(quantize_poly(PolyD::x(1, 0) * PolyD::xi(1, 0), b));
  CHECK((m - expect).topLeftCorner(3, 3).norm() < 1e-14);
  // n = 2: H has eigenvalue 2N + 2
  FockBasis b2(2, 4);
  auto q2 = quantize_poly_exact(PolyC::Q(2), b2);
  for (int i = 0; i < b2.dim(); ++i) CHECK(q2(i, i) == CRat(2 * b2.total(i) + 2));
}

TEST_CASE("quantization is a homomorphism on the interior") {
  std::mt19937 rng(31);
  for (int n = 1; n <= 2; ++n) {
    FockBasis b(n, n == 1 ? 14 : 9);
    for (int t = 0; t < 3; ++t) {
      PolyC p = test::random_poly(rng, n, 4, 3), q = test::random_poly(rng, n, 4, 3);
      auto lhs = matmul(quantize_poly_exact(p, b), quantize_poly_exact(q, b));
      auto rhs = quantize_poly_exact(poly_star(p, q), b);
      CHECK(interior_equal(lhs, rhs, b.cutoff() - 4));
    }
  }
}

TEST_CASE("gaussian kernel agrees with Fock matrix products") {
  std::mt19937 rng(37);
  for (int n = 1; n <= 2; ++n) {
    FockBasis b(n, n == 1 ? 14 : 8);
    for (int t = 0; t < 2; ++t) {
      PolyC p = test::random_poly(rng, n, 2, 2), q = test::random_poly(rng, n, 2, 2);
      Rat l(1, 2), m(1, 3);
      SymbolC prod = symbol_star(SymbolC::gauss(p, l), SymbolC::gauss(q, m));
      const auto& [pr, pp] = *prod.parts().begin();
      auto rhs = quantize_gauss_exact(pp, pr.param, b);
      auto lhs = matmul(quantize_gauss_exact(p, l, b), quantize_gauss_exact(q, m, b));
      // banded operators: exact away from the cutoff
      CHECK(interior_equal(lhs, rhs, b.cutoff() - 4));
      // polynomial times gaussian
      SymbolC pg = symbol_star(SymbolC(q), SymbolC::gauss(p, l));
      const auto& [pr2, pp2] = *pg.parts().begin();
      auto lhs2 = matmul(quantize_poly_exact(q, b), quantize_gauss_exact(p, l, b));
      CHECK(interior_equal(lhs2, quantize_gauss_exact(pp2, pr2.param, b), b.cutoff() - 4));
    }
  }
}

TEST_CASE("vacuum projection and matrix units") {
  for (int n = 1; n <= 2; ++n) {
    FockBasis b(n, 5);
    SymbolC s = vacuum_symbol(n);
    const auto& [pr, p] = *s.parts().begin();
    auto op = quantize_gauss_exact(p, pr.param, b);
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j) CHECK(op(i, j) == (i == 0 && j == 0 ? CRat(1) : CRat(0)));
    CHECK(op.trace() == CRat(1));
  }
  FockBasis b(2, 4);
  Occ k{1, 0, 0, 0}, l{0, 2, 0, 0};
  SymbolC E = matrix_unit_symbol(2, k, l);
  const auto& [pr, p] = *E.parts().begin();
  auto op = quantize_gauss_exact(p, pr.param, b);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      CHECK(op(i, j) == ((b.state(i) == k && b.state(j) == l) ? CRat(1) : CRat(0)));
}

TEST_CASE("Mehler symbol") {
  for (double t : {0.2, 1.0}) {
    FockBasis b(1, 24);
    auto m = quantize_symbol(mehler_symbol(1, t), b);
    // H is diagonal with entries 2k + 1
    auto h = to_eigen(quantize_poly(PolyD::Q(1), b));
    Eigen::MatrixXcd ex = Eigen::MatrixXcd::Zero(b.dim(), b.dim());
    for (int k = 0; k < b.dim(); ++k) ex(k, k) = std::exp(-t * h(k, k));
    CHECK((to_eigen(m) - ex).norm() < 1e-12);
  }
  // semigroup, exact in the lambda parameters
  Rat l1(1, 3), l2(1, 4);
  SymbolC a = SymbolC::gauss(PolyC::constant(1, CRat(1)), l1), c = SymbolC::gauss(PolyC::constant(1, CRat(1)), l2);
  auto p = symbol_star(a, c);
  CHECK(p.parts().begin()->first.param == (l1 + l2) / (1 + l1 * l2));
}

TEST_CASE("h^{-z} coefficients") {
  for (cplx z : {cplx(0.3), cplx(1, 1), cplx(2.5)}) {
    auto a = hz_coefficients(z, 4, 1);
    CHECK(std::abs(a[0] - 1.0) < 1e-15);
    auto u = hz_series_in_u(z, 4, 1);
    for (int k = 1; k < 8; k += 2) CHECK(std::abs(u[k]) < 1e-14);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(u[2 * k] - a[k]) < 1e-13);
    for (int j = 0; j < 9; ++j) CHECK(std::abs(hz_term(z, j, 1) - hz_term_from_u_series(z, j, 1)) < 1e-12);
  }
  // numeric oracle: Gamma(z) h^{-z}(Q) = int t^{z-1} cosh^{-n} t e^{-Q tanh t} dt,
  // so (Q^z h^{-z} - 1) Q^2 -> h_4 as Q grows
  for (int n = 1; n <= 2; ++n) {
    double z = 2.5;
    auto val = [&](double Q) {
      boost::math::quadrature::exp_sinh<double> es;
      double v = es.integrate([&](double t) { return std::pow(t, z - 1) * std::pow(std::cosh(t), -n) * std::exp(-Q * std::tanh(t)); });
      return v / std::tgamma(z);
    };
    double h4 = hz_term(z, 4, n).real();
    double h8 = hz_term(z, 8, n).real();
    double h12 = hz_term(z, 12, n).real();
    for (double Q : {40.0, 80.0}) {
      double est = (val(Q) * std::pow(Q, z) - 1.0) * Q * Q;
      double tail = h12 / std::pow(Q, 4);
      CHECK(std::abs(est - h4 - h8 / (Q * Q) - tail) < 0.1 * std::abs(tail) + 1e-9);
    }
    CHECK(std::abs(h4) > 1e-3);
  }
}
