// Independent oracles shared by the unit and acceptance tests.
#pragma once

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <numbers>

namespace heisen::test {

// Degree of the Bott map (z1, z2) -> [[z1, -conj z2], [z2, conj z1]] as the
// integral of the odd Chern form Ch_3, evaluated in Hopf coordinates
// z1 = cos(eta) e^{ip}, z2 = sin(eta) e^{iq} with Gauss quadrature.
inline double hopf_degree_oracle() {
  using M2 = std::array<std::complex<double>, 4>;
  auto mul = [](const M2& a, const M2& b) {
    return M2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
              a[2] * b[1] + a[3] * b[3]};
  };
  auto tr = [](const M2& a) { return a[0] + a[3]; };
  auto integrand = [&](double eta, double p, double q) {
    std::complex<double> I(0, 1);
    std::complex<double> z1 = std::cos(eta) * std::exp(I * p), z2 = std::sin(eta) * std::exp(I * q);
    std::complex<double> z1e = -std::sin(eta) * std::exp(I * p), z2e = std::cos(eta) * std::exp(I * q);
    std::complex<double> z1p = I * z1, z2q = I * z2;
    auto g = [](std::complex<double> a, std::complex<double> b) { return M2{a, -std::conj(b), b, std::conj(a)}; };
    M2 G = g(z1, z2), Ginv{std::conj(z1), std::conj(z2), -z2, z1};  // unitary
    M2 A = mul(Ginv, g(z1e, z2e)), B = mul(Ginv, g(z1p, 0)), C = mul(Ginv, g(0, z2q));
    (void)G;
    std::complex<double> t = 3.0 * (tr(mul(mul(A, B), C)) - tr(mul(mul(A, C), B)));
    return t;
  };
  std::complex<double> coef = -1.0 / std::pow(2 * std::numbers::pi * std::complex<double>(0, 1), 2) / 6.0;
  const int np = 16;
  std::complex<double> s = 0;
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b) {
      double p = 2 * std::numbers::pi * a / np, q = 2 * std::numbers::pi * b / np;
      s += boost::math::quadrature::gauss<double, 20>::integrate(
               [&](double eta) { return integrand(eta, p, q).real(); }, 0.0, std::numbers::pi / 2) *
           (2 * std::numbers::pi / np) * (2 * std::numbers::pi / np);
    }
  return -(coef * s).real();  // (eta, p, q) is negatively oriented
}

}  // namespace heisen::test
