#include "heisen/special.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

namespace heisen {

std::string CRat::str() const {
  if (sgn(im) == 0) return re.get_str();
  if (sgn(re) == 0) return im.get_str() + "i";
  return re.get_str() + (sgn(im) > 0 ? "+" : "") + im.get_str() + "i";
}

Rat factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rat(f);
}

Rat binomial(int n, int k) {
  if (k < 0 || k > n) return Rat(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rat(b);
}

Rat bernoulli(int k) {
  static std::mutex mu;
  static std::vector<Rat> cache{Rat(1)};
  std::lock_guard<std::mutex> lock(mu);
  // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
  for (int m = static_cast<int>(cache.size()); m <= k; ++m) {
    Rat s = 0;
    for (int j = 0; j < m; ++j) s += binomial(m + 1, j) * cache[j];
    cache.push_back(-s / (m + 1));
  }
  return cache[k];
}

Rat zeta_neg(int k) {
  if (k == 0) return Rat(-1, 2);
  Rat b = bernoulli(k + 1);
  return -b / (k + 1);
}

Rat bernoulli_poly(int k, const Rat& x) {
  Rat s = 0;
  Rat xp = 1;
  for (int j = k; j >= 0; --j) {
    s += binomial(k, j) * bernoulli(j) * xp;
    xp *= x;
  }
  return s;
}

cplx PiMultiple::value() const { return coef.to_cplx() * std::pow(std::numbers::pi, pipow); }

Rat sphere_moment_over_pi_n(const Mono& alpha, int n) {
  // 2 prod Gamma((a_i+1)/2) / Gamma(|a|/2 + n), with Gamma((a+1)/2) =
  // sqrt(pi) (a-1)!! / 2^{a/2} for even a.
  int total = 0;
  Rat num = 2;
  for (int v = 0; v < 2 * n; ++v) {
    int a = alpha[v];
    if (a % 2) return Rat(0);
    total += a;
    for (int t = a - 1; t > 0; t -= 2) num *= t;
  }
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), 2, static_cast<unsigned long>(total / 2));
  return num / Rat(pw) / factorial(total / 2 + n - 1);
}

PiMultiple sphere_integral_exact(const PolyC& p) {
  PiMultiple r;
  r.pipow = p.n();
  for (const auto& [m, c] : p.terms()) r.coef += c * CRat(sphere_moment_over_pi_n(m, p.n()));
  return r;
}

cplx sphere_integral(const PolyD& p) {
  cplx s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c * sphere_moment_over_pi_n(m, p.n()).get_d();
  return s * std::pow(std::numbers::pi, p.n());
}

PiMultiple sphere_integral_exact(const RadialRatC& a) { return sphere_integral_exact(a.on_unit_sphere()); }
cplx sphere_integral(const RadialRatD& a) { return sphere_integral(a.on_unit_sphere()); }

LaurentC series_sinh_over_t(int order) {
  LaurentC s(0, order);
  for (int k = 0; 2 * k <= order; ++k) s.at(2 * k) = CRat(Rat(1) / factorial(2 * k + 1));
  return s;
}

LaurentC series_cosh(int order) {
  LaurentC s(0, order);
  for (int k = 0; 2 * k <= order; ++k) s.at(2 * k) = CRat(Rat(1) / factorial(2 * k));
  return s;
}

LaurentC series_tanh(int order) {
  // t * (sinh t / t) / cosh t
  LaurentC t = LaurentC::monomial(1, CRat(1), order);
  LaurentC r = t * series_sinh_over_t(order) * series_cosh(order).inverse();
  return r.truncate(order);
}

}  // namespace heisen
