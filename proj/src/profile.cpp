#include "heisen/profile.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "heisen/errors.hpp"
#include "heisen/special.hpp"

namespace heisen {

void check_resolvent_parameter(int n, const Rat& gamma) {
  if (!(abs(gamma) < n)) throw DomainError("resolvent profile needs |gamma| < n");
}

std::pair<Rat, Rat> resolvent_weight_exponents(int n, const Rat& gamma) {
  return {(gamma + n) / 2 - 1, (Rat(n) - gamma) / 2 - 1};
}

Rat gen_binomial(const Rat& a, int j) {
  Rat c = 1;
  for (int i = 0; i < j; ++i) c *= (a - i) / (i + 1);
  return c;
}

std::vector<Rat> resolvent_weight_taylor(int n, const Rat& gamma, int J) {
  auto [a, b] = resolvent_weight_exponents(n, gamma);
  std::vector<Rat> p(J + 1), m(J + 1), w(J + 1);
  for (int j = 0; j <= J; ++j) {
    p[j] = gen_binomial(a, j);
    m[j] = gen_binomial(b, j) * ((j % 2) ? -1 : 1);
  }
  for (int j = 0; j <= J; ++j)
    for (int i = 0; i <= j; ++i) w[j] += p[i] * m[j - i];
  return w;
}

double resolvent_weight(int n, double gamma, double u) {
  double a = (gamma + n) / 2 - 1, b = (n - gamma) / 2 - 1;
  return std::pow(1 + u, a) * std::pow(1 - u, b);
}

double resolvent_profile(int n, const Rat& gamma, int k, double Q) {
  check_resolvent_parameter(n, gamma);
  double g = gamma.get_d();
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  double umax = Q > 60.0 ? 60.0 / Q : 1.0;
  auto f = [&](double u, double uc) {
    // right half: uc = umax - u, accurate near the endpoint singularity
    double one_minus = (umax == 1.0 && u > 0.5) ? uc : 1.0 - u;
    double a = (g + n) / 2 - 1, b = (n - g) / 2 - 1;
    double w = std::pow(1 + u, a) * std::pow(one_minus, b);
    double s = (k % 2) ? -std::pow(u, k) : std::pow(u, k);
    return s * w * std::exp(-Q * u);
  };
  double err = 0.0;
  double v = integrator.integrate(f, 0.0, umax, 1e-14, &err);
  if (!(err <= 1e-9 * std::max(1.0, std::abs(v)))) throw QuadratureNotConverged("resolvent profile");
  return v;
}

double resolvent_profile_asymptotic(int n, const Rat& gamma, int k, double Q) {
  check_resolvent_parameter(n, gamma);
  const int J = 200;
  static thread_local std::vector<double> cache;
  static thread_local int cache_n = -1;
  static thread_local Rat cache_g;
  if (cache_n != n || cache_g != gamma) {
    cache.clear();
    for (const auto& w : resolvent_weight_taylor(n, gamma, J)) cache.push_back(w.get_d());
    cache_n = n;
    cache_g = gamma;
  }
  double sign = (k % 2) ? -1.0 : 1.0;
  double sum = 0.0, prev = INFINITY;
  // w_j (j+k)! / Q^{j+k+1}, computed by recurrence on the factorial ratio
  double fac = std::tgamma(k + 1.0) / std::pow(Q, k + 1);
  for (int j = 0; j <= J; ++j) {
    if (j > 0) fac *= (j + k) / Q;
    double t = cache[j] * fac;
    if (std::abs(t) > prev && j > 2) break;
    sum += t;
    if (t != 0.0) prev = std::abs(t);
  }
  return sign * sum;
}

}  // namespace heisen
