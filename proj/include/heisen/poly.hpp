/*
 * poly.hpp - sparse polynomials in (x_1..x_n, xi_1..xi_n).
 *
 * Variable index j < n is x_{j+1}, index n + j is xi_{j+1}. Terms live in a
 * std::map keyed by the exponent array, so the term order is canonical and
 * equality is structural. Zero coefficients are never stored.
 */
#pragma once

#include <array>
#include <climits>
#include <cstdint>
#include <map>
#include <vector>

#include "heisen/errors.hpp"
#include "heisen/scalar.hpp"

namespace heisen {

constexpr int kMaxVars = 8;
constexpr int kNegInfDegree = INT_MIN;

using Mono = std::array<uint8_t, kMaxVars>;

inline int mono_degree(const Mono& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

template <class T>
class Poly {
 public:
  using F = Field<T>;

  Poly() = default;
  explicit Poly(int n) : n_(n) {
    if (n < 1 || 2 * n > kMaxVars) throw DomainError("Poly: unsupported number of pairs");
  }

  static Poly constant(int n, const T& c) {
    Poly p(n);
    p.add_term(Mono{}, c);
    return p;
  }
  static Poly var(int n, int idx, const T& c = F::one()) {
    Poly p(n);
    Mono m{};
    m[idx] = 1;
    p.add_term(m, c);
    return p;
  }
  static Poly x(int n, int j) { return var(n, j); }
  static Poly xi(int n, int j) { return var(n, n + j); }
  // Q = sum of squares of all 2n variables.
  static Poly Q(int n) {
    Poly p(n);
    for (int v = 0; v < 2 * n; ++v) {
      Mono m{};
      m[v] = 2;
      p.add_term(m, F::one());
    }
    return p;
  }

  int n() const { return n_; }
  int nvars() const { return 2 * n_; }
  const std::map<Mono, T>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  int degree() const {
    int d = kNegInfDegree;
    for (const auto& [m, c] : terms_) d = std::max(d, mono_degree(m));
    return d;
  }
  int min_degree() const {
    int d = INT_MAX;
    for (const auto& [m, c] : terms_) d = std::min(d, mono_degree(m));
    return terms_.empty() ? kNegInfDegree : d;
  }
  bool is_homogeneous(int d) const {
    for (const auto& [m, c] : terms_)
      if (mono_degree(m) != d) return false;
    return true;
  }
  T coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? F::zero() : it->second;
  }
  T constant_term() const { return coeff(Mono{}); }

  Poly& add_term(const Mono& m, const T& c) {
    if (F::is_zero(c)) return *this;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (F::is_zero(it->second)) terms_.erase(it);
    }
    return *this;
  }

  Poly& operator+=(const Poly& o) {
    adopt_n(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    adopt_n(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const T& s) {
    if (F::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const T& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) { return mul(a, b); }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  static Poly mul(const Poly& a, const Poly& b) {
    Poly r(std::max(a.n_, b.n_));
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m;
        for (int v = 0; v < kMaxVars; ++v) m[v] = static_cast<uint8_t>(ma[v] + mb[v]);
        r.add_term(m, ca * cb);
      }
    return r;
  }

  Poly pow(int k) const {
    Poly r = constant(n_, F::one());
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  Poly deriv(int var) const {
    Poly r(n_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Mono mm = m;
      mm[var] -= 1;
      r.add_term(mm, c * F::from_int(m[var]));
    }
    return r;
  }

  // Mixed partial derivative with multi-index `alpha` over the 2n variables.
  Poly deriv(const Mono& alpha) const {
    Poly r(n_);
    for (const auto& [m, c] : terms_) {
      Mono mm = m;
      long coef = 1;
      bool zero = false;
      for (int v = 0; v < kMaxVars && !zero; ++v) {
        if (alpha[v] > m[v]) {
          zero = true;
          break;
        }
        for (int t = 0; t < alpha[v]; ++t) coef *= (m[v] - t);
        mm[v] = static_cast<uint8_t>(m[v] - alpha[v]);
      }
      if (!zero) r.add_term(mm, c * F::from_int(coef));
    }
    return r;
  }

  Poly homogeneous_part(int d) const {
    Poly r(n_);
    for (const auto& [m, c] : terms_)
      if (mono_degree(m) == d) r.terms_.emplace(m, c);
    return r;
  }

  // Multiplies each coefficient by `f(monomial)`; used for parity twists.
  template <class Fn>
  Poly map_coeffs(Fn&& f) const {
    Poly r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(m, c));
    return r;
  }

  cplx eval(const double* v) const {
    cplx s = 0.0;
    for (const auto& [m, c] : terms_) {
      double p = 1.0;
      for (int k = 0; k < 2 * n_; ++k)
        for (int e = 0; e < m[k]; ++e) p *= v[k];
      s += F::to_cplx(c) * p;
    }
    return s;
  }
  cplx eval(const std::vector<double>& v) const { return eval(v.data()); }

  // Substitutes v_i -> sum_j M[i][j] v_j (M is 2n x 2n, row-major).
  Poly linear_subst(const std::vector<T>& M) const {
    int nv = 2 * n_;
    std::vector<Poly> lin(nv, Poly(n_));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        Mono m{};
        m[j] = 1;
        lin[i].add_term(m, M[i * nv + j]);
      }
    Poly r(n_);
    for (const auto& [m, c] : terms_) {
      Poly t = constant(n_, c);
      for (int i = 0; i < nv; ++i)
        for (int e = 0; e < m[i]; ++e) t = t * lin[i];
      r += t;
    }
    return r;
  }

  template <class U>
  Poly<U> cast() const {
    Poly<U> r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, field_cast<U>(c));
    return r;
  }

  double max_abs_coeff() const {
    double a = 0.0;
    for (const auto& [m, c] : terms_) a = std::max(a, F::abs(c));
    return a;
  }

 private:
  void adopt_n(const Poly& o) {
    if (terms_.empty() && n_ != o.n_) n_ = o.n_;
  }

  int n_ = 1;
  std::map<Mono, T> terms_;
};

using PolyC = Poly<CRat>;
using PolyD = Poly<cplx>;

}  // namespace heisen
