/*
 * radial.hpp - radial rational functions sum_k P_k Q^{-k} and homogeneous terms.
 *
 * Canonical form: for k >= 1 every numerator P_k is reduced modulo Q, taking
 * x_1^2 as the leading monomial of Q (so no term of P_k has x_1-exponent >= 2).
 * The reduction is unique, hence equality of canonical forms is equality of
 * functions. Reduction runs from the highest k down: P = q Q + r turns
 * P Q^{-k} into r Q^{-k} + q Q^{-(k-1)}.
 */
#pragma once

#include <map>

#include "heisen/poly.hpp"

namespace heisen {

// Splits P = q*Q + r with no term of r divisible by x_1^2.
template <class T>
void divmod_Q(const Poly<T>& P, Poly<T>& q, Poly<T>& r) {
  int n = P.n();
  q = Poly<T>(n);
  std::map<Mono, T> work(P.terms().begin(), P.terms().end());
  r = Poly<T>(n);
  while (!work.empty()) {
    auto it = work.begin();
    Mono m = it->first;
    T c = it->second;
    work.erase(it);
    if (Field<T>::is_zero(c)) continue;
    if (m[0] < 2) {
      r.add_term(m, c);
      continue;
    }
    // x1^a rest = x1^{a-2} rest * (Q - sum_{v>0} v^2)
    Mono base = m;
    base[0] -= 2;
    q.add_term(base, c);
    for (int v = 1; v < 2 * n; ++v) {
      Mono mm = base;
      mm[v] += 2;
      auto [jt, ins] = work.try_emplace(mm, -c);
      if (!ins) {
        jt->second -= c;
        if (Field<T>::is_zero(jt->second)) work.erase(jt);
      }
    }
  }
}

template <class T>
class RadialRat {
 public:
  using P = Poly<T>;

  RadialRat() = default;
  explicit RadialRat(int n) : n_(n) {}
  RadialRat(const P& p, int k = 0) : n_(p.n()) {  // NOLINT(google-explicit-constructor)
    if (!p.is_zero()) terms_[k] = p;
    canonicalize();
  }

  int n() const { return n_; }
  const std::map<int, P>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_k() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  P numerator(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? P(n_) : it->second;
  }

  void add(const P& p, int k) {
    if (p.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(k, p);
    if (!ins) it->second += p;
    canonicalize();
  }

  RadialRat& operator+=(const RadialRat& o) {
    if (terms_.empty()) n_ = o.n_;
    for (const auto& [k, p] : o.terms_) {
      auto [it, ins] = terms_.try_emplace(k, p);
      if (!ins) it->second += p;
    }
    canonicalize();
    return *this;
  }
  RadialRat& operator-=(const RadialRat& o) { return *this += (-o); }
  RadialRat& operator*=(const T& s) {
    for (auto& [k, p] : terms_) p *= s;
    canonicalize();
    return *this;
  }
  friend RadialRat operator+(RadialRat a, const RadialRat& b) { return a += b; }
  friend RadialRat operator-(RadialRat a, const RadialRat& b) { return a -= b; }
  friend RadialRat operator-(RadialRat a) {
    for (auto& [k, p] : a.terms_) p = -p;
    return a;
  }
  friend RadialRat operator*(RadialRat a, const T& s) { return a *= s; }
  friend RadialRat operator*(const T& s, RadialRat a) { return a *= s; }
  friend RadialRat operator*(const RadialRat& a, const RadialRat& b) {
    RadialRat r(std::max(a.n_, b.n_));
    for (const auto& [ka, pa] : a.terms_)
      for (const auto& [kb, pb] : b.terms_) {
        P prod = pa * pb;
        auto [it, ins] = r.terms_.try_emplace(ka + kb, prod);
        if (!ins) it->second += prod;
      }
    r.canonicalize();
    return r;
  }
  friend bool operator==(const RadialRat& a, const RadialRat& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const RadialRat& a, const RadialRat& b) { return !(a == b); }

  // d/dv (P Q^{-k}) = (dP) Q^{-k} - 2k v P Q^{-k-1}
  RadialRat deriv(int var) const {
    RadialRat r(n_);
    for (const auto& [k, p] : terms_) {
      P dp = p.deriv(var);
      if (!dp.is_zero()) r.raw_add(dp, k);
      if (k > 0) {
        P vp = P::var(n_, var, Field<T>::from_int(-2 * k)) * p;
        r.raw_add(vp, k + 1);
      }
    }
    r.canonicalize();
    return r;
  }

  RadialRat deriv(const Mono& alpha) const {
    RadialRat r = *this;
    for (int v = 0; v < 2 * n_; ++v)
      for (int e = 0; e < alpha[v]; ++e) r = r.deriv(v);
    return r;
  }

  // Homogeneity degree if every term agrees, otherwise false.
  bool homogeneous_degree(int& d) const {
    bool first = true;
    for (const auto& [k, p] : terms_)
      for (const auto& [m, c] : p.terms()) {
        int dd = mono_degree(m) - 2 * k;
        if (first) {
          d = dd;
          first = false;
        } else if (dd != d) {
          return false;
        }
      }
    return true;
  }

  // Restriction to the unit sphere Q = 1, as a polynomial.
  P on_unit_sphere() const {
    P s(n_);
    for (const auto& [k, p] : terms_) s += p;
    return s;
  }

  cplx eval(const double* v) const {
    double q = 0.0;
    for (int i = 0; i < 2 * n_; ++i) q += v[i] * v[i];
    cplx s = 0.0;
    for (const auto& [k, p] : terms_) s += p.eval(v) * std::pow(q, -k);
    return s;
  }

  RadialRat linear_subst(const std::vector<T>& M) const {
    RadialRat r(n_);
    for (const auto& [k, p] : terms_) r.raw_add(p.linear_subst(M), k);
    r.canonicalize();
    return r;
  }

  template <class U>
  RadialRat<U> cast() const {
    RadialRat<U> r(n_);
    for (const auto& [k, p] : terms_) r.add(p.template cast<U>(), k);
    return r;
  }

  template <class Fn>
  RadialRat map_polys(Fn&& f) const {
    RadialRat r(n_);
    for (const auto& [k, p] : terms_) r.raw_add(f(p), k);
    r.canonicalize();
    return r;
  }

  double max_abs_coeff() const {
    double a = 0.0;
    for (const auto& [k, p] : terms_) a = std::max(a, p.max_abs_coeff());
    return a;
  }

 private:
  void raw_add(const P& p, int k) {
    auto [it, ins] = terms_.try_emplace(k, p);
    if (!ins) it->second += p;
  }

  void canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    if (terms_.empty()) return;
    for (int k = terms_.rbegin()->first; k >= 1; --k) {
      auto it = terms_.find(k);
      if (it == terms_.end()) continue;
      P q, r;
      divmod_Q(it->second, q, r);
      if (q.is_zero()) continue;
      it->second = r;
      raw_add(q, k - 1);
    }
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }

  int n_ = 1;
  std::map<int, P> terms_;
};

// A RadialRat with its homogeneity degree recorded and checked.
template <class T>
struct HomTerm {
  RadialRat<T> value;
  int hdeg = 0;

  HomTerm() = default;
  HomTerm(RadialRat<T> v, int d) : value(std::move(v)), hdeg(d) {
    int dd;
    if (!value.homogeneous_degree(dd)) throw DomainError("HomTerm: value is not homogeneous");
    if (!value.is_zero() && dd != hdeg) throw DomainError("HomTerm: degree mismatch");
  }
  bool is_zero() const { return value.is_zero(); }
  HomTerm deriv(int var) const { return HomTerm(value.deriv(var), hdeg - 1); }
};

using RadialRatC = RadialRat<CRat>;
using RadialRatD = RadialRat<cplx>;

}  // namespace heisen
