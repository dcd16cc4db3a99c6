/*
 * symbol.hpp - evaluable closed-form symbols.
 *
 * A Symbol is a finite sum of P_p(x, xi) * g_p(Q) over radial profiles
 *   One            g = 1
 *   Gauss(l)       g = exp(-l Q), l > 0 rational
 *   Resolvent(c,k) g = F_c^{(k)}(Q), the k-th derivative of the symbol of
 *                  (H - c)^{-1} (see profile.hpp)
 * The class is closed under partial derivatives and under multiplication by
 * polynomials, which is everything the bidifferential Moyal terms need.
 */
#pragma once

#include <map>
#include <vector>

#include "heisen/poly.hpp"
#include "heisen/profile.hpp"

namespace heisen {

enum class ClassTag { Rational, Gaussian, Resolvent, None };
const char* class_tag_name(ClassTag t);

struct Profile {
  enum Kind { One = 0, Gauss = 1, Resolvent = 2 };
  Kind kind = One;
  Rat param = 0;
  int deriv = 0;

  static Profile one() { return {}; }
  static Profile gauss(const Rat& l) { return {Gauss, l, 0}; }
  static Profile resolvent(const Rat& c, int k = 0) { return {Resolvent, c, k}; }

  friend bool operator<(const Profile& a, const Profile& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.param != b.param) return a.param < b.param;
    return a.deriv < b.deriv;
  }
  friend bool operator==(const Profile& a, const Profile& b) {
    return a.kind == b.kind && a.param == b.param && a.deriv == b.deriv;
  }
};

template <class T>
class Symbol {
 public:
  using P = Poly<T>;
  using F = Field<T>;

  Symbol() = default;
  explicit Symbol(int n) : n_(n) {}
  Symbol(const P& p) : n_(p.n()) { add(Profile::one(), p); }  // NOLINT(google-explicit-constructor)

  static Symbol gauss(const P& p, const Rat& lambda) {
    if (sgn(lambda) <= 0) throw DomainError("gaussian class needs lambda > 0");
    Symbol s(p.n());
    s.add(Profile::gauss(lambda), p);
    return s;
  }
  static Symbol resolvent(const P& p, const Rat& gamma, int k = 0) {
    check_resolvent_parameter(p.n(), gamma);
    Symbol s(p.n());
    s.add(Profile::resolvent(gamma, k), p);
    return s;
  }

  int n() const { return n_; }
  const std::map<Profile, P>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  bool is_poly() const {
    return parts_.empty() || (parts_.size() == 1 && parts_.begin()->first.kind == Profile::One);
  }
  bool has_kind(Profile::Kind k) const {
    for (const auto& [pr, p] : parts_)
      if (pr.kind == k) return true;
    return false;
  }
  ClassTag tag() const {
    if (has_kind(Profile::Resolvent)) return ClassTag::Resolvent;
    if (has_kind(Profile::Gauss)) return ClassTag::Gaussian;
    return ClassTag::Rational;
  }

  P poly_part() const {
    auto it = parts_.find(Profile::one());
    return it == parts_.end() ? P(n_) : it->second;
  }
  Symbol without_poly() const {
    Symbol s = *this;
    s.parts_.erase(Profile::one());
    return s;
  }
  Symbol only_kind(Profile::Kind k) const {
    Symbol s(n_);
    for (const auto& [pr, p] : parts_)
      if (pr.kind == k) s.parts_.emplace(pr, p);
    return s;
  }

  Symbol& add(const Profile& pr, const P& p) {
    if (p.is_zero()) return *this;
    if (parts_.empty()) n_ = p.n();
    auto [it, ins] = parts_.try_emplace(pr, p);
    if (!ins) {
      it->second += p;
      if (it->second.is_zero()) parts_.erase(it);
    }
    return *this;
  }

  Symbol& operator+=(const Symbol& o) {
    for (const auto& [pr, p] : o.parts_) add(pr, p);
    return *this;
  }
  Symbol& operator-=(const Symbol& o) {
    for (const auto& [pr, p] : o.parts_) add(pr, -p);
    return *this;
  }
  Symbol& operator*=(const T& s) {
    if (F::is_zero(s)) parts_.clear();
    for (auto& [pr, p] : parts_) p *= s;
    return *this;
  }
  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  friend Symbol operator-(const Symbol& a) { return a * (-F::one()); }
  friend Symbol operator*(Symbol a, const T& s) { return a *= s; }
  friend Symbol operator*(const T& s, Symbol a) { return a *= s; }
  friend bool operator==(const Symbol& a, const Symbol& b) { return a.parts_ == b.parts_; }
  friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }

  // Pointwise product. Gauss profiles multiply; resolvent profiles only
  // combine with polynomials.
  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    Symbol r(std::max(a.n_, b.n_));
    for (const auto& [pa, Pa] : a.parts_)
      for (const auto& [pb, Pb] : b.parts_) {
        Profile pr;
        if (pa.kind == Profile::One) {
          pr = pb;
        } else if (pb.kind == Profile::One) {
          pr = pa;
        } else if (pa.kind == Profile::Gauss && pb.kind == Profile::Gauss) {
          pr = Profile::gauss(pa.param + pb.param);
        } else {
          throw MissingClosure("pointwise product of resolvent profiles");
        }
        r.add(pr, Pa * Pb);
      }
    return r;
  }
  friend Symbol operator*(const P& a, const Symbol& b) { return Symbol(a) * b; }

  Symbol deriv(int var) const {
    Symbol r(n_);
    for (const auto& [pr, p] : parts_) {
      P dp = p.deriv(var);
      P vp = P::var(n_, var, F::from_int(2)) * p;
      switch (pr.kind) {
        case Profile::One:
          r.add(pr, dp);
          break;
        case Profile::Gauss:
          r.add(pr, dp - vp * F::from_rat(pr.param));
          break;
        case Profile::Resolvent:
          r.add(pr, dp);
          r.add(Profile::resolvent(pr.param, pr.deriv + 1), vp);
          break;
      }
    }
    return r;
  }
  Symbol deriv(const Mono& alpha) const {
    Symbol r = *this;
    for (int v = 0; v < 2 * n_; ++v)
      for (int e = 0; e < alpha[v]; ++e) r = r.deriv(v);
    return r;
  }

  cplx eval(const double* v) const {
    double q = 0.0;
    for (int i = 0; i < 2 * n_; ++i) q += v[i] * v[i];
    cplx s = 0.0;
    for (const auto& [pr, p] : parts_) {
      double g = 1.0;
      if (pr.kind == Profile::Gauss) g = std::exp(-pr.param.get_d() * q);
      if (pr.kind == Profile::Resolvent) g = resolvent_profile(n_, pr.param, pr.deriv, q);
      s += p.eval(v) * g;
    }
    return s;
  }
  cplx eval(const std::vector<double>& v) const { return eval(v.data()); }

  // Linear change of variables v -> M v. Non-polynomial parts need M to
  // preserve Q (orthogonal).
  Symbol linear_subst(const std::vector<T>& M) const {
    if (!is_poly()) {
      int nv = 2 * n_;
      for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) {
          T s = F::zero();
          for (int k = 0; k < nv; ++k) s += M[k * nv + i] * M[k * nv + j];
          if (F::abs(s - (i == j ? F::one() : F::zero())) > 1e-12)
            throw DomainError("substitution does not preserve Q");
        }
    }
    Symbol r(n_);
    for (const auto& [pr, p] : parts_) r.add(pr, p.linear_subst(M));
    return r;
  }

  template <class U>
  Symbol<U> cast() const {
    Symbol<U> r(n_);
    for (const auto& [pr, p] : parts_) r.add(pr, p.template cast<U>());
    return r;
  }

 private:
  int n_ = 1;
  std::map<Profile, P> parts_;
};

using SymbolC = Symbol<CRat>;
using SymbolD = Symbol<cplx>;

}  // namespace heisen
