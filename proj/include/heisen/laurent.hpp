/*
 * laurent.hpp - truncated Laurent series in the heat parameter t.
 *
 * A LaurentT stores t^lead .. t^order; everything above `order` is unknown.
 * Products and quotients propagate the relative precision, so a result is
 * never reported beyond what its inputs determine.
 */
#pragma once

#include <algorithm>
#include <vector>

#include "heisen/errors.hpp"
#include "heisen/scalar.hpp"

namespace heisen {

constexpr int kDefaultLaurentMargin = 4;

template <class T>
class LaurentT {
 public:
  using F = Field<T>;

  LaurentT() : lead_(0), order_(0), c_(1, F::zero()) {}
  LaurentT(int lead, int order) : lead_(lead), order_(order), c_(std::max(0, order - lead + 1), F::zero()) {
    if (order < lead) throw DomainError("LaurentT: order below lead");
  }
  LaurentT(int lead, std::vector<T> coeffs)
      : lead_(lead), order_(lead + static_cast<int>(coeffs.size()) - 1), c_(std::move(coeffs)) {}

  static LaurentT constant(const T& v, int order) {
    LaurentT s(0, order);
    s.c_[0] = v;
    return s;
  }
  static LaurentT monomial(int power, const T& v, int order) {
    LaurentT s(power, order);
    s.c_[0] = v;
    return s;
  }

  int lead() const { return lead_; }
  int order() const { return order_; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int p) const {
    if (p < lead_) return F::zero();
    if (p > order_) throw DomainError("LaurentT: coefficient beyond truncation order");
    return c_[p - lead_];
  }
  T& at(int p) { return c_[p - lead_]; }

  LaurentT truncate(int order) const {
    if (order >= order_) return *this;
    LaurentT r(lead_, order);
    for (int p = lead_; p <= order; ++p) r.c_[p - lead_] = c_[p - lead_];
    return r;
  }

  friend LaurentT operator+(const LaurentT& a, const LaurentT& b) {
    LaurentT r(std::min(a.lead_, b.lead_), std::min(a.order_, b.order_));
    for (int p = r.lead_; p <= r.order_; ++p) r.c_[p - r.lead_] = a.coeff(p) + b.coeff(p);
    return r;
  }
  friend LaurentT operator-(const LaurentT& a) {
    LaurentT r = a;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend LaurentT operator-(const LaurentT& a, const LaurentT& b) { return a + (-b); }
  friend LaurentT operator*(LaurentT a, const T& s) {
    for (auto& v : a.c_) v *= s;
    return a;
  }
  friend LaurentT operator*(const T& s, LaurentT a) { return a * s; }
  friend LaurentT operator*(const LaurentT& a, const LaurentT& b) {
    int lead = a.lead_ + b.lead_;
    int order = std::min(a.order_ + b.lead_, b.order_ + a.lead_);
    LaurentT r(lead, order);
    for (int i = a.lead_; i <= a.order_; ++i) {
      if (F::is_zero(a.c_[i - a.lead_])) continue;
      for (int j = b.lead_; j <= b.order_ && i + j <= order; ++j)
        r.c_[i + j - lead] += a.c_[i - a.lead_] * b.c_[j - b.lead_];
    }
    return r;
  }

  // Multiplicative inverse; the lowest stored coefficient must be nonzero.
  LaurentT inverse() const {
    const T& a0 = c_.at(0);
    if (F::is_zero(a0)) throw DomainError("LaurentT: inverse of series with zero leading coefficient");
    int len = static_cast<int>(c_.size());
    LaurentT r(-lead_, -lead_ + len - 1);
    r.c_[0] = F::one() / a0;
    for (int k = 1; k < len; ++k) {
      T s = F::zero();
      for (int j = 1; j <= k; ++j) s += c_[j] * r.c_[k - j];
      r.c_[k] = -s / a0;
    }
    return r;
  }

  // Integer power, negative allowed.
  LaurentT pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    int len = static_cast<int>(c_.size());
    LaurentT r = monomial(0, F::one(), len - 1);
    LaurentT base = *this;
    while (k > 0) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  // Power with arbitrary exponent of a series with lead 0 and leading
  // coefficient 1 (J.C.P. Miller recurrence).
  LaurentT pow_unit(const T& a) const {
    if (lead_ != 0 || c_.at(0) != F::one()) throw DomainError("LaurentT: pow_unit needs 1 + O(t)");
    int len = static_cast<int>(c_.size());
    LaurentT r(0, len - 1);
    r.c_[0] = F::one();
    for (int k = 1; k < len; ++k) {
      T s = F::zero();
      for (int j = 1; j <= k; ++j) s += ((a + F::one()) * F::from_int(j) - F::from_int(k)) * c_[j] * r.c_[k - j];
      r.c_[k] = s / F::from_int(k);
    }
    return r;
  }

  // f(t^step) for a power series f; `step` scales exponents.
  LaurentT scale_exponents(int step) const {
    LaurentT r(lead_ * step, order_ * step);
    for (int p = lead_; p <= order_; ++p) r.c_[(p - lead_) * step] = c_[p - lead_];
    return r;
  }

  template <class U>
  LaurentT<U> cast() const {
    std::vector<U> v;
    for (const auto& x : c_) v.push_back(field_cast<U>(x));
    return LaurentT<U>(lead_, std::move(v));
  }

 private:
  int lead_;
  int order_;
  std::vector<T> c_;
};

using LaurentC = LaurentT<CRat>;
using LaurentD = LaurentT<cplx>;

}  // namespace heisen
