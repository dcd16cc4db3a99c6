/*
 * paired.hpp - step-2 polyhomogeneous expansions, the involution iota,
 * paired symbols and matrix-valued paired symbols.
 *
 * Two sign conventions for the minus component coexist:
 *   Heisenberg  minus term j = (-1)^j plus term j, j counted from the order m
 *               (this is how principal symbols of Heisenberg operators pair,
 *               e.g. (Q - c, Q + c) and (i, -i));
 *   A           minus term of degree -2j = (-1)^j plus term, degrees counted
 *               absolutely (the algebra on which the trace tau lives, where
 *               (p, -p) pairs quadratic Hamiltonians).
 * They differ by (-1)^{m/2} on the minus side. The twist
 * (s+, s-) -> (s+, (-1)^{m/2} s-) is multiplicative, so products of mixed
 * conventions are carried out in A.
 */
#pragma once

#include <optional>
#include <vector>

#include "heisen/moyal.hpp"
#include "heisen/profile.hpp"

namespace heisen {

constexpr int default_depth(int n) { return n + 3; }

enum class IotaKind { Relative, Absolute };
enum class Convention { Heisenberg, A };
const char* convention_name(Convention c);

inline int parity_sign(int j) { return (j % 2 == 0) ? 1 : -1; }

template <class T>
struct PhgExpansion {
  int n = 1;
  int order = 0;
  int depth = 0;
  std::vector<RadialRat<T>> terms;  // terms[j] has degree order - 2j
  std::optional<Symbol<T>> closure;

  PhgExpansion() = default;
  PhgExpansion(int n_, int order_, int depth_) : n(n_), order(order_), depth(depth_), terms(depth_ + 1, RadialRat<T>(n_)) {}

  HomTerm<T> term(int j) const { return HomTerm<T>(terms.at(j), order - 2 * j); }
  ClassTag tag() const { return closure ? closure->tag() : ClassTag::None; }
  bool expansion_zero() const {
    for (const auto& t : terms)
      if (!t.is_zero()) return false;
    return true;
  }

  cplx eval_partial(const double* v) const {
    cplx s = 0.0;
    for (const auto& t : terms) s += t.eval(v);
    return s;
  }

  PhgExpansion with_depth(int d) const {
    PhgExpansion r = *this;
    r.depth = d;
    r.terms.resize(d + 1, RadialRat<T>(n));
    return r;
  }

  friend PhgExpansion operator+(const PhgExpansion& a, const PhgExpansion& b) {
    check_same_shape(a, b);
    PhgExpansion r(a.n, a.order, std::min(a.depth, b.depth));
    for (int j = 0; j <= r.depth; ++j) r.terms[j] = a.terms[j] + b.terms[j];
    if (a.closure && b.closure) r.closure = *a.closure + *b.closure;
    return r;
  }
  friend PhgExpansion operator*(const PhgExpansion& a, const T& s) {
    PhgExpansion r = a;
    for (auto& t : r.terms) t *= s;
    if (r.closure) *r.closure *= s;
    return r;
  }
  friend PhgExpansion operator-(const PhgExpansion& a) { return a * (-Field<T>::one()); }
  friend PhgExpansion operator-(const PhgExpansion& a, const PhgExpansion& b) { return a + (-b); }

  static void check_same_shape(const PhgExpansion& a, const PhgExpansion& b) {
    if (a.n != b.n || a.order != b.order) throw DomainError("expansions of different shape");
  }

  template <class U>
  PhgExpansion<U> cast() const {
    PhgExpansion<U> r(n, order, depth);
    for (int j = 0; j <= depth; ++j) r.terms[j] = terms[j].template cast<U>();
    if (closure) r.closure = closure->template cast<U>();
    return r;
  }
};

// Highest homogeneity degree among the parts of a closed-form symbol.
template <class T>
int infer_order(const Symbol<T>& s) {
  int m = kNegInfDegree;
  for (const auto& [pr, p] : s.parts()) {
    if (pr.kind == Profile::One) m = std::max(m, p.degree());
    if (pr.kind == Profile::Resolvent) m = std::max(m, p.degree() - 2 * (pr.deriv + 1));
  }
  return m == kNegInfDegree ? 0 : m;
}

// Expansion of a closed-form symbol: polynomial parts split by degree,
// resolvent parts by Watson's lemma, Gaussian parts contribute nothing.
template <class T>
PhgExpansion<T> expand(const Symbol<T>& s, int order, int depth) {
  int n = s.n();
  PhgExpansion<T> e(n, order, depth);
  auto place = [&](const Poly<T>& p, int k, const T& c) {
    for (int d = std::max(0, p.min_degree()); d <= p.degree(); ++d) {
      Poly<T> pd = p.homogeneous_part(d);
      if (pd.is_zero()) continue;
      int hdeg = d - 2 * k;
      if (hdeg > order || (order - hdeg) % 2) throw DomainError("symbol is not a step-2 expansion of the given order");
      int j = (order - hdeg) / 2;
      if (j <= depth) e.terms[j].add(pd * c, k);
    }
  };
  for (const auto& [pr, p] : s.parts()) {
    if (pr.kind == Profile::One) place(p, 0, Field<T>::one());
    if (pr.kind == Profile::Resolvent) {
      int k = pr.deriv;
      int jmax = depth + order / 2 + p.degree() + 2;
      auto w = resolvent_weight_taylor(n, pr.param, std::max(0, jmax));
      for (int j = 0; j <= jmax; ++j) {
        Rat c = w[j] * factorial(j + k) * (k % 2 ? -1 : 1);
        if (sgn(c) == 0) continue;
        int kk = j + k + 1;
        if (p.degree() - 2 * kk < order - 2 * depth) break;
        place(p, kk, Field<T>::from_rat(c));
      }
    }
  }
  e.closure = s;
  return e;
}

template <class T>
PhgExpansion<T> expand(const Symbol<T>& s, std::optional<int> depth = std::nullopt) {
  return expand(s, infer_order(s), depth.value_or(default_depth(s.n())));
}

// Formal product through the common depth; closures compose when the
// classes allow it.
template <class T>
PhgExpansion<T> star_product(const PhgExpansion<T>& a, const PhgExpansion<T>& b) {
  int n = std::max(a.n, b.n);
  PhgExpansion<T> c(n, a.order + b.order, std::min(a.depth, b.depth));
  for (int p = 0; p <= c.depth; ++p)
    for (int l = 0; l <= p; ++l) {
      if (a.terms[l].is_zero()) continue;
      for (int m = 0; l + m <= p; ++m) {
        if (b.terms[m].is_zero()) continue;
        int k = p - l - m;
        c.terms[p] += moyal_term(a.term(l), b.term(m), k).value;
      }
    }
  if (a.closure && b.closure && symbol_star_closed(*a.closure, *b.closure))
    c.closure = symbol_star(*a.closure, *b.closure);
  return c;
}

// Sign applied to term j under iota.
inline int iota_sign(IotaKind kind, int order, int j) {
  if (kind == IotaKind::Relative) return parity_sign(j);
  int hdeg = order - 2 * j;
  if (hdeg % 2) throw DomainError("absolute iota needs even degrees");
  return parity_sign(-hdeg / 2);
}

// iota of a closed form where it is determined: polynomials flip termwise,
// c F_gamma maps to the appropriately signed c F_{-gamma}, Gaussian parts
// (Schwartz) are dropped. Other classes get no closure.
template <class T>
std::optional<Symbol<T>> iota_closure(const Symbol<T>& s, IotaKind kind, int order) {
  Symbol<T> r(s.n());
  for (const auto& [pr, p] : s.parts()) {
    if (pr.kind == Profile::Gauss) continue;
    if (pr.kind == Profile::One) {
      Poly<T> q = p.map_coeffs([&](const Mono& m, const T& c) {
        int j = (order - mono_degree(m)) / 2;
        return c * Field<T>::from_int(iota_sign(kind, order, j));
      });
      r.add(pr, q);
      continue;
    }
    if (pr.deriv != 0 || p.degree() != 0) return std::nullopt;
    // F_gamma has degree -2 and iota_rel(F_gamma) = F_{-gamma} at order -2
    int j0 = (order + 2) / 2;
    r.add(Profile::resolvent(-pr.param, 0), p * Field<T>::from_int(iota_sign(kind, order, j0)));
  }
  return r;
}

template <class T>
PhgExpansion<T> iota(const PhgExpansion<T>& a, IotaKind kind = IotaKind::Relative) {
  PhgExpansion<T> r = a;
  for (int j = 0; j <= a.depth; ++j) r.terms[j] *= Field<T>::from_int(iota_sign(kind, a.order, j));
  r.closure.reset();
  if (a.closure) r.closure = iota_closure(*a.closure, kind, a.order);
  return r;
}

template <class T>
bool terms_equal(const RadialRat<T>& a, const RadialRat<T>& b) {
  if constexpr (Field<T>::exact) {
    return a == b;
  } else {
    double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
    return (a - b).max_abs_coeff() <= 1e-9 * scale;
  }
}

template <class T>
struct PairedSymbol {
  PhgExpansion<T> plus, minus;
  Convention conv = Convention::Heisenberg;

  int n() const { return plus.n; }
  int order() const { return plus.order; }
  int depth() const { return std::min(plus.depth, minus.depth); }

  int minus_sign(int j) const {
    if (conv == Convention::Heisenberg) return iota_sign(IotaKind::Relative, plus.order, j);
    return iota_sign(IotaKind::Absolute, plus.order, j);
  }

  // Throws NotInAlgebraA unless the stored terms satisfy the compatibility.
  void validate() const {
    if (plus.n != minus.n || plus.order != minus.order) throw NotInAlgebraA("components of different shape");
    for (int j = 0; j <= depth(); ++j)
      if (!terms_equal(minus.terms[j], plus.terms[j] * Field<T>::from_int(minus_sign(j))))
        throw NotInAlgebraA("minus term " + std::to_string(j) + " violates the parity compatibility");
  }

  PairedSymbol to_convention(Convention target) const {
    if (target == conv) return *this;
    if (plus.order % 2) throw DomainError("odd-order pairs only exist in the Heisenberg convention");
    PairedSymbol r = *this;
    r.conv = target;
    if ((plus.order / 2) % 2) r.minus = -r.minus;
    return r;
  }

  friend PairedSymbol operator+(const PairedSymbol& a, const PairedSymbol& b) {
    if (a.conv != b.conv) return a.to_convention(Convention::A) + b.to_convention(Convention::A);
    return {a.plus + b.plus, a.minus + b.minus, a.conv};
  }
  friend PairedSymbol operator*(const PairedSymbol& a, const T& s) { return {a.plus * s, a.minus * s, a.conv}; }
  friend PairedSymbol operator-(const PairedSymbol& a, const PairedSymbol& b) {
    return a + b * (-Field<T>::one());
  }

  template <class U>
  PairedSymbol<U> cast() const {
    return {plus.template cast<U>(), minus.template cast<U>(), conv};
  }
};

// Builds the pair with minus = iota(plus) in the requested convention, or
// validates a supplied minus.
template <class T>
PairedSymbol<T> make_paired(const PhgExpansion<T>& plus, Convention conv = Convention::Heisenberg,
                            const std::optional<PhgExpansion<T>>& minus = std::nullopt) {
  PairedSymbol<T> s;
  s.plus = plus;
  s.conv = conv;
  if (minus) {
    s.minus = *minus;
  } else {
    s.minus = iota(plus, conv == Convention::Heisenberg ? IotaKind::Relative : IotaKind::Absolute);
  }
  s.validate();
  return s;
}

template <class T>
PairedSymbol<T> pair_mul(const PairedSymbol<T>& u, const PairedSymbol<T>& w) {
  if (u.conv != w.conv) return pair_mul(u.to_convention(Convention::A), w.to_convention(Convention::A));
  PairedSymbol<T> r{star_product(u.plus, w.plus), star_product(w.minus, u.minus), u.conv};
  r.validate();
  return r;
}

template <class T>
PairedSymbol<T> pair_commutator(const PairedSymbol<T>& u, const PairedSymbol<T>& w) {
  return pair_mul(u, w) - pair_mul(w, u);
}

// Pair with both components the given expansion scaled by +1 / sign.
template <class T>
PairedSymbol<T> scalar_pair(int n, const T& c, int depth, Convention conv = Convention::Heisenberg) {
  return make_paired(expand(Symbol<T>(Poly<T>::constant(n, c)), 0, depth), conv);
}

// Linear change of variables v -> M v, termwise and on the closure.
template <class T>
PhgExpansion<T> linear_subst(const PhgExpansion<T>& a, const std::vector<T>& M) {
  PhgExpansion<T> r = a;
  for (auto& t : r.terms) t = t.linear_subst(M);
  if (a.closure) r.closure = a.closure->linear_subst(M);
  return r;
}

template <class T>
PairedSymbol<T> linear_subst(const PairedSymbol<T>& s, const std::vector<T>& M) {
  return {linear_subst(s.plus, M), linear_subst(s.minus, M), s.conv};
}

template <class T>
struct MatrixSymbol {
  int r = 1;
  std::vector<PairedSymbol<T>> e;  // row-major

  PairedSymbol<T>& at(int i, int j) { return e[i * r + j]; }
  const PairedSymbol<T>& at(int i, int j) const { return e[i * r + j]; }

  void validate() const {
    for (const auto& x : e) {
      x.validate();
      if (x.order() != e[0].order() || x.depth() != e[0].depth()) throw DomainError("non-uniform matrix symbol");
    }
  }

  friend MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b) {
    MatrixSymbol c{a.r, {}};
    for (int i = 0; i < a.r; ++i)
      for (int j = 0; j < a.r; ++j) {
        PairedSymbol<T> s = pair_mul(a.at(i, 0), b.at(0, j));
        for (int k = 1; k < a.r; ++k) s = s + pair_mul(a.at(i, k), b.at(k, j));
        c.e.push_back(s);
      }
    return c;
  }
};

}  // namespace heisen
