/*
 * moyal.hpp - the Weyl-Moyal product.
 *
 * With the bracket {f,g} = sum_j (d_xj f d_xij g - d_xij f d_xj g),
 *
 *   a # b ~ sum_k (i/2)^k B_k(a, b),
 *   B_k(a, b) = sum_{|al|+|be|=k} (-1)^{|be|}/(al! be!)
 *               (d_x^al d_xi^be a)(d_x^be d_xi^al b),
 *
 * so x # xi - xi # x = i. Three evaluators share this formula:
 *   - polynomials: exact finite sum, factorised per mode (x_j, xi_j);
 *   - RadialRat / HomTerm: the k-th term of the expansion product;
 *   - Symbol: finite sums when one side is polynomial, and the closed
 *     Gaussian kernel when both sides are Gaussian.
 *
 * Gaussian kernel, per mode with D = 1 + l m:
 *   e^{-lQ + b.v} # e^{-mQ + c.v} = D^{-1} exp(E),
 *   E = -((l+m)/D) Q
 *       + (1/D)[x (b1 + c1 + i m b2 - i l c2) + xi (b2 + c2 - i m b1 + i l c1)]
 *       + (1/(4D))[m (b1^2 + b2^2) + l (c1^2 + c2^2)] + (i/(2D))(b1 c2 - b2 c1).
 * Polynomial prefactors come from differentiating in the sources b, c.
 */
#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "heisen/radial.hpp"
#include "heisen/special.hpp"
#include "heisen/symbol.hpp"

namespace heisen {

// All multi-indices over `nv` variables with total degree k.
std::vector<Mono> multi_indices(int nv, int k);
Rat mono_factorial(const Mono& m);

template <class T>
T i_half_pow(int k) {
  T r = Field<T>::one();
  T ih = Field<T>::imag_unit() * Field<T>::from_rat(Rat(1, 2));
  for (int j = 0; j < k; ++j) r *= ih;
  return r;
}

namespace detail {

struct ModeTerm {
  int order;
  Rat coef;
  int ex, exi;
};

// One-mode expansion of (x^ax xi^aq) # (x^bx xi^bq) before the (i/2)^order
// factor: sum_{p,q} (-1)^q/(p! q!) d_x^p d_xi^q (.) d_x^q d_xi^p (.)
std::vector<ModeTerm> mode_moyal(int ax, int aq, int bx, int bq);

}  // namespace detail

// (i/2)^k B_k(a, b) for polynomials; k < 0 returns the full product.
template <class T>
Poly<T> moyal_term(const Poly<T>& a, const Poly<T>& b, int k) {
  int n = std::max(a.n(), b.n());
  Poly<T> r(n);
  int maxo = std::max(0, a.degree()) + std::max(0, b.degree());
  std::vector<T> ih(maxo + 1);
  for (int o = 0; o <= maxo; ++o) ih[o] = i_half_pow<T>(o);
  std::vector<std::vector<detail::ModeTerm>> per(n);
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      for (int j = 0; j < n; ++j) per[j] = detail::mode_moyal(ma[j], ma[n + j], mb[j], mb[n + j]);
      // combine modes recursively
      Mono m{};
      auto rec = [&](auto&& self, int j, int order, const Rat& coef) -> void {
        if (k >= 0 && order > k) return;
        if (j == n) {
          if (k >= 0 && order != k) return;
          r.add_term(m, ca * cb * Field<T>::from_rat(coef) * ih[order]);
          return;
        }
        for (const auto& t : per[j]) {
          m[j] = static_cast<uint8_t>(t.ex);
          m[n + j] = static_cast<uint8_t>(t.exi);
          self(self, j + 1, order + t.order, coef * t.coef);
        }
      };
      rec(rec, 0, 0, Rat(1));
    }
  return r;
}

template <class T>
Poly<T> poly_star(const Poly<T>& a, const Poly<T>& b) {
  return moyal_term(a, b, -1);
}

// Memoised mixed partials d^alpha of a value with a .deriv(int) method.
template <class A>
class DerivCache {
 public:
  explicit DerivCache(const A& a, int nv) : nv_(nv) { cache_.emplace(Mono{}, a); }
  const A& get(const Mono& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    int v = 0;
    while (alpha[v] == 0) ++v;
    Mono lower = alpha;
    lower[v] -= 1;
    A d = get(lower).deriv(v);
    return cache_.emplace(alpha, std::move(d)).first->second;
  }

 private:
  int nv_;
  std::map<Mono, A> cache_;
};

inline Mono swap_halves(const Mono& g, int n) {
  Mono s{};
  for (int j = 0; j < n; ++j) {
    s[j] = g[n + j];
    s[n + j] = g[j];
  }
  return s;
}

inline int sign_of_xi_part(const Mono& g, int n) {
  int s = 0;
  for (int j = 0; j < n; ++j) s += g[n + j];
  return (s % 2) ? -1 : 1;
}

// (i/2)^k B_k(a, b) with derivative caches; Mul combines the two factors.
template <class T, class A, class B, class R, class Mul>
void accumulate_bk(DerivCache<A>& da, DerivCache<B>& db, int n, int k, R& out, Mul&& mul) {
  T pref = i_half_pow<T>(k);
  for (const Mono& g : multi_indices(2 * n, k)) {
    Rat c = Rat(sign_of_xi_part(g, n)) / mono_factorial(g);
    const A& ag = da.get(g);
    if (ag.is_zero()) continue;
    const B& bg = db.get(swap_halves(g, n));
    if (bg.is_zero()) continue;
    out += mul(ag, bg) * (pref * Field<T>::from_rat(c));
  }
}

template <class T>
HomTerm<T> moyal_term(const HomTerm<T>& a, const HomTerm<T>& b, int k) {
  int n = std::max(a.value.n(), b.value.n());
  RadialRat<T> out(n);
  DerivCache<RadialRat<T>> da(a.value, 2 * n), db(b.value, 2 * n);
  accumulate_bk<T>(da, db, n, k, out, [](const RadialRat<T>& x, const RadialRat<T>& y) { return x * y; });
  return HomTerm<T>(out, a.hdeg + b.hdeg - 2 * k);
}

// Closed Gaussian kernel: (Pa e^{-l Q}) # (Pb e^{-m Q}).
template <class T>
Symbol<T> gauss_star(const Poly<T>& Pa, const Rat& l, const Poly<T>& Pb, const Rat& m);

// c F_gamma with constant c: a function of H.
template <class T>
bool radial_resolvent(const Profile& pr, const Poly<T>& p) {
  return pr.kind == Profile::Resolvent && pr.deriv == 0 && p.degree() == 0;
}

// Full Moyal product of closed-form symbols; throws MissingClosure outside
// the composable classes.
template <class T>
Symbol<T> symbol_star(const Symbol<T>& a, const Symbol<T>& b) {
  int n = std::max(a.n(), b.n());
  if (a.is_zero() || b.is_zero()) return Symbol<T>(n);
  if (a.is_poly() || b.is_poly()) {
    Symbol<T> out(n);
    int kmax = a.is_poly() ? a.poly_part().degree() : b.poly_part().degree();
    DerivCache<Symbol<T>> da(a, 2 * n), db(b, 2 * n);
    for (int k = 0; k <= kmax; ++k)
      accumulate_bk<T>(da, db, n, k, out, [](const Symbol<T>& x, const Symbol<T>& y) { return x * y; });
    return out;
  }
  Symbol<T> a0(a.poly_part()), b0(b.poly_part());
  Symbol<T> a1 = a.without_poly(), b1 = b.without_poly();
  Symbol<T> out = symbol_star(a0, b) + symbol_star(a1, b0);
  for (const auto& [pa, Pa] : a1.parts())
    for (const auto& [pb, Pb] : b1.parts()) {
      if (pa.kind == Profile::Gauss && pb.kind == Profile::Gauss) {
        out += gauss_star(Pa, pa.param, Pb, pb.param);
      } else if (radial_resolvent(pa, Pa) && radial_resolvent(pb, Pb) && pa.param != pb.param) {
        // (H - a)^{-1} (H - b)^{-1} = ((H - a)^{-1} - (H - b)^{-1}) / (a - b)
        T c = Pa.coeff(Mono{}) * Pb.coeff(Mono{}) * Field<T>::from_rat(1 / (pa.param - pb.param));
        out.add(pa, Poly<T>::constant(n, c));
        out.add(pb, Poly<T>::constant(n, -c));
      } else {
        throw MissingClosure("no closed-form composition for this pair of profiles");
      }
    }
  return out;
}

template <class T>
bool symbol_star_closed(const Symbol<T>& a, const Symbol<T>& b) {
  if (a.is_poly() || b.is_poly()) return true;
  for (const auto& [pa, Pa] : a.parts())
    for (const auto& [pb, Pb] : b.parts()) {
      if (pa.kind == Profile::One || pb.kind == Profile::One) continue;
      if (pa.kind == Profile::Gauss && pb.kind == Profile::Gauss) continue;
      if (radial_resolvent(pa, Pa) && radial_resolvent(pb, Pb) && pa.param != pb.param) continue;
      return false;
    }
  return true;
}

extern template Symbol<CRat> gauss_star(const Poly<CRat>&, const Rat&, const Poly<CRat>&, const Rat&);
extern template Symbol<cplx> gauss_star(const Poly<cplx>&, const Rat&, const Poly<cplx>&, const Rat&);

}  // namespace heisen
