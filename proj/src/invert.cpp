#include "heisen/invert.hpp"

#include "heisen/fock.hpp"

namespace heisen {

namespace {

RadialRatC q_power(int n, int e) {
  PolyC one = PolyC::constant(n, CRat(1));
  if (e < 0) return RadialRatC(one, -e);
  PolyC p = one;
  for (int i = 0; i < e; ++i) p = p * PolyC::Q(n);
  return RadialRatC(p, 0);
}

// c with t = c Q^{e}, or nullopt.
std::optional<CRat> constant_times_q_power(const RadialRatC& t, int e) {
  if (t.is_zero()) return CRat(0);
  RadialRatC u = t * q_power(t.n(), -e);
  if (u.terms().size() != 1 || u.terms().begin()->first != 0) return std::nullopt;
  const PolyC& p = u.terms().begin()->second;
  if (p.degree() > 0) return std::nullopt;
  return p.constant_term();
}

template <class X>
std::vector<X> transpose(const std::vector<X>& a, int r) {
  std::vector<X> t = a;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) t[j * r + i] = a[i * r + j];
  return t;
}

std::optional<CRat> constant_of(const SymbolC& s) {
  if (!s.is_poly()) return std::nullopt;
  PolyC p = s.poly_part();
  if (p.degree() > 0) return std::nullopt;
  return p.constant_term();
}

// alpha Q + beta -> alpha^{-1} F_{-beta/alpha}
std::optional<SymbolC> invert_linear_in_q(const SymbolC& s) {
  if (!s.is_poly()) return std::nullopt;
  int n = s.n();
  PolyC p = s.poly_part();
  Mono m{};
  m[0] = 2;
  CRat alpha = p.coeff(m), beta = p.constant_term();
  if (alpha.is_zero()) return std::nullopt;
  if (p != PolyC::Q(n) * alpha + PolyC::constant(n, beta)) return std::nullopt;
  CRat gamma = CRat(0) - beta / alpha;
  if (gamma.im != 0) return std::nullopt;
  // Q has simple eigenvalues n, n + 2, ... on each Fock factor
  Rat k = (gamma.re - Rat(n)) / Rat(2);
  if (k >= 0 && k.get_den() == 1)
    throw NotElliptic("Q - gamma is not invertible: gamma is an eigenvalue of Q");
  try {
    return SymbolC::resolvent(PolyC::constant(n, CRat(1) / alpha), gamma.re);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

// Inverse of C + G with G in the Hermite class, on a basis of the given cutoff.
std::vector<SymbolC> hermite_inverse(const std::vector<CRat>& Cinv, const std::vector<SymbolC>& G, int r, int n,
                                     int cutoff) {
  FockBasis basis(n, cutoff);
  int D = basis.dim(), R = r * D;
  // Gt = C^{-1} G
  std::vector<SymbolC> Gt(r * r, SymbolC(n));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        if (!Cinv[i * r + k].is_zero()) Gt[i * r + j] += G[k * r + j] * Cinv[i * r + k];
  std::vector<CRat> M(static_cast<size_t>(R) * R, CRat(0));
  for (int a = 0; a < R; ++a) M[static_cast<size_t>(a) * R + a] = CRat(1);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (const auto& [pr, p] : Gt[i * r + j].parts()) {
        auto op = quantize_gauss_exact(p, pr.param, basis);
        for (int k = 0; k < D; ++k)
          for (int l = 0; l < D; ++l) M[static_cast<size_t>(i * D + k) * R + j * D + l] += op(k, l);
      }
  std::vector<CRat> Minv = invert_exact(M, R);
  // (I + Gt)^{-1} = I + S, then (C + G)^{-1} = (I + S) C^{-1}
  std::vector<SymbolC> S(r * r, SymbolC(n));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < D; ++k)
        for (int l = 0; l < D; ++l) {
          CRat v = Minv[static_cast<size_t>(i * D + k) * R + j * D + l];
          if (i == j && k == l) v -= CRat(1);
          if (!v.is_zero()) S[i * r + j] += matrix_unit_symbol(n, basis.state(k), basis.state(l)) * v;
        }
  std::vector<SymbolC> out(r * r, SymbolC(n));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      SymbolC e(PolyC::constant(n, Cinv[i * r + j]));
      for (int l = 0; l < r; ++l)
        if (!Cinv[l * r + j].is_zero()) e += S[i * r + l] * Cinv[l * r + j];
      out[i * r + j] = e;
    }
  return out;
}

// Inverse closures of the closed classes listed in the header.
std::optional<std::vector<SymbolC>> invert_closures(const ExpansionMatrix& a, int r) {
  int n = a[0].n;
  for (const auto& e : a)
    if (!e.closure) return std::nullopt;
  if (r == 1) {
    if (auto f = invert_linear_in_q(*a[0].closure)) return std::vector<SymbolC>{*f};
  }
  std::vector<CRat> C(r * r);
  std::vector<SymbolC> G(r * r, SymbolC(n));
  int deg = -1;
  for (int i = 0; i < r * r; ++i) {
    const SymbolC& s = *a[i].closure;
    auto c = constant_of(SymbolC(s.poly_part()));
    if (!c) return std::nullopt;
    C[i] = *c;
    for (const auto& [pr, p] : s.parts()) {
      if (pr.kind == Profile::One) continue;
      if (pr.kind != Profile::Gauss || pr.param != 1)
        throw DomainError("inversion needs the Schwartz part in the Hermite class P e^{-Q}");
      G[i].add(pr, p);
      deg = std::max(deg, p.degree());
    }
  }
  std::vector<CRat> Cinv = invert_exact(C, r);
  if (deg < 0) {
    std::vector<SymbolC> out;
    for (const auto& c : Cinv) out.emplace_back(PolyC::constant(n, c));
    return out;
  }
  // Op(P e^{-Q}) lives on occupations <= deg P; a doubled basis must agree.
  auto inv = hermite_inverse(Cinv, G, r, n, deg);
  auto check = hermite_inverse(Cinv, G, r, n, 2 * deg + 2);
  if (inv != check) throw FockTruncationTooSmall("Hermite compression did not stabilise under doubling");
  return inv;
}

}  // namespace

std::vector<CRat> invert_exact(std::vector<CRat> m, int r) {
  std::vector<CRat> inv(static_cast<size_t>(r) * r, CRat(0));
  for (int i = 0; i < r; ++i) inv[static_cast<size_t>(i) * r + i] = CRat(1);
  auto at = [r](std::vector<CRat>& v, int i, int j) -> CRat& { return v[static_cast<size_t>(i) * r + j]; };
  for (int c = 0; c < r; ++c) {
    int piv = -1;
    for (int i = c; i < r; ++i)
      if (!at(m, i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) throw NotElliptic("leading matrix is singular");
    if (piv != c)
      for (int j = 0; j < r; ++j) {
        std::swap(at(m, piv, j), at(m, c, j));
        std::swap(at(inv, piv, j), at(inv, c, j));
      }
    CRat ip = CRat(1) / at(m, c, c);
    for (int j = 0; j < r; ++j) {
      at(m, c, j) *= ip;
      at(inv, c, j) *= ip;
    }
    for (int i = 0; i < r; ++i) {
      if (i == c || at(m, i, c).is_zero()) continue;
      CRat f = at(m, i, c);
      for (int j = 0; j < r; ++j) {
        if (!at(m, c, j).is_zero()) at(m, i, j) -= f * at(m, c, j);
        if (!at(inv, c, j).is_zero()) at(inv, i, j) -= f * at(inv, c, j);
      }
    }
  }
  return inv;
}

ExpansionMatrix invert_expansion(const ExpansionMatrix& a, int r, int depth) {
  int n = a[0].n, m = a[0].order;
  int N = depth;
  for (const auto& e : a) {
    if (e.order != m || e.n != n) throw DomainError("non-uniform matrix symbol");
    N = std::min(N, e.depth);
  }
  if (m % 2) throw NotElliptic("odd order has no leading term of the form C Q^{m/2}");
  std::vector<CRat> C(r * r);
  for (int i = 0; i < r * r; ++i) {
    auto c = constant_times_q_power(a[i].terms[0], m / 2);
    if (!c) throw NotElliptic("leading term is not a constant matrix times Q^{m/2}");
    C[i] = *c;
  }
  std::vector<CRat> Cinv = invert_exact(C, r);
  RadialRatC qinv = q_power(n, -m / 2);
  ExpansionMatrix b(r * r, PhgExpansion<CRat>(n, -m, N));
  for (int i = 0; i < r * r; ++i) b[i].terms[0] = qinv * Cinv[i];
  for (int p = 1; p <= N; ++p) {
    std::vector<RadialRatC> rest(r * r, RadialRatC(n));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int s = 0; s < r; ++s)
          for (int q = 0; q < p; ++q)
            for (int l = 0; l + q <= p; ++l) {
              int k = p - l - q;
              const auto& al = a[i * r + s].terms[l];
              const auto& bq = b[s * r + j].terms[q];
              if (al.is_zero() || bq.is_zero()) continue;
              rest[i * r + j] += moyal_term(a[i * r + s].term(l), b[s * r + j].term(q), k).value;
            }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        RadialRatC v(n);
        for (int s = 0; s < r; ++s)
          if (!Cinv[i * r + s].is_zero() && !rest[s * r + j].is_zero()) v += rest[s * r + j] * Cinv[i * r + s];
        b[i * r + j].terms[p] = -(qinv * v);
      }
  }
  if (auto cl = invert_closures(a, r))
    for (int i = 0; i < r * r; ++i) b[i].closure = (*cl)[i];
  return b;
}

MatrixSymbol<CRat> invert(const MatrixSymbol<CRat>& s, int depth) {
  s.validate();
  int r = s.r;
  ExpansionMatrix plus, minus;
  for (const auto& e : s.e) {
    plus.push_back(e.plus);
    minus.push_back(e.minus);
  }
  ExpansionMatrix bp = invert_expansion(plus, r, depth);
  ExpansionMatrix bm = transpose(invert_expansion(transpose(minus, r), r, depth), r);
  MatrixSymbol<CRat> out{r, {}};
  for (int i = 0; i < r * r; ++i) {
    PairedSymbol<CRat> x{bp[i], bm[i], s.e[i].conv};
    x.validate();
    out.e.push_back(x);
  }
  return out;
}

PairedSymbol<CRat> invert(const PairedSymbol<CRat>& s, int depth) {
  return invert(MatrixSymbol<CRat>{1, {s}}, depth).e[0];
}

}  // namespace heisen
