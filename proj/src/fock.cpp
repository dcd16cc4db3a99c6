#include "heisen/fock.hpp"

#include <cmath>

#include "heisen/errors.hpp"
#include "heisen/laurent.hpp"
#include "heisen/moyal.hpp"

namespace heisen {

FockBasis::FockBasis(int n, int cutoff) : n_(n), cutoff_(cutoff) {
  if (n < 1 || n > 4) throw DomainError("FockBasis: n out of range");
  // graded, then lexicographic with earlier modes more occupied first
  for (int N = 0; N <= cutoff; ++N) {
    Occ k{};
    auto rec = [&](auto&& self, int j, int left) -> void {
      if (j == n - 1) {
        k[j] = left;
        index_.emplace(k, static_cast<int>(states_.size()));
        states_.push_back(k);
        return;
      }
      for (int e = left; e >= 0; --e) {
        k[j] = e;
        self(self, j + 1, left - e);
      }
    };
    rec(rec, 0, N);
  }
}

int FockBasis::total(int i) const {
  int s = 0;
  for (int j = 0; j < n_; ++j) s += states_[i][j];
  return s;
}

int FockBasis::index(const Occ& k) const {
  auto it = index_.find(k);
  return it == index_.end() ? -1 : it->second;
}

int default_fock_cutoff(int n) { return n == 1 ? 24 : 12; }

template <class T>
Poly<T> to_complex_coords(const Poly<T>& P) {
  using F = Field<T>;
  int n = P.n();
  T half = F::from_rat(Rat(1, 2));
  T mih = -F::imag_unit() * half;
  std::vector<T> M(4 * n * n, F::zero());
  int nv = 2 * n;
  // x_j = (z_j + zbar_j)/2, xi_j = -i (z_j - zbar_j)/2
  for (int j = 0; j < n; ++j) {
    M[j * nv + j] = half;
    M[j * nv + n + j] = half;
    M[(n + j) * nv + j] = mih;
    M[(n + j) * nv + n + j] = -mih;
  }
  return P.linear_subst(M);
}

template PolyC to_complex_coords(const PolyC&);
template PolyD to_complex_coords(const PolyD&);

namespace {

template <class T>
using SVec = std::map<Occ, T>;

template <class T>
void axpy(SVec<T>& y, const T& a, const SVec<T>& x) {
  for (const auto& [k, v] : x) {
    auto [it, ins] = y.try_emplace(k, a * v);
    if (!ins) it->second += a * v;
  }
}

// Ladder actions in the chosen normalisation.
template <class T>
struct Ladder {
  FockNorm norm;
  SVec<T> raise(const SVec<T>& v, int j) const {  // Op(zbar_j)
    SVec<T> r;
    for (const auto& [k, c] : v) {
      Occ kk = k;
      kk[j] += 1;
      if constexpr (Field<T>::exact) {
        r[kk] += c;
      } else {
        r[kk] += c * std::sqrt(2.0 * (k[j] + 1));
      }
    }
    return r;
  }
  SVec<T> lower(const SVec<T>& v, int j) const {  // Op(z_j)
    SVec<T> r;
    for (const auto& [k, c] : v) {
      if (k[j] == 0) continue;
      Occ kk = k;
      kk[j] -= 1;
      if constexpr (Field<T>::exact) {
        r[kk] += c * CRat(2 * k[j]);
      } else {
        r[kk] += c * std::sqrt(2.0 * k[j]);
      }
    }
    return r;
  }
};

// Op(z_j^a zbar_j^b) v
template <class T>
SVec<T> apply_weyl(const Ladder<T>& L, int j, int a, int b, const SVec<T>& v) {
  if (a == 0) {
    SVec<T> r = v;
    for (int t = 0; t < b; ++t) r = L.raise(r, j);
    return r;
  }
  SVec<T> r = L.lower(apply_weyl(L, j, a - 1, b, v), j);
  if (b > 0) axpy(r, Field<T>::from_int(-b), apply_weyl(L, j, a - 1, b - 1, v));
  return r;
}

// Op(zbar_j^a z_j^b e^{-l Q_j}) v
template <class T>
SVec<T> apply_gauss(const Ladder<T>& L, int j, int a, int b, const Rat& l, const SVec<T>& v) {
  using F = Field<T>;
  T inv = F::from_rat(1 / (1 + l));
  if (a > 0) {
    SVec<T> r = L.raise(apply_gauss(L, j, a - 1, b, l, v), j);
    if (b > 0) axpy(r, F::from_int(b), apply_gauss(L, j, a - 1, b - 1, l, v));
    for (auto& [k, c] : r) c *= inv;
    return r;
  }
  if (b > 0) {
    SVec<T> r = apply_gauss(L, j, 0, b - 1, l, L.lower(v, j));
    for (auto& [k, c] : r) c *= inv;
    return r;
  }
  SVec<T> r;
  Rat kappa = (1 - l) / (1 + l);
  for (const auto& [k, c] : v) {
    Rat f = 1 / (1 + l);
    for (int t = 0; t < k[j]; ++t) f *= kappa;
    if (sgn(f) != 0) r[k] = c * F::from_rat(f);
  }
  return r;
}

template <class T>
FockOp<T> build(const FockBasis& basis, FockNorm norm, const Poly<T>& Pz, const Rat* lambda) {
  int n = basis.n();
  FockOp<T> op{basis, norm, std::vector<T>(static_cast<size_t>(basis.dim()) * basis.dim(), Field<T>::zero())};
  Ladder<T> L{norm};
  for (int col = 0; col < basis.dim(); ++col) {
    SVec<T> e0;
    e0[basis.state(col)] = Field<T>::one();
    SVec<T> acc;
    for (const auto& [m, c] : Pz.terms()) {
      SVec<T> v = e0;
      for (int j = 0; j < n && !v.empty(); ++j) {
        // variable j is z_j, n + j is zbar_j
        if (lambda)
          v = apply_gauss(L, j, m[n + j], m[j], *lambda, v);
        else
          v = apply_weyl(L, j, m[j], m[n + j], v);
      }
      axpy(acc, c, v);
    }
    for (const auto& [k, c] : acc) {
      int row = basis.index(k);
      if (row >= 0) op(row, col) += c;
    }
  }
  return op;
}

}  // namespace

FockOp<CRat> quantize_poly_exact(const PolyC& P, const FockBasis& basis) {
  return build<CRat>(basis, FockNorm::Rational, to_complex_coords(P), nullptr);
}

FockOp<cplx> quantize_poly(const PolyD& P, const FockBasis& basis) {
  return build<cplx>(basis, FockNorm::Normalized, to_complex_coords(P), nullptr);
}

FockOp<CRat> quantize_gauss_exact(const PolyC& P, const Rat& lambda, const FockBasis& basis) {
  return build<CRat>(basis, FockNorm::Rational, to_complex_coords(P), &lambda);
}

FockOp<cplx> quantize_gauss(const PolyD& P, const Rat& lambda, const FockBasis& basis) {
  return build<cplx>(basis, FockNorm::Normalized, to_complex_coords(P), &lambda);
}

std::vector<cplx> quantize_gauss_diagonal(const PolyD& P, const Rat& lambda, const FockBasis& basis) {
  PolyD Pz = to_complex_coords(P);
  Ladder<cplx> L{FockNorm::Normalized};
  int n = basis.n();
  std::vector<cplx> diag(basis.dim(), 0.0);
  for (int col = 0; col < basis.dim(); ++col) {
    const Occ& k0 = basis.state(col);
    for (const auto& [m, c] : Pz.terms()) {
      // only terms with equal numbers of z_j and zbar_j reach the diagonal
      bool balanced = true;
      for (int j = 0; j < n; ++j) balanced = balanced && m[j] == m[n + j];
      if (!balanced) continue;
      SVec<cplx> v;
      v[k0] = 1.0;
      for (int j = 0; j < n && !v.empty(); ++j) v = apply_gauss(L, j, m[n + j], m[j], lambda, v);
      auto it = v.find(k0);
      if (it != v.end()) diag[col] += c * it->second;
    }
  }
  return diag;
}

FockOp<cplx> quantize_symbol(const SymbolD& s, const FockBasis& basis) {
  FockOp<cplx> out{basis, FockNorm::Normalized, std::vector<cplx>(static_cast<size_t>(basis.dim()) * basis.dim())};
  for (const auto& [pr, p] : s.parts()) {
    if (pr.kind == Profile::Resolvent) throw DomainError("quantize_symbol: resolvent parts have no finite Fock form");
    FockOp<cplx> part = pr.kind == Profile::One ? quantize_poly(p, basis) : quantize_gauss(p, pr.param, basis);
    for (size_t i = 0; i < out.mat.size(); ++i) out.mat[i] += part.mat[i];
  }
  return out;
}

Eigen::MatrixXcd to_eigen(const FockOp<cplx>& op) {
  int d = op.dim();
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = op(i, j);
  return m;
}

FockOp<cplx> from_eigen(const Eigen::MatrixXcd& m, const FockBasis& basis) {
  FockOp<cplx> op{basis, FockNorm::Normalized, std::vector<cplx>(static_cast<size_t>(basis.dim()) * basis.dim())};
  for (int i = 0; i < basis.dim(); ++i)
    for (int j = 0; j < basis.dim(); ++j) op(i, j) = m(i, j);
  return op;
}

FockOp<cplx> to_normalized(const FockOp<CRat>& op) {
  // e_k = sqrt(2^|k| k!) |k>, so A|l> = sum_k M_kl sqrt(N_k / N_l) |k>
  const FockBasis& b = op.basis;
  std::vector<double> sq(b.dim());
  for (int i = 0; i < b.dim(); ++i) {
    double N = 1.0;
    for (int j = 0; j < b.n(); ++j) N *= std::pow(2.0, b.state(i)[j]) * std::tgamma(b.state(i)[j] + 1.0);
    sq[i] = std::sqrt(N);
  }
  FockOp<cplx> r{b, FockNorm::Normalized, std::vector<cplx>(op.mat.size())};
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) r(i, j) = op(i, j).to_cplx() * (sq[i] / sq[j]);
  return r;
}

SymbolD mehler_symbol(int n, double t) {
  double c = std::pow(std::cosh(t), -n);
  return SymbolD::gauss(PolyD::constant(n, cplx(c)), Rat(std::tanh(t)));
}

FockOp<cplx> vacuum_projection(const FockBasis& basis) {
  FockOp<cplx> op{basis, FockNorm::Normalized, std::vector<cplx>(static_cast<size_t>(basis.dim()) * basis.dim())};
  op(0, 0) = 1.0;
  return op;
}

SymbolC vacuum_symbol(int n) { return SymbolC::gauss(PolyC::constant(n, CRat(1L << n)), Rat(1)); }

SymbolC matrix_unit_symbol(int n, const Occ& k, const Occ& l) {
  PolyC left = PolyC::constant(n, CRat(1)), right = PolyC::constant(n, CRat(1));
  Rat norm = 1;
  CRat I(Rat(0), Rat(1));
  for (int j = 0; j < n; ++j) {
    // zbar = x - i xi, z = x + i xi
    PolyC zb = PolyC::x(n, j) - PolyC::xi(n, j) * I;
    PolyC z = PolyC::x(n, j) + PolyC::xi(n, j) * I;
    for (int t = 0; t < k[j]; ++t) left = poly_star(left, zb);
    for (int t = 0; t < l[j]; ++t) right = poly_star(right, z);
    norm *= Rat(1L << l[j]) * factorial(l[j]);
  }
  SymbolC s = symbol_star(symbol_star(SymbolC(left), vacuum_symbol(n)), SymbolC(right));
  return s * CRat(1 / norm);
}

namespace {
LaurentD artanh_over_u_in_y(int K) {
  std::vector<cplx> c(K + 1);
  for (int k = 0; k <= K; ++k) c[k] = 1.0 / (2.0 * k + 1.0);
  return LaurentD(0, c);
}
}  // namespace

std::vector<cplx> hz_coefficients(cplx z, int K, int n) {
  LaurentD a = artanh_over_u_in_y(K).pow_unit(z - 1.0);
  std::vector<cplx> one_minus(K + 1);
  one_minus[0] = 1.0;
  if (K >= 1) one_minus[1] = -1.0;
  LaurentD b = LaurentD(0, one_minus).pow_unit(cplx((n - 2) / 2.0));
  LaurentD p = a * b;
  std::vector<cplx> out(K + 1);
  for (int k = 0; k <= K; ++k) out[k] = p.coeff(k);
  return out;
}

std::vector<cplx> hz_series_in_u(cplx z, int K, int n) {
  // artanh(u)/u and 1 - u^2 written directly in powers of u
  std::vector<cplx> at(2 * K + 1, 0.0), om(2 * K + 1, 0.0);
  for (int k = 0; k <= 2 * K; ++k) at[k] = (k % 2 == 0) ? 1.0 / (k + 1.0) : 0.0;
  om[0] = 1.0;
  if (2 * K >= 2) om[2] = -1.0;
  LaurentD p = LaurentD(0, at).pow_unit(z - 1.0) * LaurentD(0, om).pow_unit(cplx((n - 2) / 2.0));
  std::vector<cplx> out(2 * K + 1);
  for (int k = 0; k <= 2 * K; ++k) out[k] = p.coeff(k);
  return out;
}

cplx hz_term(cplx z, int j, int n) {
  if (j % 4) return 0.0;
  int k = j / 4;
  // Gamma(z + 2k) / Gamma(z)
  cplx prod = 1.0;
  for (int i = 0; i < 2 * k; ++i) prod *= (z + static_cast<double>(i));
  return prod * hz_coefficients(z, k, n)[k];
}

cplx hz_term_from_u_series(cplx z, int j, int n) {
  if (j % 2) return 0.0;
  int m = j / 2;
  auto c = hz_series_in_u(z, (m + 1) / 2 + 1, n);
  cplx prod = 1.0;
  for (int i = 0; i < m; ++i) prod *= (z + static_cast<double>(i));
  return prod * c[m];
}

}  // namespace heisen
