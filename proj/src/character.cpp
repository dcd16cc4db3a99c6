#include "heisen/character.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>

#include "heisen/errors.hpp"
#include "heisen/fock.hpp"
#include "heisen/invert.hpp"

namespace heisen {

namespace {

using std::numbers::pi;

const CRat kHalfI(Rat(0), Rat(1, 2));

int omega_entry(int a, int c, int n) {
  if (a < n && c == a + n) return 1;
  if (a >= n && c == a - n) return -1;
  return 0;
}

bool expansion_equal(const PhgExpansion<CRat>& a, const PhgExpansion<CRat>& b) {
  if (a.n != b.n || a.order != b.order) return false;
  int d = std::min(a.depth, b.depth);
  for (int j = 0; j <= d; ++j)
    if (!terms_equal(a.terms[j], b.terms[j])) return false;
  if (a.closure.has_value() != b.closure.has_value()) return false;
  return !a.closure || *a.closure == *b.closure;
}

bool expansion_zero(const PhgExpansion<CRat>& a) {
  return a.expansion_zero() && (!a.closure || a.closure->is_zero());
}

bool pair_zero(const PairC& p) { return expansion_zero(p.plus) && expansion_zero(p.minus); }

bool pair_equal(const PairC& a, const PairC& b) {
  if (a.conv != b.conv) return pair_equal(a.to_convention(Convention::A), b.to_convention(Convention::A));
  return expansion_equal(a.plus, b.plus) && expansion_equal(a.minus, b.minus);
}

// First nonzero coefficient of an expansion, as a locator into another.
std::optional<std::pair<CRat, CRat>> reference_coefficients(const PhgExpansion<CRat>& b,
                                                            const PhgExpansion<CRat>& p) {
  for (size_t j = 0; j < b.terms.size(); ++j)
    for (const auto& [k, poly] : b.terms[j].terms())
      for (const auto& [m, c] : poly.terms()) {
        if (c.is_zero()) continue;
        CRat pc(0);
        if (j < p.terms.size()) {
          auto it = p.terms[j].terms().find(k);
          if (it != p.terms[j].terms().end()) pc = it->second.coeff(m);
        }
        return std::make_pair(pc, c);
      }
  if (b.closure)
    for (const auto& [pr, poly] : b.closure->parts())
      for (const auto& [m, c] : poly.terms()) {
        if (c.is_zero()) continue;
        CRat pc(0);
        if (p.closure) {
          auto it = p.closure->parts().find(pr);
          if (it != p.closure->parts().end()) pc = it->second.coeff(m);
        }
        return std::make_pair(pc, c);
      }
  return std::nullopt;
}

// c with p == c b, if any.
std::optional<CRat> pair_ratio(const PairC& p0, const PairC& b0) {
  PairC p = p0.to_convention(Convention::A), b = b0.to_convention(Convention::A);
  if (p.order() != b.order()) return std::nullopt;
  auto ref = reference_coefficients(b.plus, p.plus);
  if (!ref) ref = reference_coefficients(b.minus, p.minus);
  if (!ref) return std::nullopt;  // b is zero
  CRat c = ref->first / ref->second;
  if (c.is_zero()) return pair_zero(p) ? std::optional<CRat>(c) : std::nullopt;
  if (pair_equal(p, b * c)) return c;
  return std::nullopt;
}

// Constant r x r 0-form.
Form constant_matrix(ManifoldPtr M, int r, const std::function<cplx(int, int)>& entry) {
  return function_form(M, r, [&](size_t, size_t, cplx* out) {
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) out[i * r + j] = entry(i, j);
  });
}

cplx block_entry(const Form& C, size_t c, size_t v, int comp, int i, int j) {
  if (C.r() == 1) return i == j ? C.at(c, v, comp)[0] : cplx(0);
  return C.at(c, v, comp)[i * C.r() + j];
}

// Embeds C (r_block or scalar) into an r_total block at the given offset.
Form embed(const Form& C, int r_total, int offset, int r_block) {
  Form out(C.manifold(), C.degree(), r_total);
  const Manifold& M = *C.manifold();
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v)
      for (int k = 0; k < C.ncomp(); ++k)
        for (int i = 0; i < r_block; ++i)
          for (int j = 0; j < r_block; ++j)
            out.at(c, v, k)[(offset + i) * r_total + offset + j] = block_entry(C, c, v, k, i, j);
  return out;
}

struct NuCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::vector<PairC>> pairs;  // (n, depth) -> nu(X_A)
};

const std::vector<PairC>& nu_basis(int n, int depth) {
  static NuCache cache;
  std::lock_guard<std::mutex> lock(cache.mu);
  auto key = std::make_pair(n, depth);
  auto it = cache.pairs.find(key);
  if (it != cache.pairs.end()) return it->second;
  std::vector<PairC> v;
  for (const auto& X : sp_basis(n).X) v.push_back(nu(X, n, depth));
  return cache.pairs.emplace(key, v).first->second;
}

// Scalar forms of the sp-basis coordinates of a 2n x 2n matrix-valued form.
std::vector<Form> sp_coordinate_forms(const Form& a, int n) {
  const SpBasis& B = sp_basis(n);
  std::vector<Form> out(B.X.size(), Form(a.manifold(), a.degree(), 1));
  const Manifold& M = *a.manifold();
  for (size_t c = 0; c < M.charts.size(); ++c)
    for (size_t v = 0; v < M.charts[c].nodes(); ++v)
      for (int k = 0; k < a.ncomp(); ++k) {
        auto co = B.coordinates(a.at(c, v, k));
        for (size_t A = 0; A < co.size(); ++A) out[A].at(c, v, k)[0] = co[A];
      }
  return out;
}

FiberForm factor_sp_form(const Form& a, int n, int depth) {
  FiberForm f(a.manifold(), a.degree(), 1);
  auto co = sp_coordinate_forms(a, n);
  const auto& nus = nu_basis(n, depth);
  for (size_t A = 0; A < co.size(); ++A) f.add(nus[A], co[A]);
  return f;
}

}  // namespace

bool is_symplectic_lie(const RatMatrix& phi, int n) {
  int m = 2 * n;
  if (static_cast<int>(phi.size()) != m * m) return false;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      CRat s(0);
      for (int k = 0; k < m; ++k) {
        if (int o = omega_entry(k, j, n)) s += phi[k * m + i] * CRat(o);
        if (int o = omega_entry(i, k, n)) s += phi[k * m + j] * CRat(o);
      }
      if (!s.is_zero()) return false;
    }
  return true;
}

PolyC mu_inverse(const RatMatrix& phi, int n) {
  if (!is_symplectic_lie(phi, n)) throw NotSymplecticLieAlgebra("phi^T Omega + Omega phi != 0");
  int m = 2 * n;
  PolyC X(n);
  // X(v) = -(i/2) sum phi_ab v_b Omega_ac v_c
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (phi[a * m + b].is_zero()) continue;
      for (int c = 0; c < m; ++c) {
        int o = omega_entry(a, c, n);
        if (!o) continue;
        Mono mono{};
        mono[b] += 1;
        mono[c] += 1;
        X.add_term(mono, CRat(0) - kHalfI * phi[a * m + b] * CRat(o));
      }
    }
  return X;
}

PairC nu(const RatMatrix& phi, int n, int depth) {
  return make_paired(expand(SymbolC(mu_inverse(phi, n)), 2, depth), Convention::A);
}

PolyC lie_action(const RatMatrix& phi, const PolyC& w) {
  // (phi.w)(v) = -w(phi v), differentiated: -sum_a d_a w (phi v)_a
  int n = w.n(), m = 2 * n;
  PolyC out(n);
  for (int a = 0; a < m; ++a) {
    PolyC lin(n);
    for (int b = 0; b < m; ++b)
      if (!phi[a * m + b].is_zero()) lin += PolyC::var(n, b, CRat(0) - phi[a * m + b]);
    if (!lin.is_zero()) out += w.deriv(a) * lin;
  }
  return out;
}

std::vector<cplx> SpBasis::coordinates(const cplx* M) const {
  int m = 2 * n;
  // Split M = K + P with K = (M - J M J)/2 commuting with J.
  auto J = j_std(n);
  std::vector<cplx> JMJ(m * m, 0.0), K(m * m), P(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      cplx s = 0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += J[i * m + a] * M[a * m + b] * J[b * m + j];
      JMJ[i * m + j] = s;
    }
  for (int i = 0; i < m * m; ++i) {
    K[i] = 0.5 * (M[i] - JMJ[i]);
    P[i] = 0.5 * (M[i] + JMJ[i]);
  }
  std::vector<cplx> co;
  // u(n): K = [[A, -B], [B, A]]
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) co.push_back(K[i * m + j]);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) co.push_back(K[(n + i) * m + j]);
  // p: P = [[A, B], [B, -A]]
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) co.push_back(P[i * m + j]);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) co.push_back(P[i * m + n + j]);
  return co;
}

const SpBasis& sp_basis(int n) {
  static std::mutex mu;
  static std::map<int, SpBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  int m = 2 * n;
  SpBasis B;
  B.n = n;
  auto blank = [&] { return RatMatrix(m * m, CRat(0)); };
  auto sym = [&](RatMatrix& X, int r0, int c0, int i, int j, const CRat& v) {
    X[(r0 + i) * m + c0 + j] += v;
    if (i != j) X[(r0 + j) * m + c0 + i] += v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      RatMatrix X = blank();
      for (int h = 0; h < 2; ++h) {
        X[(h * n + i) * m + h * n + j] = CRat(1);
        X[(h * n + j) * m + h * n + i] = CRat(-1);
      }
      B.X.push_back(X);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      RatMatrix X = blank();
      sym(X, n, 0, i, j, CRat(1));   // B lower-left
      sym(X, 0, n, i, j, CRat(-1));  // -B upper-right
      B.X.push_back(X);
    }
  B.unitary_count = static_cast<int>(B.X.size());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      RatMatrix X = blank();
      sym(X, 0, 0, i, j, CRat(1));
      sym(X, n, n, i, j, CRat(-1));
      B.X.push_back(X);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      RatMatrix X = blank();
      sym(X, 0, n, i, j, CRat(1));
      sym(X, n, 0, i, j, CRat(1));
      B.X.push_back(X);
    }
  return cache.emplace(n, B).first->second;
}

void FiberForm::add(const PairC& b, Form C) {
  if (C.is_zero() || pair_zero(b)) return;
  if (C.degree() != degree) throw DomainError("fiber term of the wrong degree");
  for (auto& t : terms) {
    if (auto c = pair_ratio(b, t.b)) {
      Form add = C * c->to_cplx();
      if (t.C.r() != add.r()) {
        int R = std::max(t.C.r(), add.r());
        if (t.C.r() != R) t.C = embed(t.C, R, 0, R);
        if (add.r() != R) add = embed(add, R, 0, R);
      }
      t.C += add;
      return;
    }
  }
  r = std::max(r, C.r());
  terms.push_back({b, std::move(C)});
}

FiberForm operator+(const FiberForm& a, const FiberForm& b) {
  FiberForm s = a;
  s.r = std::max(a.r, b.r);
  for (const auto& t : b.terms) s.add(t.b, t.C);
  return s;
}

FiberForm operator-(const FiberForm& a, const FiberForm& b) {
  FiberForm s = a;
  s.r = std::max(a.r, b.r);
  for (const auto& t : b.terms) s.add(t.b, t.C * cplx(-1));
  return s;
}

FiberForm fiber_mul(const FiberForm& a, const FiberForm& b, Exec ex) {
  FiberForm out(a.M, a.degree + b.degree, std::max(a.r, b.r));
  if (out.degree > a.M->dim) return out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      PairC p = pair_mul(ta.b, tb.b);
      if (pair_zero(p)) continue;
      out.add(p, wedge(ta.C, tb.C, ex));
    }
  return out;
}

FiberForm fiber_commutator(const FiberForm& a, const FiberForm& b, Exec ex) {
  FiberForm ab = fiber_mul(a, b, ex), ba = fiber_mul(b, a, ex);
  if ((a.degree * b.degree) % 2) return ab + ba;
  return ab - ba;
}

Form apply_functional(const FiberForm& a, const std::function<cplx(const PairC&)>& f) {
  Form out(a.M, a.degree, a.r);
  for (const auto& t : a.terms) {
    cplx v = f(t.b);
    if (v == 0.0) continue;
    out += (t.C.r() == a.r ? t.C : embed(t.C, a.r, 0, a.r)) * v;
  }
  return out;
}

Form evaluate_closure(const FiberForm& a, const std::vector<double>& v, bool plus) {
  return apply_functional(a, [&](const PairC& p) {
    const auto& e = plus ? p.plus : p.minus;
    if (!e.closure) throw MissingClosure("fiber factor has no closed form");
    return e.closure->eval(v);
  });
}

PairC identity_pair(int n, int depth) { return scalar_pair(n, CRat(1), depth, Convention::A); }

PairC vacuum_pair(int n, int depth) {
  PhgExpansion<CRat> plus(n, 0, depth), minus(n, 0, depth);
  plus.closure = vacuum_symbol(n);
  minus.closure = SymbolC(n);
  return make_paired<CRat>(plus, Convention::A, std::optional<PhgExpansion<CRat>>(minus));
}

FiberForm constant_section(ManifoldPtr M, const MatrixSymbol<CRat>& s) {
  s.validate();
  int r = s.r;
  FiberForm f(M, 0, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      f.add(s.at(i, j).to_convention(Convention::A),
            constant_matrix(M, r, [&](int a, int b) { return a == i && b == j ? cplx(1) : cplx(0); }));
  f.r = r;
  return f;
}

FiberForm function_section(const Form& g, int depth) {
  if (g.degree() != 0) throw DomainError("a section needs a 0-form");
  FiberForm f(g.manifold(), 0, g.r());
  f.add(identity_pair(g.manifold()->n, depth), g);
  return f;
}

FiberForm toeplitz_symbol(const Form& f, int depth) {
  if (f.degree() != 0) throw DomainError("Toeplitz symbol needs a 0-form");
  double defect = unitarity_defect(f);
  if (defect > 1e-12) throw NotUnitary("f*f - 1 = " + std::to_string(defect));
  int r = f.r(), n = f.manifold()->n;
  Form id = constant_matrix(f.manifold(), r, [](int i, int j) { return i == j ? cplx(1) : cplx(0); });
  FiberForm s(f.manifold(), 0, r);
  s.add(identity_pair(n, depth), id);
  s.add(vacuum_pair(n, depth), f - id);
  s.r = r;
  return s;
}

FiberForm direct_sum(const FiberForm& a, const FiberForm& b) {
  int R = a.r + b.r;
  FiberForm s(a.M, a.degree, R);
  for (const auto& t : a.terms) s.add(t.b, embed(t.C, R, 0, a.r));
  for (const auto& t : b.terms) s.add(t.b, embed(t.C, R, a.r, b.r));
  return s;
}

FiberForm fiber_inverse(const FiberForm& sigma) {
  if (sigma.degree != 0) throw DomainError("only sections can be inverted");
  if (sigma.terms.empty()) throw NotElliptic("zero symbol");
  ManifoldPtr M = sigma.M;
  int R = sigma.r;
  if (sigma.terms.size() == 1) {
    const auto& t = sigma.terms[0];
    FiberForm out(M, 0, R);
    out.add(invert(t.b, t.b.depth()), pointwise_inverse(t.C));
    return out;
  }
  const int K = static_cast<int>(sigma.terms.size());
  int n = M->n, depth = sigma.terms[0].b.depth();
  PairC e = identity_pair(n, depth);
  int id = -1;
  CRat eps;
  for (int k = 0; k < K && id < 0; ++k)
    if (auto c = pair_ratio(e, sigma.terms[k].b)) {
      id = k;
      eps = *c;
    }
  if (id < 0) throw DomainError("fiber factors do not contain the identity");
  // structure constants b_j b_k = c_jk b_{l(j,k)}
  std::vector<int> lidx(K * K, -1);
  std::vector<cplx> cst(K * K, 0.0);
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k) {
      PairC p = pair_mul(sigma.terms[j].b, sigma.terms[k].b);
      if (pair_zero(p)) continue;
      for (int l = 0; l < K; ++l)
        if (auto c = pair_ratio(p, sigma.terms[l].b)) {
          lidx[j * K + k] = l;
          cst[j * K + k] = c->to_cplx();
          break;
        }
      if (lidx[j * K + k] < 0) throw DomainError("fiber factors do not span a product-closed algebra");
    }
  std::vector<Form> Y(K, Form(M, 0, R));
  const int S = K * R * R;
  for (size_t c = 0; c < M->charts.size(); ++c) {
    long nn = static_cast<long>(M->charts[c].nodes());
    bool singular = false;
    double worst = 0;
    for (long vi = 0; vi < nn; ++vi) {
      size_t v = static_cast<size_t>(vi);
      // x y: component m entry (p, q) = sum c_jk [l = m] C_j(p, s) Y_k(s, q)
      auto left = [&](bool left_mult) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(S, S);
        for (int j = 0; j < K; ++j)
          for (int k = 0; k < K; ++k) {
            // left_mult: known x_j times unknown y_k; otherwise unknown y_j times known x_k
            int l = lidx[j * K + k];
            if (l < 0) continue;
            cplx cc = cst[j * K + k];
            for (int p = 0; p < R; ++p)
              for (int q = 0; q < R; ++q)
                for (int s = 0; s < R; ++s) {
                  int row = (l * R + p) * R + q;
                  if (left_mult) {
                    cplx x = block_entry(sigma.terms[j].C, c, v, 0, p, s);
                    if (x != 0.0) A(row, (k * R + s) * R + q) += cc * x;
                  } else {
                    cplx x = block_entry(sigma.terms[k].C, c, v, 0, s, q);
                    if (x != 0.0) A(row, (j * R + p) * R + s) += cc * x;
                  }
                }
          }
        return A;
      };
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(S);
      for (int p = 0; p < R; ++p) rhs((id * R + p) * R + p) = eps.to_cplx();
      Eigen::MatrixXcd A = left(true);
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
      if (!lu.isInvertible()) {
        singular = true;
        continue;
      }
      Eigen::VectorXcd y = lu.solve(rhs);
      worst = std::max(worst, (left(false) * y - rhs).cwiseAbs().maxCoeff());
      for (int k = 0; k < K; ++k)
        for (int p = 0; p < R; ++p)
          for (int q = 0; q < R; ++q) Y[k].at(c, v, 0)[p * R + q] = y((k * R + p) * R + q);
    }
    if (singular) throw NotElliptic("symbol is not invertible at some node");
    if (worst > 1e-8) throw NotElliptic("fiber inverse is only one-sided");
  }
  FiberForm out(M, 0, R);
  for (int k = 0; k < K; ++k) out.add(sigma.terms[k].b, Y[k]);
  out.r = R;
  return out;
}

FiberForm nu_beta(const Connection& c, int depth) {
  return factor_sp_form(c.beta, c.beta.manifold()->n, depth);
}

FiberForm theta_bold(const Connection& c, int depth) {
  return factor_sp_form(c.theta, c.theta.manifold()->n, depth);
}

FiberForm nabla(const FiberForm& eta, const Connection& conn, int depth, Exec ex) {
  int n = eta.M->n;
  FiberForm out(eta.M, eta.degree + 1, eta.r);
  for (const auto& t : eta.terms) out.add(t.b, d(t.C, ex));
  auto co = sp_coordinate_forms(conn.beta, n);
  const auto& nus = nu_basis(n, depth);
  for (size_t A = 0; A < co.size(); ++A) {
    if (co[A].is_zero()) continue;
    for (const auto& t : eta.terms) {
      PairC comm = pair_commutator(nus[A].to_convention(Convention::A), t.b.to_convention(Convention::A));
      if (pair_zero(comm)) continue;
      out.add(comm, wedge(co[A], t.C, ex));
    }
  }
  out.r = eta.r;
  return out;
}

const char* tau_path_name(TauPath p) {
  switch (p) {
    case TauPath::PolynomialZero: return "polynomial-zero";
    case TauPath::Fock: return "fock";
    case TauPath::Heat: return "heat";
  }
  return "?";
}

TauPath tau_path(const PairC& p) {
  bool closures = p.plus.closure && p.minus.closure;
  if (closures && p.plus.closure->is_poly() && p.minus.closure->is_poly()) return TauPath::PolynomialZero;
  if (closures && p.plus.expansion_zero() && p.minus.expansion_zero() &&
      p.plus.closure->tag() != ClassTag::Resolvent && p.minus.closure->tag() != ClassTag::Resolvent)
    return TauPath::Fock;
  return TauPath::Heat;
}

cplx tau_dispatch(const PairC& p) {
  switch (tau_path(p)) {
    case TauPath::PolynomialZero: return 0.0;
    case TauPath::Fock: return tau_fock(p).value;
    case TauPath::Heat: return tau(p).value;
  }
  return 0.0;
}

namespace {

struct WordEval {
  const std::vector<const FiberForm*>& factors;
  std::map<std::vector<std::pair<int, int>>, cplx>& cache;  // (factor id, term) tuple -> tau
  std::map<std::string, int>& paths;
  const std::vector<int>& ids;
  Exec ex;
  Form acc;
  int tuples = 0;

  void run(size_t pos, std::vector<int>& choice, const std::optional<PairC>& prod) {
    if (pos == factors.size()) {
      std::vector<std::pair<int, int>> key;
      for (size_t i = 0; i < choice.size(); ++i) key.emplace_back(ids[i], choice[i]);
      auto it = cache.find(key);
      cplx t;
      if (it != cache.end()) {
        t = it->second;
      } else {
        paths[tau_path_name(tau_path(*prod))]++;
        t = tau_dispatch(*prod);
        cache.emplace(key, t);
      }
      if (t == 0.0) return;
      Form w = factors[0]->terms[choice[0]].C;
      for (size_t i = 1; i < factors.size(); ++i) w = wedge(w, factors[i]->terms[choice[i]].C, ex);
      acc += matrix_trace(w) * t;
      ++tuples;
      return;
    }
    for (size_t k = 0; k < factors[pos]->terms.size(); ++k) {
      choice.push_back(static_cast<int>(k));
      const PairC& b = factors[pos]->terms[k].b;
      PairC next = prod ? pair_mul(*prod, b) : b;
      if (!pair_zero(next)) run(pos + 1, choice, next);
      choice.pop_back();
    }
  }
};

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= total; ++i) {
    cur.push_back(i);
    compositions(total - i, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

ChiResult chi(const FiberForm& sigma, const Connection& conn, int depth, Exec ex) {
  ManifoldPtr M = sigma.M;
  int D = M->dim;
  FiberForm sinv = fiber_inverse(sigma);
  FiberForm ds = nabla(sigma, conn, depth, ex);
  FiberForm dsinv = nabla(sinv, conn, depth, ex);
  FiberForm th = theta_bold(conn, depth);
  const FiberForm* table[4] = {&sinv, &ds, &dsinv, &th};
  const char* names[4] = {"sigma^-1", "nabla(sigma)", "nabla(sigma^-1)", "theta"};
  ChiResult res;
  for (int k = 0; k <= D; ++k) res.chi.emplace_back(M, k, 1);
  std::map<std::vector<std::pair<int, int>>, cplx> cache;
  const cplx base = -1.0 / (2 * pi * cplx(0, 1));
  double fact_l = 1;
  for (int l = 0; 2 * l + 1 <= D; ++l) {
    if (l > 0) fact_l *= l;
    for (int I = 0; 2 * I + 2 * l + 1 <= D; ++I) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(I, 2 * l + 2, cur, comps);
      double fact = 1;
      for (int q = 2; q <= I + 2 * l + 1; ++q) fact *= q;
      cplx coef = std::pow(base, I + l + 1) * (fact_l / fact);
      for (const auto& comp : comps) {
        std::vector<int> ids{0};
        for (int m = 0; m <= 2 * l + 1; ++m) {
          for (int q = 0; q < comp[m]; ++q) ids.push_back(3);
          if (m < 2 * l + 1) ids.push_back(m % 2 == 0 ? 1 : 2);
        }
        std::vector<const FiberForm*> factors;
        std::string word;
        for (int id : ids) {
          factors.push_back(table[id]);
          if (!word.empty()) word += " ";
          word += names[id];
        }
        int deg = 2 * I + 2 * l + 1;
        WordTerm wt;
        wt.word = word;
        wt.degree = deg;
        wt.coefficient = coef;
        WordEval ev{factors, cache, res.tau_paths, ids, ex, Form(M, deg, 1)};
        std::vector<int> choice;
        ev.run(0, choice, std::nullopt);
        wt.tuples = ev.tuples;
        wt.value = ev.acc * coef;
        res.chi[deg] += wt.value;
        res.words.push_back(std::move(wt));
      }
    }
  }
  return res;
}

IndexReport index(const FiberForm& sigma, const Connection& conn, int depth, Exec ex) {
  ChiResult ch = chi(sigma, conn, depth, ex);
  FormSeries ahat = a_hat(conn);
  IndexReport r;
  r.value = integrate_checked(top_wedge(ch.chi, ahat, ex), 1e-2, ex);
  r.nearest = std::lround(r.value.real());
  r.abs_error = std::abs(r.value - cplx(static_cast<double>(r.nearest)));
  for (const auto& w : ch.words)
    if (w.degree == sigma.M->dim) r.per_term.emplace_back(w.word, integrate(w.value, ex));
  return r;
}

TauThetaReport tau_theta_check(const Connection& conn, int kmax, int samples, int depth) {
  ManifoldPtr M = conn.theta.manifold();
  int n = M->n;
  TauThetaReport rep;
  for (const auto& ch : M->charts) rep.nodes += static_cast<int>(ch.nodes());
  FiberForm th = theta_bold(conn, depth);
  FiberForm power(M, 0, 1);
  power.add(identity_pair(n, depth), scalar_function(M, [](size_t, size_t) { return cplx(1); }));
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      // theta^k as a fiber element with formal commuting coefficients: the
      // product runs over fiber factors only, so degrees beyond dim M survive.
      FiberForm next(M, 0, 1);
      for (const auto& a : power.terms)
        for (const auto& b : th.terms) {
          PairC p = pair_mul(a.b, b.b);
          if (!pair_zero(p)) next.terms.push_back({p, Form(M, 0, 1)});
        }
      power = next;
    }
    for (const auto& t : power.terms) {
      if (tau_path(t.b) != TauPath::PolynomialZero) throw DomainError("theta power left the polynomial class");
      rep.shortcut_max = std::max(rep.shortcut_max, std::abs(tau_dispatch(t.b)));
    }
  }
  // heat route on node values
  const Chart& ch = M->charts[0];
  std::vector<size_t> picks;
  for (size_t v = 0; v < ch.nodes() && static_cast<int>(picks.size()) < samples; v += 131)
    if (ch.rho[v] > 0.5 && ch.interior(v, 2)) picks.push_back(v);
  int m = 2 * n;
  for (size_t v : picks) {
    std::vector<PairC> comps;
    const SpBasis& B = sp_basis(n);
    for (int c = 0; c < conn.theta.ncomp(); ++c) {
      // rationalise the sp coordinates so the sample stays exactly in sp(2n)
      RatMatrix phi(m * m, CRat(0));
      auto co = B.coordinates(conn.theta.at(0, v, c));
      for (size_t A = 0; A < co.size(); ++A) {
        CRat q(Rat(co[A].real()), Rat(co[A].imag()));
        for (int i = 0; i < m * m; ++i) phi[i] += q * B.X[A][i];
      }
      comps.push_back(nu(phi, n, depth));
    }
    std::function<void(int, const PairC&)> rec = [&](int k, const PairC& p) {
      rep.heat_max = std::max(rep.heat_max, std::abs(tau(p).value));
      ++rep.heat_evaluations;
      if (k == kmax) return;
      for (const auto& q : comps) rec(k + 1, pair_mul(p, q));
    };
    rec(0, identity_pair(n, depth));
  }
  return rep;
}

FormSeries toeplitz_character_closed(const Form& f, const Connection& conn, Exec ex) {
  ManifoldPtr M = f.manifold();
  int D = M->dim;
  FormSeries ch = ch_odd(f, ex);
  // exp(c1/2) through degree D
  FormSeries e;
  for (int k = 0; k <= D; ++k) e.emplace_back(M, k, 1);
  e[0] = scalar_function(M, [](size_t, size_t) { return cplx(1); });
  if (D >= 2) {
    Form half = c1(conn) * cplx(0.5);
    Form p = half;
    double fact = 1;
    for (int k = 1; 2 * k <= D; ++k) {
      if (k > 1) {
        p = wedge(p, half, ex);
        fact *= k;
      }
      e[2 * k] = p * cplx(1.0 / fact);
    }
  }
  FormSeries out;
  for (int k = 0; k <= D; ++k) {
    Form s(M, k, 1);
    for (int p = 0; p <= k; ++p) s += wedge(ch[p], e[k - p], ex);
    out.push_back(s);
  }
  return out;
}

}  // namespace heisen
