#include "heisen/forms.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "heisen/errors.hpp"

namespace heisen {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool has_nan(const cplx* p, size_t k) {
  for (size_t i = 0; i < k; ++i)
    if (std::isnan(p[i].real()) || std::isnan(p[i].imag())) return true;
  return false;
}

void require_same(const Form& a, const Form& b) {
  if (a.manifold() != b.manifold()) throw DomainError("forms live on different manifolds");
}

// c += a * b for r x r blocks; ra or rb may be 1 (scalar broadcast).
void block_mul_add(cplx* c, const cplx* a, int ra, const cplx* b, int rb, int r, double sign) {
  if (ra == 1 && rb == 1) {
    c[0] += sign * a[0] * b[0];
  } else if (ra == 1) {
    cplx s = sign * a[0];
    for (int i = 0; i < r * r; ++i) c[i] += s * b[i];
  } else if (rb == 1) {
    cplx s = sign * b[0];
    for (int i = 0; i < r * r; ++i) c[i] += s * a[i];
  } else {
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < r; ++k) {
        cplx aik = sign * a[i * r + k];
        if (aik == 0.0) continue;
        for (int j = 0; j < r; ++j) c[i * r + j] += aik * b[k * r + j];
      }
  }
}

}  // namespace

size_t Chart::nodes() const {
  size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<size_t>(N);
  return s;
}

size_t Chart::stride(int axis) const {
  size_t s = 1;
  for (int a = dim - 1; a > axis; --a) s *= static_cast<size_t>(N);
  return s;
}

int Chart::axis_index(size_t node, int axis) const { return static_cast<int>((node / stride(axis)) % N); }

double Chart::coord(size_t node, int axis) const { return -L + h * axis_index(node, axis); }

bool Chart::interior(size_t node, int margin) const {
  if (margin == 0) return true;
  if (N == 1) return false;
  for (int a = 0; a < dim; ++a) {
    int i = axis_index(node, a);
    if (i < margin || i > N - 1 - margin) return false;
  }
  return true;
}

const std::vector<unsigned>& components(int D, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<unsigned>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(D, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<std::vector<int>, unsigned>> v;
  for (unsigned m = 0; m < (1u << D); ++m) {
    if (std::popcount(m) != k) continue;
    std::vector<int> idx;
    for (int i = 0; i < D; ++i)
      if (m >> i & 1u) idx.push_back(i);
    v.emplace_back(idx, m);
  }
  std::sort(v.begin(), v.end());
  std::vector<unsigned> out;
  for (auto& [idx, m] : v) out.push_back(m);
  return cache.emplace(key, out).first->second;
}

int component_index(int D, unsigned mask) {
  const auto& c = components(D, std::popcount(mask));
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] == mask) return static_cast<int>(i);
  throw DomainError("multi-index out of range");
}

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int inv = 0;
  for (unsigned x = a; x; x &= x - 1) {
    int i = std::countr_zero(x);
    inv += std::popcount(b & ((1u << i) - 1u));  // j in b with j < i
  }
  return inv % 2 ? -1 : 1;
}

Form::Form(ManifoldPtr M, int degree, int r) : M_(std::move(M)), deg_(degree), r_(r) {
  if (degree < 0 || degree > M_->dim) throw DomainError("form degree out of range");
  ncomp_ = static_cast<int>(components(M_->dim, degree).size());
  for (const auto& c : M_->charts) data_.emplace_back(c.nodes() * ncomp_ * block(), cplx(0.0));
}

bool Form::is_zero() const {
  for (const auto& v : data_)
    for (const auto& x : v)
      if (x != 0.0 && !std::isnan(x.real())) return false;
  return true;
}

double Form::max_abs(int margin) const {
  double m = 0;
  for (size_t c = 0; c < data_.size(); ++c) {
    const Chart& ch = M_->charts[c];
    for (size_t v = 0; v < ch.nodes(); ++v) {
      if (!ch.interior(v, margin)) continue;
      for (int k = 0; k < ncomp_; ++k)
        for (size_t e = 0; e < block(); ++e) m = std::max(m, std::abs(at(c, v, k)[e]));
    }
  }
  return m;
}

Form& Form::operator+=(const Form& o) {
  require_same(*this, o);
  if (o.deg_ != deg_ || o.r_ != r_) throw DomainError("adding forms of different shape");
  for (size_t c = 0; c < data_.size(); ++c)
    for (size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += o.data_[c][i];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  require_same(*this, o);
  if (o.deg_ != deg_ || o.r_ != r_) throw DomainError("subtracting forms of different shape");
  for (size_t c = 0; c < data_.size(); ++c)
    for (size_t i = 0; i < data_[c].size(); ++i) data_[c][i] -= o.data_[c][i];
  return *this;
}

Form& Form::operator*=(cplx s) {
  for (auto& v : data_)
    for (auto& x : v) x *= s;
  return *this;
}

Form function_form(ManifoldPtr M, int r, const std::function<void(size_t, size_t, cplx*)>& fn) {
  Form f(M, 0, r);
  for (size_t c = 0; c < M->charts.size(); ++c)
    for (size_t v = 0; v < M->charts[c].nodes(); ++v) fn(c, v, f.at(c, v, 0));
  return f;
}

Form scalar_function(ManifoldPtr M, const std::function<cplx(size_t, size_t)>& fn) {
  return function_form(std::move(M), 1, [&](size_t c, size_t v, cplx* out) { out[0] = fn(c, v); });
}

Form one_form(ManifoldPtr M, int r, const std::function<void(size_t, size_t, int, cplx*)>& fn) {
  Form f(M, 1, r);
  const auto& comps = components(M->dim, 1);
  for (size_t c = 0; c < M->charts.size(); ++c)
    for (size_t v = 0; v < M->charts[c].nodes(); ++v)
      for (size_t k = 0; k < comps.size(); ++k) fn(c, v, std::countr_zero(comps[k]), f.at(c, v, static_cast<int>(k)));
  return f;
}

Form d(const Form& a, Exec ex) {
  const Manifold& M = *a.manifold();
  int D = M.dim, k = a.degree();
  for (const auto& ch : M.charts)
    if (ch.N < 5) throw BoundaryStencil("chart has no room for a difference stencil");
  if (k == D) return Form(a.manifold(), D, a.r());
  Form out(a.manifold(), k + 1, a.r());
  const auto& src = components(D, k);
  const auto& dst = components(D, k + 1);
  // (d a)_I = sum_{mu in I} (-1)^{pos(mu, I)} d_mu a_{I \ mu}
  struct Term { int out_comp, in_comp, axis; double sign; };
  std::vector<Term> terms;
  for (size_t o = 0; o < dst.size(); ++o) {
    int pos = 0;
    for (int mu = 0; mu < D; ++mu) {
      if (!(dst[o] >> mu & 1u)) continue;
      unsigned rest = dst[o] & ~(1u << mu);
      int in = -1;
      for (size_t s = 0; s < src.size(); ++s)
        if (src[s] == rest) in = static_cast<int>(s);
      terms.push_back({static_cast<int>(o), in, mu, pos % 2 ? -1.0 : 1.0});
      ++pos;
    }
  }
  size_t B = a.block();
  for (size_t c = 0; c < M.charts.size(); ++c) {
    const Chart& ch = M.charts[c];
    long nn = static_cast<long>(ch.nodes());
    double inv12h = ch.h > 0 ? 1.0 / (12.0 * ch.h) : 0.0;
    auto body = [&](long vi) {
      size_t v = static_cast<size_t>(vi);
      if (!ch.interior(v, 2)) {
        for (int o = 0; o < out.ncomp(); ++o)
          for (size_t e = 0; e < B; ++e) out.at(c, v, o)[e] = cplx(kNaN, kNaN);
        return;
      }
      for (const auto& t : terms) {
        size_t s = ch.stride(t.axis);
        const cplx* m2 = a.at(c, v - 2 * s, t.in_comp);
        const cplx* m1 = a.at(c, v - s, t.in_comp);
        const cplx* p1 = a.at(c, v + s, t.in_comp);
        const cplx* p2 = a.at(c, v + 2 * s, t.in_comp);
        cplx* o = out.at(c, v, t.out_comp);
        for (size_t e = 0; e < B; ++e) o[e] += t.sign * inv12h * ((m2[e] - p2[e]) + 8.0 * (p1[e] - m1[e]));
      }
    };
    if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long v = 0; v < nn; ++v) body(v);
    } else {
      for (long v = 0; v < nn; ++v) body(v);
    }
  }
  return out;
}

Form wedge(const Form& a, const Form& b, Exec ex) {
  require_same(a, b);
  const Manifold& M = *a.manifold();
  int D = M.dim;
  int r = std::max(a.r(), b.r());
  if (a.r() != 1 && b.r() != 1 && a.r() != b.r()) throw DomainError("matrix sizes differ in wedge");
  if (a.degree() + b.degree() > D) return Form(a.manifold(), D, r);
  Form out(a.manifold(), a.degree() + b.degree(), r);
  const auto& ca = components(D, a.degree());
  const auto& cb = components(D, b.degree());
  struct Term { int ia, ib, io; double sign; };
  std::vector<Term> terms;
  for (size_t i = 0; i < ca.size(); ++i)
    for (size_t j = 0; j < cb.size(); ++j) {
      int s = wedge_sign(ca[i], cb[j]);
      if (s == 0) continue;
      terms.push_back({static_cast<int>(i), static_cast<int>(j), component_index(D, ca[i] | cb[j]),
                       static_cast<double>(s)});
    }
  for (size_t c = 0; c < M.charts.size(); ++c) {
    long nn = static_cast<long>(M.charts[c].nodes());
    auto body = [&](long vi) {
      size_t v = static_cast<size_t>(vi);
      for (const auto& t : terms)
        block_mul_add(out.at(c, v, t.io), a.at(c, v, t.ia), a.r(), b.at(c, v, t.ib), b.r(), r, t.sign);
    };
    if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long v = 0; v < nn; ++v) body(v);
    } else {
      for (long v = 0; v < nn; ++v) body(v);
    }
  }
  return out;
}

Form graded_commutator(const Form& a, const Form& b, Exec ex) {
  Form ab = wedge(a, b, ex);
  Form ba = wedge(b, a, ex);
  double s = (a.degree() * b.degree()) % 2 ? -1.0 : 1.0;
  return ab - ba * cplx(s);
}

Form matrix_trace(const Form& a) {
  Form out(a.manifold(), a.degree(), 1);
  int r = a.r();
  for (size_t c = 0; c < a.manifold()->charts.size(); ++c)
    for (size_t v = 0; v < a.manifold()->charts[c].nodes(); ++v)
      for (int k = 0; k < a.ncomp(); ++k) {
        cplx s = 0;
        const cplx* p = a.at(c, v, k);
        for (int i = 0; i < r; ++i) s += p[i * r + i];
        out.at(c, v, k)[0] = s;
      }
  return out;
}

namespace {

enum class Weight { One, Rho, Overlap, OverlapAbs };

cplx integrate_impl(const Form& top, size_t c, Weight wt, Exec ex) {
  const Manifold& M = *top.manifold();
  if (top.degree() != M.dim || top.r() != 1) throw DomainError("integrand must be a scalar top form");
  const Chart& ch = M.charts[c];
  double w = ch.orientation;
  for (int a = 0; a < ch.dim; ++a) w *= ch.h > 0 ? ch.h : 1.0;
  long nn = static_cast<long>(ch.nodes());
  auto term = [&](long vi, bool& bad) -> cplx {
    size_t v = static_cast<size_t>(vi);
    double rho = 1.0;
    if (wt == Weight::Rho) rho = ch.rho[v];
    if (wt == Weight::Overlap || wt == Weight::OverlapAbs) rho = ch.rho[v] * (1 - ch.rho[v]);
    if (rho == 0.0) return 0.0;
    const cplx* p = top.at(c, v, 0);
    if (has_nan(p, 1)) {
      bad = true;
      return 0.0;
    }
    return wt == Weight::OverlapAbs ? cplx(rho * std::abs(p[0])) : rho * p[0];
  };
  // Fixed blocks summed in order: the result does not depend on the thread count.
  constexpr long kBlocks = 64;
  std::vector<cplx> partial(kBlocks, 0.0);
  std::vector<char> bad_block(kBlocks, 0);
  auto block = [&](long b) {
    long lo = nn * b / kBlocks, hi = nn * (b + 1) / kBlocks;
    cplx s = 0;
    bool bad = false;
    for (long v = lo; v < hi; ++v) s += term(v, bad);
    partial[b] = s;
    bad_block[b] = bad;
  };
  if (ex == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < kBlocks; ++b) block(b);
  } else {
    for (long b = 0; b < kBlocks; ++b) block(b);
  }
  cplx sum = 0;
  bool bad = false;
  for (long b = 0; b < kBlocks; ++b) {
    sum += partial[b];
    bad = bad || bad_block[b];
  }
  if (bad) throw BoundaryStencil("integrand undefined where the partition function is positive");
  if (wt == Weight::OverlapAbs) w = std::abs(w);
  return w * sum;
}

}  // namespace

cplx integrate(const Form& top, Exec ex) {
  cplx s = 0;
  for (size_t c = 0; c < top.manifold()->charts.size(); ++c) s += integrate_impl(top, c, Weight::Rho, ex);
  return s;
}

cplx integrate_chart(const Form& top, size_t chart, Exec ex) { return integrate_impl(top, chart, Weight::One, ex); }

cplx integrate_checked(const Form& top, double rel_tol, Exec ex) {
  if (top.manifold()->charts.size() == 2) {
    cplx a = integrate_impl(top, 0, Weight::Overlap, ex), b = integrate_impl(top, 1, Weight::Overlap, ex);
    double scale = integrate_impl(top, 0, Weight::OverlapAbs, ex).real();
    if (std::abs(a - b) > rel_tol * scale + 1e-300)
      throw ChartOverlapMismatch("charts disagree on the overlap by " + std::to_string(std::abs(a - b)));
  }
  return integrate(top, ex);
}

}  // namespace heisen
