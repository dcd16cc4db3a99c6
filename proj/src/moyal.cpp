#include "heisen/moyal.hpp"

#include "heisen/paired.hpp"

#include <mutex>

namespace heisen {

const char* class_tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::Rational: return "rational";
    case ClassTag::Gaussian: return "gaussian";
    case ClassTag::Resolvent: return "resolvent-integral";
    case ClassTag::None: return "none";
  }
  return "none";
}

const char* convention_name(Convention c) { return c == Convention::A ? "A" : "heisenberg"; }

std::vector<Mono> multi_indices(int nv, int k) {
  std::vector<Mono> out;
  Mono m{};
  auto rec = [&](auto&& self, int v, int left) -> void {
    if (v == nv - 1) {
      m[v] = static_cast<uint8_t>(left);
      out.push_back(m);
      return;
    }
    for (int e = left; e >= 0; --e) {
      m[v] = static_cast<uint8_t>(e);
      self(self, v + 1, left - e);
    }
  };
  rec(rec, 0, k);
  return out;
}

Rat mono_factorial(const Mono& m) {
  Rat f = 1;
  for (auto e : m) f *= factorial(e);
  return f;
}

namespace detail {

static long falling(int a, int p) {
  long r = 1;
  for (int t = 0; t < p; ++t) r *= (a - t);
  return r;
}

std::vector<ModeTerm> mode_moyal(int ax, int aq, int bx, int bq) {
  std::vector<ModeTerm> out;
  for (int p = 0; p <= std::min(ax, bq); ++p)
    for (int q = 0; q <= std::min(aq, bx); ++q) {
      Rat c = Rat(falling(ax, p) * falling(bq, p)) * Rat(falling(aq, q) * falling(bx, q)) /
              (factorial(p) * factorial(q));
      if (q % 2) c = -c;
      out.push_back({p + q, c, ax - p + bx - q, aq - q + bq - p});
    }
  return out;
}

}  // namespace detail

namespace {

// One mode of the Gaussian kernel: the polynomial in (x, xi) multiplying
// D^{-1} e^{-nu Q} in (x^ax xi^aq e^{-lQ}) # (x^bx xi^bq e^{-mQ}).
template <class T>
Poly<T> mode_gauss(const Rat& l, const Rat& m, int ax, int aq, int bx, int bq) {
  using F = Field<T>;
  using P6 = Poly<T>;  // variables: x, xi, b1, b2, c1, c2
  const int X = 0, XI = 1, B1 = 2, B2 = 3, C1 = 4, C2 = 5;
  Rat D = 1 + l * m;
  T iu = F::imag_unit();
  auto v = [&](int idx) { return P6::var(3, idx); };
  auto c = [&](const Rat& r) { return F::from_rat(r); };
  P6 Lx = v(B1) + v(C1) + v(B2) * (iu * c(m)) - v(C2) * (iu * c(l));
  P6 Lxi = v(B2) + v(C2) - v(B1) * (iu * c(m)) + v(C1) * (iu * c(l));
  P6 E = (v(X) * Lx + v(XI) * Lxi) * c(1 / D);
  E += (v(B1) * v(B1) + v(B2) * v(B2)) * c(m / (4 * D));
  E += (v(C1) * v(C1) + v(C2) * v(C2)) * c(l / (4 * D));
  E += (v(B1) * v(C2) - v(B2) * v(C1)) * (iu * c(1 / (2 * D)));

  const int cap[6] = {255, 255, ax, aq, bx, bq};
  auto trunc = [&](const P6& p) {
    P6 r(3);
    for (const auto& [mo, co] : p.terms()) {
      bool ok = true;
      for (int i = B1; i <= C2; ++i) ok = ok && mo[i] <= cap[i];
      if (ok) r.add_term(mo, co);
    }
    return r;
  };
  int N = ax + aq + bx + bq;
  P6 term = P6::constant(3, F::one());
  P6 sum = term;
  for (int k = 1; k <= N; ++k) {
    term = trunc(term * E) * c(Rat(1, k));
    sum += term;
  }
  Rat scale = factorial(ax) * factorial(aq) * factorial(bx) * factorial(bq);
  Poly<T> out(1);
  for (const auto& [mo, co] : sum.terms()) {
    if (mo[B1] != ax || mo[B2] != aq || mo[C1] != bx || mo[C2] != bq) continue;
    Mono mm{};
    mm[0] = mo[X];
    mm[1] = mo[XI];
    out.add_term(mm, co * c(scale / D));
  }
  return out;
}

template <class T>
const Poly<T>& mode_gauss_cached(const Rat& l, const Rat& m, int ax, int aq, int bx, int bq) {
  using Key = std::tuple<Rat, Rat, int, int, int, int>;
  static std::mutex mu;
  static std::map<Key, Poly<T>> cache;
  Key key{l, m, ax, aq, bx, bq};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Poly<T> p = mode_gauss<T>(l, m, ax, aq, bx, bq);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(p)).first->second;
}

}  // namespace

template <class T>
Symbol<T> gauss_star(const Poly<T>& Pa, const Rat& l, const Poly<T>& Pb, const Rat& m) {
  int n = std::max(Pa.n(), Pb.n());
  Rat nu = (l + m) / (1 + l * m);
  Poly<T> acc(n);
  for (const auto& [ma, ca] : Pa.terms())
    for (const auto& [mb, cb] : Pb.terms()) {
      Poly<T> prod = Poly<T>::constant(n, ca * cb);
      for (int j = 0; j < n && !prod.is_zero(); ++j) {
        const Poly<T>& pm = mode_gauss_cached<T>(l, m, ma[j], ma[n + j], mb[j], mb[n + j]);
        Poly<T> emb(n);
        for (const auto& [mo, co] : pm.terms()) {
          Mono e{};
          e[j] = mo[0];
          e[n + j] = mo[1];
          emb.add_term(e, co);
        }
        prod = prod * emb;
      }
      acc += prod;
    }
  Symbol<T> out(n);
  if (!acc.is_zero()) out.add(Profile::gauss(nu), acc);
  return out;
}

template Symbol<CRat> gauss_star(const Poly<CRat>&, const Rat&, const Poly<CRat>&, const Rat&);
template Symbol<cplx> gauss_star(const Poly<cplx>&, const Rat&, const Poly<cplx>&, const Rat&);

}  // namespace heisen
