#include "heisen/rtrace.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <mutex>
#include <tuple>

namespace heisen {

const char* trace_route_name(TraceRoute r) {
  switch (r) {
    case TraceRoute::HeatClosedForm: return "heat-closed-form";
    case TraceRoute::NumericR: return "numeric-R-integral";
    case TraceRoute::FockTrace: return "fock-trace";
  }
  return "heat-closed-form";
}

namespace {

// (2pi)^{-n} int_{S^{2n-1}} p, exactly (the sphere integral is a rational
// multiple of pi^n).
CRat sphere_over_2pi_n(const PolyC& p) {
  PiMultiple s = sphere_integral_exact(p);
  return s.coef * CRat(Rat(1, 1L << p.n()));
}

struct RadialPart {
  Profile profile;
  int d = 0;  // degree of the homogeneous prefactor
  int D = 0;  // n + d/2
  CRat coef;  // (2pi)^{-n} int_{S^{2n-1}} prefactor
};

std::vector<RadialPart> radial_parts(const SymbolC& a) {
  std::vector<RadialPart> out;
  int n = a.n();
  for (const auto& [pr, p] : a.parts())
    for (int d = std::max(0, p.min_degree()); d <= p.degree(); ++d) {
      if (d % 2) continue;
      CRat c = sphere_over_2pi_n(p.homogeneous_part(d));
      if (c.is_zero()) continue;
      out.push_back({pr, d, n + d / 2, c});
    }
  return out;
}

// log L for L = 1 + O(t), from L (log L)' = L'.
LaurentC log_unit(const LaurentC& L) {
  LaurentC f(0, L.order());
  for (int k = 1; k <= L.order(); ++k) {
    CRat s = CRat(k) * L.coeff(k);
    for (int j = 1; j < k; ++j) s -= CRat(j) * f.coeff(j) * L.coeff(k - j);
    f.at(k) = s * CRat(Rat(1, k));
  }
  return f;
}

// Series shared by all parts, through working order W.
struct HeatSeries {
  int W;
  LaurentC one, s, log_sigma, one_plus_s, log_one_plus_s, sinh_over_t, cosh, cosh_mn;
  std::map<int, LaurentC> s_pow;

  HeatSeries(int n, int W_) : W(W_) {
    LaurentC th = series_tanh(W + 1);
    std::vector<CRat> c;
    for (int p = 1; p <= W + 1; ++p) c.push_back(th.coeff(p));
    s = LaurentC(1, c);
    LaurentC sigma(0, c);  // tanh t / t
    log_sigma = log_unit(sigma);
    one = LaurentC::constant(CRat(1), W);
    one_plus_s = one + s;
    log_one_plus_s = log_unit(one_plus_s);
    sinh_over_t = series_sinh_over_t(W);
    cosh = series_cosh(W);
    cosh_mn = cosh.pow(-n);
  }
  const LaurentC& spow(int p) {
    auto it = s_pow.find(p);
    if (it != s_pow.end()) return it->second;
    return s_pow.emplace(p, p == 0 ? one : s.pow(p)).first->second;
  }
};

// Taylor coefficients of W(u) = (-u)^k w(u) through u^J.
std::vector<Rat> weight_taylor(int n, const Rat& g, int k, int J) {
  auto w = resolvent_weight_taylor(n, g, std::max(0, J - k));
  std::vector<Rat> W(J + 1, Rat(0));
  for (int j = k; j <= J; ++j) W[j] = (k % 2 ? -w[j - k] : w[j - k]);
  return W;
}

double weight_value(int n, double g, int k, double u, double one_minus_u) {
  double a = (g + n) / 2 - 1, b = (n - g) / 2 - 1;
  double w = std::pow(1 + u, a) * std::pow(one_minus_u, b);
  return (k % 2 ? -1.0 : 1.0) * std::pow(u, k) * w;
}

// G_i = C(-D, i) int_0^1 r_J(u) u^{-D-i} du for i = 0..K, where r_J is W
// minus its Taylor polynomial of degree J - 1.
std::vector<double> remainder_moments(int n, const Rat& g, int k, int D, int J, int K) {
  using Key = std::tuple<int, Rat, int, int, int, int>;
  static std::mutex mu;
  static std::map<Key, std::vector<double>> cache;
  Key key{n, g, k, D, J, K};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int extra = 120;
  auto Wr = weight_taylor(n, g, k, J + extra);
  std::vector<double> Wd;
  for (const auto& x : Wr) Wd.push_back(x.get_d());
  double gd = g.get_d();
  boost::math::quadrature::tanh_sinh<double> ts(12);
  std::vector<double> G(K + 1);
  for (int i = 0; i <= K; ++i) {
    int p0 = -D - i;
    // [0, 1/2]: the tail series integrates termwise
    double left = 0.0;
    for (int j = J; j <= J + extra; ++j) {
      int e = j + p0 + 1;
      left += Wd[j] * std::pow(0.5, e) / e;
    }
    auto f = [&](double u, double uc) {
      double om = u > 0.75 ? uc : 1.0 - u;
      double poly = 0.0;
      for (int j = J - 1; j >= 0; --j) poly = poly * u + Wd[j];
      return (weight_value(n, gd, k, u, om) - poly) * std::pow(u, p0);
    };
    double err = 0.0;
    double right = ts.integrate(f, 0.5, 1.0, 1e-14, &err);
    if (!(err <= 1e-10 * std::max(1.0, std::abs(right)))) throw QuadratureNotConverged("remainder moment");
    G[i] = gen_binomial(Rat(-D), i).get_d() * (left + right);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, G);
  return G;
}

int working_order(const std::vector<RadialPart>& parts, int K) {
  int Dmax = 1;
  for (const auto& p : parts) Dmax = std::max(Dmax, p.D);
  return K + 2 * Dmax + 4;
}

// Exact part of one radial part's heat trace: regular and log t series
// (already multiplied by the prefactor).
void exact_part(HeatSeries& hs, int n, const RadialPart& rp, int K, LaurentC& reg, LaurentC& logp) {
  int D = rp.D;
  CRat pref = rp.coef * CRat(factorial(D - 1) / 2);
  switch (rp.profile.kind) {
    case Profile::One: {
      LaurentC t = LaurentC::monomial(-D, CRat(1), hs.W) * hs.sinh_over_t.pow(-D) * hs.cosh.pow(D - n);
      reg = reg + t * pref;
      return;
    }
    case Profile::Gauss: {
      const Rat& l = rp.profile.param;
      LaurentC t = hs.cosh_mn * (hs.one + hs.s * CRat(1 / l)).pow(-D);
      Rat lp = 1;
      for (int i = 0; i < D; ++i) lp /= l;
      reg = reg + t * (pref * CRat(lp));
      return;
    }
    case Profile::Resolvent: {
      int J = D + K + 1;
      auto W = weight_taylor(n, rp.profile.param, rp.profile.deriv, J);
      LaurentC r(1 - D - 1, hs.W), lg(0, hs.W);
      for (int j = 0; j < J; ++j) {
        if (sgn(W[j]) == 0) continue;
        for (int i = 0; i <= j; ++i) {
          CRat cf(binomial(j, i) * W[j] * ((j - i) % 2 ? -1 : 1));
          const LaurentC& sji = hs.spow(j - i);
          if (i != D - 1) {
            int q = i - D + 1;
            CRat c = cf * CRat(Rat(1) / q);
            r = r + sji * hs.one_plus_s.pow(q) * c;
            r = r - hs.spow(j - D + 1) * c;
          } else {
            r = r + sji * (hs.log_one_plus_s - hs.log_sigma) * cf;
            lg = lg - sji * cf;
          }
        }
      }
      reg = reg + hs.cosh_mn * r * pref;
      logp = logp + hs.cosh_mn * lg * pref;
      return;
    }
  }
}

LaurentD numeric_part(HeatSeries& hs, int n, const RadialPart& rp, int K) {
  int D = rp.D;
  int J = D + K + 1;
  auto G = remainder_moments(n, rp.profile.param, rp.profile.deriv, D, J, K);
  LaurentD sd = hs.s.cast<cplx>();
  LaurentD g = LaurentD::constant(G[0], hs.W);
  LaurentD sp = LaurentD::constant(1.0, hs.W);
  for (int i = 1; i <= K; ++i) {
    sp = sp * sd;
    g = g + sp * cplx(G[i]);
  }
  cplx pref = (rp.coef * CRat(factorial(D - 1) / 2)).to_cplx();
  return hs.cosh_mn.cast<cplx>() * g * pref;
}


}  // namespace

CRat res_exact(const PhgExpansion<CRat>& a) {
  int n = a.n;
  if ((a.order + 2 * n) % 2) return CRat();
  int j = (a.order + 2 * n) / 2;
  if (j < 0) return CRat();
  if (j > a.depth) throw DepthTooShallow("expansion does not reach degree -2n");
  PiMultiple s = sphere_integral_exact(a.terms[j]);
  return -s.coef * CRat(Rat(1, 2 * (1L << n)));
}

cplx res(const PhgExpansion<CRat>& a) { return res_exact(a).to_cplx(); }

LaurentC heat_trace_exact(const SymbolC& a, int order) {
  if (a.has_kind(Profile::Resolvent)) throw DomainError("exact heat trace needs polynomial or Gaussian parts");
  auto parts = radial_parts(a);
  HeatSeries hs(a.n(), working_order(parts, order));
  LaurentC reg(-hs.W, hs.W), logp(0, hs.W);
  for (const auto& rp : parts) exact_part(hs, a.n(), rp, order, reg, logp);
  return reg.truncate(order);
}

HeatTrace heat_trace(const SymbolC& a, int order) {
  int n = a.n();
  auto parts = radial_parts(a);
  HeatSeries hs(n, working_order(parts, order));
  LaurentC reg(-hs.W, hs.W), logp(0, hs.W);
  LaurentD num(0, hs.W);
  bool exact = true;
  for (const auto& rp : parts) {
    exact_part(hs, n, rp, order, reg, logp);
    if (rp.profile.kind == Profile::Resolvent) {
      num = num + numeric_part(hs, n, rp, order);
      exact = false;
    }
  }
  if (reg.order() < order || logp.order() < order || num.order() < order)
    throw NumericError("heat trace: insufficient working order");
  HeatTrace h;
  h.exact = exact;
  h.regular_exact = reg.truncate(order);
  h.regular = reg.truncate(order).cast<cplx>() + num.truncate(order);
  h.log_part = logp.truncate(order).cast<cplx>();
  return h;
}

TraceReport trh(const SymbolC& a, bool strict) {
  HeatTrace h = heat_trace(a);
  TraceReport r;
  r.route = TraceRoute::HeatClosedForm;
  r.value = h.regular.coeff(0);
  r.residual_log_coeff = h.log_part.coeff(0);
  if (h.exact) {
    r.exact = h.regular_exact.coeff(0);
    r.error_estimate = 0.0;
  } else {
    r.error_estimate = 1e-11 * std::max(1.0, std::abs(r.value));
  }
  if (strict && std::abs(r.residual_log_coeff) > 1e-10)
    throw NonzeroResidue("regularized trace of a symbol with nonzero residue");
  return r;
}

std::pair<cplx, double> remainder_fit(const SymbolC& a) {
  int n = a.n();
  auto parts = radial_parts(a);
  const int K = 0;
  HeatSeries hs(n, working_order(parts, K) + 4);
  // t^0 of everything that is already closed form
  cplx known = 0.0;
  std::vector<RadialPart> res_parts;
  {
    LaurentC reg(-hs.W, hs.W), logp(0, hs.W);
    for (const auto& rp : parts) {
      if (rp.profile.kind == Profile::Resolvent) {
        res_parts.push_back(rp);
        continue;
      }
      exact_part(hs, n, rp, K, reg, logp);
    }
    known += reg.coeff(0).to_cplx();
  }
  // closed-form heat traces of the expansion terms of degree > -2n
  struct Hom {
    cplx c;
    int a, m;  // c / (sinh^a cosh^m)
  };
  std::vector<Hom> homs;
  cplx resid = 0.0;
  for (const auto& rp : res_parts) {
    int D = rp.D;
    auto W = weight_taylor(n, rp.profile.param, rp.profile.deriv, D);
    for (int j = 0; j < D - 1; ++j) {
      if (sgn(W[j]) == 0) continue;
      int e = D - j - 1, m = j + 1 - rp.d / 2;
      CRat c = rp.coef * CRat(W[j] * factorial(j) * factorial(e - 1) / 2);
      homs.push_back({c.to_cplx(), e, m});
      LaurentC t = LaurentC::monomial(-e, CRat(1), hs.W) * hs.sinh_over_t.pow(-e) * hs.cosh.pow(-m);
      known += (c * t.coeff(0)).to_cplx();
    }
    resid += (rp.coef * CRat(W[D - 1] * factorial(D - 1))).to_cplx();
  }
  if (res_parts.empty()) return {known, 1.0};
  bool with_log = std::abs(resid) > 1e-12;

  boost::math::quadrature::tanh_sinh<double> ts(12);
  const int npts = 8;
  int ncol = with_log ? 7 : 6;
  Eigen::MatrixXd A(npts, ncol);
  Eigen::MatrixXcd y(npts, 1);
  for (int p = 0; p < npts; ++p) {
    double t = 0.05 * std::pow(16.0, p / double(npts - 1));
    double s = std::tanh(t), ch = std::cosh(t), sh = std::sinh(t);
    cplx val = 0.0;
    for (const auto& rp : res_parts) {
      double gd = rp.profile.param.get_d();
      int k = rp.profile.deriv, D = rp.D;
      auto f = [&](double u, double uc) {
        double om = u > 0.5 ? uc : 1.0 - u;
        return weight_value(n, gd, k, u, om) * std::pow(u + s, -D);
      };
      double I = ts.integrate(f, 0.0, 1.0, 1e-13);
      val += (rp.coef * CRat(factorial(D - 1) / 2)).to_cplx() * std::pow(ch, -n) * I;
    }
    for (const auto& h : homs) val -= h.c / (std::pow(sh, h.a) * std::pow(ch, h.m));
    double lt = std::log(t);
    std::vector<double> row{1.0, t, t * t, t * t * t, t * lt, t * t * lt};
    if (with_log) row.push_back(lt);
    for (int c = 0; c < ncol; ++c) A(p, c) = row[c];
    y(p, 0) = val;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXcd coef = svd.solve(y);
  double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  return {known + coef(0, 0), cond};
}

SymbolC tau_combined(const PairedSymbol<CRat>& s0) {
  PairedSymbol<CRat> s = s0.order() % 2 ? s0 : s0.to_convention(Convention::A);
  if (!s.plus.closure || !s.minus.closure) throw MissingClosure("tau needs closed forms on both components");
  SymbolC a = *s.plus.closure;
  if (s.n() % 2)
    a += *s.minus.closure;
  else
    a -= *s.minus.closure;
  return a;
}

TraceReport tau(const PairedSymbol<CRat>& s, bool with_fit) {
  SymbolC a = tau_combined(s);
  TraceReport r = trh(a, true);
  if (with_fit && a.has_kind(Profile::Resolvent)) {
    auto [fc, cond] = remainder_fit(a);
    r.fit_constant = fc;
    r.fit_condition = cond;
    r.error_estimate = std::max(r.error_estimate, std::abs(fc - r.value));
  }
  return r;
}

TraceReport tau_numeric(const PairedSymbol<CRat>& s) {
  SymbolC a = tau_combined(s);
  int n = a.n();
  auto parts = radial_parts(a);
  TraceReport rep;
  rep.route = TraceRoute::NumericR;
  cplx total = 0.0;
  double err_total = 0.0;

  // Gaussian parts: no expansion terms, integrate directly
  for (const auto& rp : parts) {
    if (rp.profile.kind != Profile::Gauss) continue;
    double l = rp.profile.param.get_d();
    int e = 2 * n - 1 + rp.d;
    boost::math::quadrature::exp_sinh<double> es;
    double err = 0.0;
    double v = es.integrate([&](double r) { return l * r * r > 700.0 ? 0.0 : std::pow(r, e) * std::exp(-l * r * r); }, 1e-13, &err);
    total += rp.coef.to_cplx() * v;
    err_total += err;
  }

  // Resolvent parts, summed before integrating: individually they decay
  // like 1/r, the sum like r^{-3} once the residue cancels.
  struct RP {
    cplx coef;
    int d, D, k;
    Rat g;
    std::vector<double> W;  // W_j j!
  };
  std::vector<RP> rps;
  const int Jasym = 160;
  cplx log_coeff = 0.0;
  for (const auto& rp : parts) {
    if (rp.profile.kind != Profile::Resolvent) continue;
    auto Wr = weight_taylor(n, rp.profile.param, rp.profile.deriv, Jasym);
    RP x{rp.coef.to_cplx(), rp.d, rp.D, rp.profile.deriv, rp.profile.param, {}};
    for (int j = 0; j <= Jasym; ++j) x.W.push_back(Rat(Wr[j] * factorial(j)).get_d());
    log_coeff += x.coef * x.W[rp.D - 1];
    rps.push_back(std::move(x));
  }
  if (std::abs(log_coeff) > 1e-10) throw NonzeroResidue("combined symbol has a nonzero residue");
  if (!rps.empty()) {
    const double Q1 = 50.0, r1 = std::sqrt(Q1);
    auto integrand = [&](double r, bool imag) {
      double q = r * r, sum = 0.0;
      for (const auto& x : rps) {
        double c = imag ? x.coef.imag() : x.coef.real();
        if (c == 0.0) continue;
        double v = resolvent_profile(n, x.g, x.k, q);
        double qp = 1.0 / q;
        for (int j = 0; j < x.D - 1; ++j) {
          v -= x.W[j] * qp;
          qp /= q;
        }
        sum += c * std::pow(r, 2 * n - 1 + x.d) * v;
      }
      return sum;
    };
    for (bool imag : {false, true}) {
      double err = 0.0;
      double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double r) { return integrand(r, imag); }, 0.0, r1, 15, 1e-12, &err);
      total += imag ? cplx(0, v) : cplx(v);
      err_total += err;
    }
    // beyond r1 the Watson series integrates termwise
    for (const auto& x : rps) {
      cplx part = 0.0;
      double prev = INFINITY;
      for (int j = x.D; j <= Jasym; ++j) {
        int e = j - x.D + 1;
        double term = x.W[j] / std::pow(Q1, e) / (2.0 * e);
        if (std::abs(term) > prev && j > x.D + 2) break;
        part += term;
        if (term != 0.0) prev = std::abs(term);
      }
      total += x.coef * part;
    }
  }
  rep.value = total;
  rep.error_estimate = err_total;
  return rep;
}

cplx fock_trace(const SymbolC& a, int cutoff) {
  if (a.has_kind(Profile::One) || a.has_kind(Profile::Resolvent))
    throw DomainError("Fock trace needs a Gaussian-class symbol");
  int n = a.n();
  int c = cutoff > 0 ? cutoff : default_fock_cutoff(n);
  const int cmax = n == 1 ? 3200 : (n == 2 ? 200 : 48);
  auto eval = [&](int cut) {
    FockBasis b(n, cut);
    cplx s = 0.0;
    for (const auto& [pr, p] : a.parts())
      for (const auto& v : quantize_gauss_diagonal(p.cast<cplx>(), pr.param, b)) s += v;
    return s;
  };
  cplx prev = eval(c);
  while (c < cmax) {
    int c2 = std::min(2 * c, cmax);
    cplx cur = eval(c2);
    if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
    c = c2;
  }
  throw FockTruncationTooSmall("Fock trace did not stabilize");
}

TraceReport tau_fock(const PairedSymbol<CRat>& s0, int cutoff) {
  PairedSymbol<CRat> s = s0.order() % 2 ? s0 : s0.to_convention(Convention::A);
  if (!s.plus.closure || !s.minus.closure) throw MissingClosure("Fock route needs closed forms");
  int n = s.n();
  TraceReport r;
  r.route = TraceRoute::FockTrace;
  cplx tp = s.plus.closure->is_zero() ? cplx(0) : fock_trace(*s.plus.closure, cutoff);
  cplx tm = s.minus.closure->is_zero() ? cplx(0) : fock_trace(*s.minus.closure, cutoff);
  r.value = tp + (n % 2 ? 1.0 : -1.0) * tm;
  r.error_estimate = 1e-12;
  return r;
}

}  // namespace heisen
