#include "heisen/suites.hpp"

#include <cmath>
#include <random>

#include "heisen/errors.hpp"
#include "heisen/fock.hpp"
#include "heisen/moyal.hpp"
#include "heisen/rtrace.hpp"
#include "heisen/special.hpp"

namespace heisen {

namespace {

CheckRow row(std::string name, cplx value, cplx expected, double tol) {
  CheckRow r;
  r.name = std::move(name);
  r.value = value;
  r.expected = expected;
  r.error = std::abs(value - expected);
  r.tolerance = tol;
  r.pass = r.error <= tol;
  return r;
}

CheckRow exact_row(std::string name, bool equal) {
  CheckRow r;
  r.name = std::move(name);
  r.pass = equal;
  r.exact = equal ? "equal" : "differ";
  r.error = equal ? 0 : 1;
  return r;
}

}  // namespace

bool SuiteResult::pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

SuiteResult suite_trace_table() {
  SuiteResult s{"trace-table", {}};
  PolyC q = PolyC::constant(1, CRat(1));
  for (int k = 0; k <= 5; ++k) {
    TraceReport t = trh(SymbolC(q));
    Rat expect = (1 - Rat(1L << k)) * zeta_neg(k);
    std::string name = "TRh(Q^" + std::to_string(k) + ")";
    CheckRow r = row(name, t.value, cplx(expect.get_d()), 1e-10);
    r.exact = t.exact ? t.exact->str() : "none";
    r.pass = r.pass && t.exact && *t.exact == CRat(expect);
    s.rows.push_back(r);
    q = poly_star(q, PolyC::Q(1));
  }
  return s;
}

SuiteResult suite_vacuum() {
  SuiteResult s{"vacuum", {}};
  for (int n = 1; n <= 2; ++n) {
    SymbolC v = vacuum_symbol(n);
    std::string tag = " n=" + std::to_string(n);
    s.rows.push_back(exact_row("s#s=s" + tag, symbol_star(v, v) == v));
    s.rows.push_back(exact_row("Q#s=ns" + tag, symbol_star(SymbolC(PolyC::Q(n)), v) == v * CRat(n)));
    s.rows.push_back(exact_row("s#Q=ns" + tag, symbol_star(v, SymbolC(PolyC::Q(n))) == v * CRat(n)));
    s.rows.push_back(row("Tr(s)" + tag, fock_trace(v), 1.0, 1e-12));
  }
  return s;
}

SuiteResult suite_hz() {
  SuiteResult s{"hz", {}};
  for (int n = 1; n <= 2; ++n)
    for (cplx z : {cplx(0.3), cplx(1, 1), cplx(2.5)}) {
      std::string tag = " n=" + std::to_string(n) + " z=(" + std::to_string(z.real()) + "," +
                        std::to_string(z.imag()) + ")";
      for (int j : {1, 2, 3, 5, 6, 7}) s.rows.push_back(row("h" + std::to_string(j) + tag, hz_term(z, j, n), 0.0, 1e-10));
      CheckRow r = row("h4 nonzero" + tag, hz_term(z, 4, n), 0.0, 0.0);
      r.pass = r.error > 1e-6;
      s.rows.push_back(r);
    }
  return s;
}

SuiteResult suite_mehler(int cutoff) {
  if (cutoff < 1) throw DomainError("fock cutoff must be positive");
  SuiteResult s{"mehler", {}};
  for (double t : {0.2, 1.0}) {
    FockBasis b(1, cutoff);
    cplx tr = quantize_symbol(mehler_symbol(1, t), b).trace();
    // states k = 0..cutoff carry e^{-t(2k+1)}; the tail is geometric
    double tail = std::exp(-t * (2.0 * (cutoff + 1) + 1)) / (1 - std::exp(-2 * t));
    CheckRow r = row("Tr exp(-tH) t=" + std::to_string(t), tr, 1.0 / (2 * std::sinh(t)), tail * (1 + 1e-8) + 1e-13);
    s.rows.push_back(r);
  }
  return s;
}

SuiteResult suite_moyal(unsigned seed, int triples) {
  SuiteResult s{"moyal", {}};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4), deg(0, 6);
  auto random_poly = [&](int n) {
    std::uniform_int_distribution<int> var(0, 2 * n - 1);
    PolyC p(n);
    for (int t = 0; t < 3; ++t) {
      Mono m{};
      for (int e = deg(rng); e > 0; --e) m[var(rng)] += 1;
      Rat re(num(rng), den(rng)), im(num(rng), den(rng));
      re.canonicalize();
      im.canonicalize();
      p.add_term(m, CRat(re, im));
    }
    return p;
  };
  int ok = 0;
  for (int t = 0; t < triples; ++t) {
    int n = 1 + t % 2;
    PolyC a = random_poly(n), b = random_poly(n), c = random_poly(n);
    if (poly_star(poly_star(a, b), c) == poly_star(a, poly_star(b, c))) ++ok;
  }
  CheckRow r = exact_row("(a#b)#c = a#(b#c) on " + std::to_string(triples) + " triples", ok == triples);
  r.value = ok;
  r.expected = triples;
  s.rows.push_back(r);
  return s;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"trace-table", "vacuum", "hz", "mehler", "moyal"};
  return names;
}

SuiteResult run_suite(const std::string& name, int fock_cutoff, unsigned seed) {
  if (name == "trace-table") return suite_trace_table();
  if (name == "vacuum") return suite_vacuum();
  if (name == "hz") return suite_hz();
  if (name == "mehler") return suite_mehler(fock_cutoff);
  if (name == "moyal") return suite_moyal(seed);
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace heisen
