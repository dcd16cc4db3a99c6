#include "heisen/parse.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace heisen {

namespace {

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  SymbolC parse() {
    SymbolC r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    size_t end = pos_ + w.size();
    // identifiers continue with letters only; digits are variable indices
    if (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }

  SymbolC constant(const CRat& c) const { return SymbolC(PolyC::constant(n_, c)); }

  std::optional<CRat> as_constant(const SymbolC& s) const {
    if (s.is_zero()) return CRat(0);
    if (!s.is_poly()) return std::nullopt;
    PolyC p = s.poly_part();
    if (p.degree() > 0) return std::nullopt;
    return p.constant_term();
  }

  SymbolC expr() {
    SymbolC r = term();
    for (;;) {
      if (eat('+')) {
        r += term();
      } else if (eat('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  SymbolC term() {
    SymbolC r = unary();
    for (;;) {
      if (eat('*')) {
        SymbolC b = unary();
        try {
          r = r * b;
        } catch (const MissingClosure&) {
          fail("product of resolvent profiles is not a closed symbol");
        }
      } else if (eat('/')) {
        auto c = as_constant(unary());
        if (!c || c->is_zero()) fail("division only by non-zero constants");
        r *= CRat(1) / *c;
      } else {
        return r;
      }
    }
  }

  SymbolC unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  SymbolC power() {
    SymbolC b = primary();
    if (!eat('^')) return b;
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a non-negative integer exponent");
    int e = std::stoi(s_.substr(start, pos_ - start));
    SymbolC r = constant(CRat(1));
    try {
      for (int i = 0; i < e; ++i) r = r * b;
    } catch (const MissingClosure&) {
      fail("power of a resolvent profile is not a closed symbol");
    }
    return r;
  }

  int index() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a variable index");
    int k = std::stoi(s_.substr(start, pos_ - start));
    if (k < 1 || k > n_) fail("variable index " + std::to_string(k) + " outside 1.." + std::to_string(n_));
    return k - 1;
  }

  SymbolC primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      try {
        return constant(CRat(parse_rational(s_.substr(start, pos_ - start))));
      } catch (const ParseError&) {
        fail("malformed number");
      }
    }
    if (eat('(')) {
      SymbolC r = expr();
      expect(')');
      return r;
    }
    if (eat_word("exp")) {
      expect('(');
      SymbolC arg = expr();
      expect(')');
      PolyC p = arg.poly_part();
      Mono m{};
      m[0] = 2;
      CRat l = CRat(0) - p.coeff(m);
      if (!arg.is_poly() || l.im != 0 || sgn(l.re) <= 0 || p != PolyC::Q(n_) * (CRat(0) - l))
        fail("exp() takes -l*Q with rational l > 0");
      return SymbolC::gauss(PolyC::constant(n_, CRat(1)), l.re);
    }
    if (eat_word("resolvent")) {
      expect('(');
      SymbolC q = expr();
      if (!(q == SymbolC(PolyC::Q(n_)))) fail("resolvent() takes Q as its first argument");
      expect(',');
      auto g = as_constant(expr());
      expect(')');
      if (!g || g->im != 0) fail("resolvent parameter must be a real constant");
      try {
        return SymbolC::resolvent(PolyC::constant(n_, CRat(1)), g->re);
      } catch (const DomainError& e) {
        fail(e.what());
      }
    }
    if (eat_word("Q")) return SymbolC(PolyC::Q(n_));
    if (eat_word("i")) return constant(CRat(Rat(0), Rat(1)));
    if (s_.compare(pos_, 2, "xi") == 0) {
      pos_ += 2;
      return SymbolC(PolyC::xi(n_, index()));
    }
    if (c == 'x') {
      ++pos_;
      return SymbolC(PolyC::x(n_, index()));
    }
    fail("unknown token");
  }

  std::string s_;
  int n_;
  size_t pos_ = 0;
};

std::string rat_text(const Rat& r) { return r.get_str(); }

std::string crat_text(const CRat& c) {
  if (c.im == 0) return rat_text(c.re);
  if (c.re == 0) return rat_text(c.im) + "*i";
  return "(" + rat_text(c.re) + "+" + rat_text(c.im) + "*i)";
}

std::string mono_text(const Mono& m, int n) {
  std::string out;
  for (int v = 0; v < 2 * n; ++v) {
    if (m[v] == 0) continue;
    if (!out.empty()) out += "*";
    out += (v < n ? "x" + std::to_string(v + 1) : "xi" + std::to_string(v - n + 1));
    if (m[v] > 1) out += "^" + std::to_string(m[v]);
  }
  return out;
}

}  // namespace

SymbolC parse_symbol(const std::string& text, int n) {
  if (n < 1 || n > 2) throw ParseError("half-dimension must be 1 or 2");
  return Parser(text, n).parse();
}

Rat parse_rational(const std::string& text) {
  auto bad = [&]() { return ParseError("malformed rational \"" + text + "\""); };
  if (text.empty()) throw bad();
  size_t slash = text.find('/');
  if (slash != std::string::npos) {
    Rat a = parse_rational(text.substr(0, slash)), b = parse_rational(text.substr(slash + 1));
    if (b == 0) throw bad();
    return a / b;
  }
  size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  mpz_class num = 0, den = 1;
  bool dot = false, digits = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (dot) throw bad();
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = true;
      num = num * 10 + (c - '0');
      if (dot) den *= 10;
    } else {
      throw bad();
    }
  }
  if (!digits) throw bad();
  Rat r(num, den);
  r.canonicalize();
  return text[0] == '-' ? Rat(-r) : r;
}

std::string format_poly(const PolyC& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    std::string mt = mono_text(m, p.n());
    std::string t = mt.empty() ? crat_text(c) : (c == CRat(1) ? mt : crat_text(c) + "*" + mt);
    if (!out.empty()) out += " + ";
    out += t;
  }
  return out;
}

std::string format_symbol(const SymbolC& s) {
  if (s.is_zero()) return "0";
  std::string out;
  for (const auto& [pr, p] : s.parts()) {
    std::string f;
    if (pr.kind == Profile::Gauss) f = "exp(-" + rat_text(pr.param) + "*Q)";
    if (pr.kind == Profile::Resolvent) {
      if (pr.deriv != 0) throw DomainError("derivatives of the resolvent profile have no literal form");
      f = "resolvent(Q, " + rat_text(pr.param) + ")";
    }
    std::string t = f.empty() ? "(" + format_poly(p) + ")" : "(" + format_poly(p) + ")*" + f;
    if (!out.empty()) out += " + ";
    out += t;
  }
  return out;
}

}  // namespace heisen
