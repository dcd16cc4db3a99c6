#include "doctest.h"
#include "heisen/fock.hpp"
#include "heisen/parse.hpp"

using namespace heisen;

TEST_CASE("parse literals") {
  CHECK(parse_symbol("Q", 1) == SymbolC(PolyC::Q(1)));
  CHECK(parse_symbol("x1^2 + xi1^2", 1) == SymbolC(PolyC::Q(1)));
  CHECK(parse_symbol("x1*xi2 - 3/4", 2) ==
        SymbolC(PolyC::x(2, 0) * PolyC::xi(2, 1) - PolyC::constant(2, CRat(Rat(3, 4)))));
  CHECK(parse_symbol("2*exp(-Q)", 1) == vacuum_symbol(1));
  CHECK(parse_symbol("4*exp(-Q)", 2) == vacuum_symbol(2));
  CHECK(parse_symbol("exp(-Q/2) * exp(-Q/2)", 1) == SymbolC::gauss(PolyC::constant(1, CRat(1)), Rat(1)));
  CHECK(parse_symbol("resolvent(Q, 0.5)", 1) == SymbolC::resolvent(PolyC::constant(1, CRat(1)), Rat(1, 2)));
  CHECK(parse_symbol("resolvent(Q, -1/3)", 1) == SymbolC::resolvent(PolyC::constant(1, CRat(1)), Rat(-1, 3)));
  CHECK(parse_symbol("i*x1", 1) == SymbolC(PolyC::x(1, 0) * CRat(Rat(0), Rat(1))));
  CHECK(parse_symbol("(x1 + 1)^2", 1) ==
        SymbolC(PolyC::x(1, 0) * PolyC::x(1, 0) + PolyC::x(1, 0) * CRat(2) + PolyC::constant(1, CRat(1))));
}

TEST_CASE("decimals are canonical rationals") {
  CHECK(parse_rational("0.5") == Rat(1, 2));
  CHECK(parse_rational("0.50") == Rat(1, 2));
  CHECK(parse_rational("-1.25") == Rat(-5, 4));
  CHECK(parse_rational("6/8") == Rat(3, 4));
  CHECK(parse_symbol("resolvent(Q, 0.50)", 1) == parse_symbol("resolvent(Q, 1/2)", 1));
}

TEST_CASE("format round trip") {
  for (const char* s : {"Q", "x1*xi1 + 2", "3*exp(-Q) + x1^2*exp(-Q)", "resolvent(Q, 0.25) + Q*exp(-2*Q)",
                        "i*x1 - 1/3*xi1^3"}) {
    SymbolC a = parse_symbol(s, 1);
    CHECK(parse_symbol(format_symbol(a), 1) == a);
  }
  SymbolC b = parse_symbol("x2*xi1*exp(-Q) + resolvent(Q, 1.5)", 2);
  CHECK(parse_symbol(format_symbol(b), 2) == b);
}

TEST_CASE("parse errors") {
  for (const char* s : {"", "x3", "Q +", "exp(Q)", "exp(-x1)", "resolvent(x1, 1/2)", "resolvent(Q, 2)",
                        "resolvent(Q, 1/2) * resolvent(Q, 1/3)", "y", "1/0", "(Q", "x1 / x1", "1..2"})
    CHECK_THROWS_AS(parse_symbol(s, 1), ParseError);
}
