/*
 * parse.hpp - symbol literals.
 *
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*       '/' only by constants
 *   unary   := '-' unary | power
 *   power   := primary ('^' integer)?
 *   primary := number | 'i' | 'Q' | 'x'k | 'xi'k | '(' expr ')'
 *            | 'exp(' expr ')'                  argument must be -l Q, l > 0
 *            | 'resolvent(Q,' expr ')'          constant real parameter
 * Numbers are integers or decimals; decimals are read as exact rationals
 * (0.5 -> 1/2). Products are pointwise.
 */
#pragma once

#include <string>

#include "heisen/symbol.hpp"

namespace heisen {

// Throws ParseError on malformed input or variables beyond x_n, xi_n.
SymbolC parse_symbol(const std::string& text, int n);

// Exact rational from an integer, fraction "a/b" or decimal literal.
Rat parse_rational(const std::string& text);

// Canonical text form; parse_symbol(format_symbol(s), n) == s.
std::string format_symbol(const SymbolC& s);
std::string format_poly(const PolyC& p);

}  // namespace heisen
