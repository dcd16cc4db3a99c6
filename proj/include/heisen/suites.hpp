/*
 * suites.hpp - small named verification suites shared by the CLI and the
 * acceptance binary. Each row compares a computed value to an independent
 * expected value under a stated tolerance.
 *
 *   trace-table  TRh(Q^{#k}), n = 1, k = 0..5, against (1 - 2^k) zeta(-k)
 *   vacuum       s # s = s, Q # s = n s (exact), Fock trace of s
 *   hz           h_j(z) = 0 for j = 1, 2, 3, 5, 6, 7 and h_4(z) != 0
 *   mehler       truncated trace of exp(-tH) against (2 sinh t)^{-n}
 *   moyal        associativity of the star product on seeded random
 *                polynomial triples (degree <= 6, n = 1, 2), exact
 */
#pragma once

#include <string>
#include <vector>

#include "heisen/scalar.hpp"

namespace heisen {

struct CheckRow {
  std::string name;
  cplx value = 0;
  cplx expected = 0;
  double error = 0;
  double tolerance = 0;
  bool pass = false;
  std::string exact;  // exact rational value when available
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckRow> rows;
  bool pass() const;
};

SuiteResult suite_trace_table();
SuiteResult suite_vacuum();
SuiteResult suite_hz();
SuiteResult suite_mehler(int cutoff = 24);
SuiteResult suite_moyal(unsigned seed, int triples = 200);

const std::vector<std::string>& suite_names();
// DomainError on unknown names
SuiteResult run_suite(const std::string& name, int fock_cutoff = 24, unsigned seed = 1);

}  // namespace heisen
