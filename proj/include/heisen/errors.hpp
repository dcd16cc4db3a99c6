/*
 * errors.hpp - exception types shared by every module.
 *
 * Each failure mode named in the library contract maps to one subclass of
 * heisen::Error so callers (the CLI in particular) can dispatch on it. The
 * numeric non-convergence family derives from NumericError, which the CLI
 * translates to exit code 3.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace heisen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the algebraic domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative or quadrature procedure failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

#define HEISEN_ERROR(Name, Base)              \
  class Name : public Base {                  \
   public:                                    \
    explicit Name(const std::string& what)    \
        : Base(std::string(#Name ": ") + what) {} \
  };

HEISEN_ERROR(NotInAlgebraA, DomainError)
HEISEN_ERROR(NotElliptic, DomainError)
HEISEN_ERROR(DepthTooShallow, DomainError)
HEISEN_ERROR(MissingClosure, DomainError)
HEISEN_ERROR(NonzeroResidue, DomainError)
HEISEN_ERROR(NotSymplecticLieAlgebra, DomainError)
HEISEN_ERROR(NotUnitary, DomainError)
HEISEN_ERROR(BoundaryStencil, DomainError)
HEISEN_ERROR(ChartOverlapMismatch, DomainError)
HEISEN_ERROR(ParseError, DomainError)
HEISEN_ERROR(FockTruncationTooSmall, NumericError)
HEISEN_ERROR(NonConvergentRemainder, NumericError)
HEISEN_ERROR(QuadratureNotConverged, NumericError)

#undef HEISEN_ERROR

}  // namespace heisen
