/*
 * scalar.hpp - coefficient fields.
 *
 * Two fields run through every template in the library:
 *   CRat  complex numbers with exact rational real and imaginary parts (GMP)
 *   cplx  std::complex<double>, for quadrature-facing paths
 * Field<T> collects the handful of conversions the templates need.
 */
#pragma once

#include <gmpxx.h>

#include <complex>
#include <ostream>
#include <string>

namespace heisen {

using Rat = mpq_class;
using cplx = std::complex<double>;

struct CRat {
  Rat re, im;

  CRat() : re(0), im(0) {}
  CRat(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  CRat(const Rat& r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  CRat(const Rat& r, const Rat& i) : re(r), im(i) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  CRat conj() const { return {re, -im}; }

  CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
  CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
  CRat& operator*=(const CRat& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = r; im = i;
    return *this;
  }
  CRat& operator/=(const CRat& o) {
    Rat den = o.re * o.re + o.im * o.im;
    Rat r = (re * o.re + im * o.im) / den;
    Rat i = (im * o.re - re * o.im) / den;
    re = r; im = i;
    return *this;
  }
  friend CRat operator+(CRat a, const CRat& b) { return a += b; }
  friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
  friend CRat operator*(CRat a, const CRat& b) { return a *= b; }
  friend CRat operator/(CRat a, const CRat& b) { return a /= b; }
  friend CRat operator-(const CRat& a) { return {-a.re, -a.im}; }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

  cplx to_cplx() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;
  friend std::ostream& operator<<(std::ostream& os, const CRat& c) { return os << c.str(); }
};

template <class T>
struct Field;

template <>
struct Field<CRat> {
  static constexpr bool exact = true;
  static CRat zero() { return CRat(); }
  static CRat one() { return CRat(1); }
  static CRat imag_unit() { return CRat(Rat(0), Rat(1)); }
  static CRat from_rat(const Rat& r) { return CRat(r); }
  static CRat from_int(long v) { return CRat(v); }
  static cplx to_cplx(const CRat& c) { return c.to_cplx(); }
  static bool is_zero(const CRat& c) { return c.is_zero(); }
  static double abs(const CRat& c) { return std::abs(c.to_cplx()); }
};

template <>
struct Field<cplx> {
  static constexpr bool exact = false;
  static cplx zero() { return {0.0, 0.0}; }
  static cplx one() { return {1.0, 0.0}; }
  static cplx imag_unit() { return {0.0, 1.0}; }
  static cplx from_rat(const Rat& r) { return {r.get_d(), 0.0}; }
  static cplx from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static cplx to_cplx(const cplx& c) { return c; }
  static bool is_zero(const cplx& c) { return c == 0.0; }
  static double abs(const cplx& c) { return std::abs(c); }
};

inline cplx to_cplx(const CRat& c) { return c.to_cplx(); }
inline cplx to_cplx(const cplx& c) { return c; }

// Converts between the two fields; CRat -> cplx rounds, cplx -> CRat is exact
// on the binary value.
template <class U, class T>
U field_cast(const T& v);

template <>
inline CRat field_cast<CRat, CRat>(const CRat& v) { return v; }
template <>
inline cplx field_cast<cplx, CRat>(const CRat& v) { return v.to_cplx(); }
template <>
inline cplx field_cast<cplx, cplx>(const cplx& v) { return v; }
template <>
inline CRat field_cast<CRat, cplx>(const cplx& v) { return CRat(Rat(v.real()), Rat(v.imag())); }

}  // namespace heisen
