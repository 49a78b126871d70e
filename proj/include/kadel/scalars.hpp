#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>
#include <complex>
#include <cstdlib>
#include <string>
#include <type_traits>

#include "kadel/errors.hpp"

namespace kadel {

/* Exact scalar for the ordinary families with rational parameters.
 * Note: used with Eigen containers as plain storage only; all arithmetic on
 * rational matrices is written out explicitly (see decisions on interop). */
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Cplx = std::complex<double>;

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
struct scalar_traits {
  static constexpr bool is_exact = false;
};
template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline Cplx to_cplx(const Rational& r) { return Cplx(to_double(r), 0.0); }
inline Cplx to_cplx(double x) { return Cplx(x, 0.0); }
inline Cplx to_cplx(const Cplx& z) { return z; }

inline double abs_val(const Rational& r) { return std::abs(to_double(r)); }
inline double abs_val(double x) { return std::abs(x); }
inline double abs_val(const Cplx& z) { return std::abs(z); }

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Cplx& z) { return z == Cplx(0.0, 0.0); }

/* Parse "3", "-5/2" or a plain decimal ("2.5", "1e-3") into an exact rational.
 * Decimal strings are read digit-by-digit so the result is the exact value of
 * the literal, not of its double rounding. */
inline Rational rational_from_string(const std::string& s) {
  auto bad = [&]() { return parameter_error("not a rational literal: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    try {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw bad();
      return Rational(num, den);
    } catch (const std::runtime_error&) {
      throw bad();
    }
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
  BigInt mantissa = 0;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      break;
    } else {
      throw bad();
    }
  }
  if (!seen_digit) throw bad();
  long exp10 = 0;
  if (i < s.size()) {  // exponent part
    char* end = nullptr;
    exp10 = std::strtol(s.c_str() + i + 1, &end, 10);
    if (end != s.c_str() + s.size()) throw bad();
  }
  exp10 -= frac_digits;
  Rational r(mantissa);
  BigInt pow10 = 1;
  for (long k = 0; k < std::labs(exp10); ++k) pow10 *= 10;
  if (exp10 >= 0)
    r *= Rational(pow10);
  else
    r /= Rational(pow10);
  return neg ? -r : r;
}

/* A few complex utilities used throughout. */
inline Cplx conj_fn_value(const Cplx& z) { return std::conj(z); }

constexpr double kImagChopTol = 1e-9;

/* Real part of a value that is real on mathematical grounds; complains if not. */
inline double real_checked(const Cplx& z, const char* what, double tol = kImagChopTol) {
  double scale = std::max(1.0, std::abs(z));
  if (std::abs(z.imag()) > tol * scale)
    throw std::runtime_error(std::string(what) + ": unexpectedly non-real value");
  return z.real();
}

}  // namespace kadel
