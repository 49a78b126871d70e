#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "kadel/scalars.hpp"

namespace kadel {

/* Complex log-gamma, Lanczos approximation (g = 7, 9 coefficients) with the
 * reflection formula for Re z < 1/2.  Relative accuracy is comfortably below
 * 1e-13 on the half-plane Re z > 0, which is what the weight-function and
 * normalisation checks rely on. */
inline Cplx log_gamma(Cplx z) {
  static const std::array<double, 9> lanczos = {
      0.99999999999980993,   676.5203681218851,      -1259.1392167224028,
      771.32342877765313,    -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,  9.9843695780195716e-6,  1.5056327351493116e-7};
  const double pi = 3.14159265358979323846;
  if (z.real() < 0.5) {
    // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(Cplx(1.0, 0.0) - z);
  }
  z -= 1.0;
  Cplx x(lanczos[0], 0.0);
  for (int i = 1; i < 9; ++i) x += lanczos[i] / (z + Cplx(static_cast<double>(i), 0.0));
  Cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline Cplx gamma_fn(const Cplx& z) { return std::exp(log_gamma(z)); }

/* Shifted factorial (a)_n. */
template <class S>
inline S pochhammer(const S& a, long n) {
  S out(1);
  for (long k = 0; k < n; ++k) out = out * (a + S(static_cast<int>(k)));
  return out;
}

inline Cplx pochhammer_c(const Cplx& a, long n) {
  Cplx out(1.0, 0.0);
  for (long k = 0; k < n; ++k) out *= a + static_cast<double>(k);
  return out;
}

inline Rational factorial_rat(long n) {
  Rational out(1);
  for (long k = 2; k <= n; ++k) out *= k;
  return out;
}

/* Finite q-shifted factorial (a;q)_n. */
inline Cplx q_pochhammer(const Cplx& a, double q, long n) {
  Cplx out(1.0, 0.0);
  Cplx aq = a;
  for (long k = 0; k < n; ++k) {
    out *= Cplx(1.0, 0.0) - aq;
    aq *= q;
  }
  return out;
}

/* Square root of an analytic function, branch-tracked by continuity along the
 * segment anchor -> target.  The global sign is set by the principal value at
 * the anchor; the path must avoid zeros and poles of F. */
inline Cplx analytic_sqrt(const std::function<Cplx(const Cplx&)>& F, const Cplx& anchor,
                          const Cplx& target, int steps = 96) {
  Cplx prev = std::sqrt(F(anchor));
  for (int k = 1; k <= steps; ++k) {
    const Cplx z = anchor + (target - anchor) * (static_cast<double>(k) / steps);
    Cplx w = std::sqrt(F(z));
    if (std::abs(w - prev) > std::abs(w + prev)) w = -w;
    prev = w;
  }
  return prev;
}

/* (a;q)_infinity for |q| < 1, truncated once |a q^k| drops below 1e-18. */
inline Cplx q_pochhammer_inf(const Cplx& a, double q) {
  if (!(std::abs(q) < 1.0)) throw parameter_error("q-Pochhammer requires |q| < 1");
  Cplx out(1.0, 0.0);
  Cplx aq = a;
  int guard = 0;
  while (std::abs(aq) >= 1e-18) {
    out *= Cplx(1.0, 0.0) - aq;
    aq *= q;
    if (++guard > 100000) throw convergence_error("q-Pochhammer product failed to converge");
  }
  return out;
}

}  // namespace kadel
