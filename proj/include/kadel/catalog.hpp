#pragma once

#include <functional>
#include <vector>

#include "kadel/determinants.hpp"
#include "kadel/family.hpp"

namespace kadel {

inline Rational energy_rat(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H: return Rational(2 * n);
    case Family::L: return Rational(4 * n);
    case Family::J: return Rational(4 * n) * (n + d.g + d.h);
    default: throw regime_error("exact energies exist for the ordinary families only");
  }
}

inline double energy(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H: return 2.0 * n;
    case Family::L: return 4.0 * n;
    case Family::J: return 4.0 * n * (n + to_double(d.g) + to_double(d.h));
    case Family::MP: return 2.0 * n;
    case Family::CH:
    case Family::W: return n * (n + b1_sum(d) - 1.0);
    case Family::AW: {
      double b4 = b4_prod(d);
      return (std::pow(d.q, -static_cast<double>(n)) - 1.0) *
             (1.0 - b4 * std::pow(d.q, static_cast<double>(n - 1)));
    }
  }
  return 0.0;
}

inline Rational fn_factor_rat(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H: return Rational(2 * n);
    case Family::L: return Rational(-2);
    case Family::J: return Rational(-2) * (n + d.g + d.h);
    default: throw regime_error("exact factors exist for the ordinary families only");
  }
}

inline Rational bn_factor_rat(const SystemDescriptor& d, long n) {
  // returns b_{n-1}
  switch (d.fam) {
    case Family::H: return Rational(1);
    case Family::L:
    case Family::J: return Rational(-2 * n);
    default: throw regime_error("exact factors exist for the ordinary families only");
  }
}

inline double fn_factor(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H:
    case Family::L:
    case Family::J: return to_double(fn_factor_rat(d, n));
    case Family::MP: return 2.0;
    case Family::CH: return n + b1_sum(d) - 1.0;
    case Family::W: return -n * (n + b1_sum(d) - 1.0);
    case Family::AW: {
      double b4 = b4_prod(d);
      return std::pow(d.q, 0.5 * n) * (std::pow(d.q, -static_cast<double>(n)) - 1.0) *
             (1.0 - b4 * std::pow(d.q, static_cast<double>(n - 1)));
    }
  }
  return 0.0;
}

inline double bn_factor(const SystemDescriptor& d, long n) {
  // returns b_{n-1}
  switch (d.fam) {
    case Family::H:
    case Family::L:
    case Family::J: return to_double(bn_factor_rat(d, n));
    case Family::MP:
    case Family::CH: return static_cast<double>(n);
    case Family::W: return -1.0;
    case Family::AW: return std::pow(d.q, -0.5 * n);
  }
  return 0.0;
}

inline Rational leading_c_rat(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H: {
      Rational c = 1;
      for (long k = 0; k < n; ++k) c *= 2;
      return c;
    }
    case Family::L: {
      Rational c = Rational(1) / factorial_rat(n);
      return (n % 2) ? -c : c;
    }
    case Family::J: {
      Rational c = pochhammer<Rational>(n + d.g + d.h, n) / factorial_rat(n);
      for (long k = 0; k < n; ++k) c /= 2;
      return c;
    }
    default: throw regime_error("exact leading coefficients exist for the ordinary families only");
  }
}

inline double leading_c(const SystemDescriptor& d, long n) {
  switch (d.fam) {
    case Family::H:
    case Family::L:
    case Family::J: return to_double(leading_c_rat(d, n));
    case Family::MP: {
      double c = 1.0;
      for (long k = 0; k < n; ++k) c *= 2.0;
      return c / to_double(factorial_rat(n));
    }
    case Family::CH:
      return pochhammer<double>(n + b1_sum(d) - 1.0, n) / to_double(factorial_rat(n));
    case Family::W: {
      double c = pochhammer<double>(n + b1_sum(d) - 1.0, n);
      return (n % 2) ? -c : c;
    }
    case Family::AW: {
      double b4 = b4_prod(d);
      Cplx p = q_pochhammer(Cplx(b4 * std::pow(d.q, static_cast<double>(n - 1)), 0), d.q, n);
      double c = 1.0;
      for (long k = 0; k < n; ++k) c *= 2.0;
      return c * p.real();
    }
  }
  return 0.0;
}

/* Squared norms h_n of the seed eigenfunctions. */
inline double norm_h(const SystemDescriptor& d, long n) {
  const double pi = 3.14159265358979323846;
  double g = to_double(d.g), h = to_double(d.h);
  double nfact = to_double(factorial_rat(n));
  switch (d.fam) {
    case Family::H: {
      double c = 1.0;
      for (long k = 0; k < n; ++k) c *= 2.0;
      return c * nfact * std::sqrt(pi);
    }
    case Family::L:
      return std::exp(std::lgamma(n + g + 0.5)) / (2.0 * nfact);
    case Family::J:
      return std::exp(std::lgamma(n + g + 0.5) + std::lgamma(n + h + 0.5) -
                      std::lgamma(n + g + h)) /
             (2.0 * nfact * (2.0 * n + g + h));
    case Family::MP:
      return 2.0 * pi * std::exp(std::lgamma(n + 2.0 * d.a)) / (nfact * std::pow(2.0, 2.0 * d.a));
    case Family::CH: {
      Cplx s(0, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s += log_gamma(Cplx(static_cast<double>(n), 0) + d.ai[i] + std::conj(d.ai[j]));
      double b1 = b1_sum(d);
      double val = 2.0 * pi * std::exp(s.real() - std::lgamma(n + b1 - 1.0)) /
                   (nfact * (2.0 * n + b1 - 1.0));
      return val;
    }
    case Family::W: {
      Cplx s(0, 0);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          s += log_gamma(Cplx(static_cast<double>(n), 0) + d.ai[i] + d.ai[j]);
      double b1 = b1_sum(d);
      return 2.0 * pi * nfact * pochhammer<double>(n + b1 - 1.0, n) *
             std::exp(s.real() - std::lgamma(2.0 * n + b1));
    }
    case Family::AW: {
      double b4 = b4_prod(d);
      double qn = std::pow(d.q, static_cast<double>(n));
      Cplx num = q_pochhammer(Cplx(b4 * qn / d.q, 0), d.q, n) *
                 q_pochhammer_inf(Cplx(b4 * qn * qn, 0), d.q);
      Cplx den = q_pochhammer_inf(Cplx(qn * d.q, 0), d.q);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          den *= q_pochhammer_inf(d.ai[i] * d.ai[j] * qn, d.q);
      return real_checked(2.0 * pi * num / den, "norm_h(AW)");
    }
  }
  return 0.0;
}

/* Exact eigenpolynomials of the ordinary families via monic three-term
 * recurrences, scaled to the catalogued leading coefficient. */
inline Poly<Rational> poly_P_rat(const SystemDescriptor& d, long n) {
  if (!is_ordinary(d.fam)) throw regime_error("exact polynomials exist for the ordinary families only");
  Poly<Rational> prev{Rational(1)};
  if (n == 0) return prev;
  std::function<std::pair<Rational, Rational>(long)> ab;
  switch (d.fam) {
    case Family::H:
      ab = [](long k) { return std::make_pair(Rational(0), Rational(k) / 2); };
      break;
    case Family::L: {
      Rational alpha = d.g - Rational(1, 2);
      ab = [alpha](long k) {
        return std::make_pair(2 * k + alpha + 1, Rational(k) * (k + alpha));
      };
      break;
    }
    default: {
      Rational alpha = d.g - Rational(1, 2), beta = d.h - Rational(1, 2);
      ab = [alpha, beta](long k) {
        Rational s = alpha + beta;
        Rational a, b;
        if (k == 0) {
          a = (beta - alpha) / (s + 2);
          b = 0;
        } else {
          Rational t = 2 * k + s;
          a = (beta * beta - alpha * alpha) / (t * (t + 2));
          b = Rational(4 * k) * (k + alpha) * (k + beta) * (k + s) /
              (t * t * (t + 1) * (t - 1));
        }
        return std::make_pair(a, b);
      };
      break;
    }
  }
  Poly<Rational> cur{-ab(0).first, Rational(1)};
  for (long k = 1; k < n; ++k) {
    auto [a, b] = ab(k);
    Poly<Rational> nxt = poly_sub(poly_mul(Poly<Rational>{-a, Rational(1)}, cur),
                                  poly_scale(prev, b));
    prev = cur;
    cur = nxt;
  }
  return poly_scale(cur, leading_c_rat(d, n));
}

/* Coefficient data of the eta-space difference operator:
 * T f(eta(x)) = V(x)(f(eta(x - i gamma)) - f) + V*(x)(f(eta(x + i gamma)) - f)
 * acts on polynomials as (c0 (S_k/2 - eta^k) + dt U_{k-1}) / den per monomial. */
struct DiffOpData {
  Poly<double> c0, dt, den;
};

inline DiffOpData diff_op_data(const SystemDescriptor& d) {
  switch (d.fam) {
    case Family::MP:
      return {Poly<double>{2.0 * d.a}, Poly<double>{0.0, 2.0}, Poly<double>{1.0}};
    case Family::CH: {
      Cplx a12 = d.ai[0] * d.ai[1], s = d.ai[0] + d.ai[1];
      return {Poly<double>{2.0 * a12.real(), -2.0 * s.imag(), -2.0},
              Poly<double>{2.0 * a12.imag(), b1_sum(d)}, Poly<double>{1.0}};
    }
    case Family::W: {
      auto e = elem_sym(d);
      double e1 = e[1].real(), e2 = e[2].real(), e3 = e[3].real(), e4 = e[4].real();
      return {Poly<double>{e3 - 2.0 * e4, 2.0 * e2 - e1, -2.0},
              poly_scale(Poly<double>{e4, 2.0 * e3 - e2, 1.0 - 2.0 * e1}, -2.0),
              Poly<double>{1.0, 4.0}};
    }
    case Family::AW: {
      auto e = elem_sym(d);
      double e1 = e[1].real(), e2 = e[2].real(), e3 = e[3].real(), e4 = e[4].real();
      double q = d.q;
      Poly<double> c0{(1.0 + q) * (e2 - 1.0 - e4), -2.0 * (e3 + q * e1), 4.0 * (e4 + q)};
      Poly<double> dt{2.0 * (1.0 + q) * (e3 - e1),
                      -6.0 * (e4 - q) + 2.0 * ((1.0 - q) * e2 + 1.0 - q * e4),
                      4.0 * (q * e1 - e3), 8.0 * (e4 - q)};
      dt = poly_scale(dt, -(1.0 / q - q) / 4.0);
      Poly<double> den{-(q + 1.0) * (q + 1.0), 0.0, 4.0 * q};
      return {c0, dt, den};
    }
    default: throw regime_error("diff_op_data is a discrete-regime quantity");
  }
}

inline Poly<double> poly_divide_checked(const Poly<double>& a, const Poly<double>& b) {
  auto [q, r] = poly_divmod(a, b);
  double scale = std::max({poly_max_abs(a), poly_max_abs(q) * poly_max_abs(b), 1e-300});
  if (poly_max_abs(r) > 1e-9 * scale)
    throw extraction_error("inexact polynomial division in operator assembly");
  return q;
}

/* Matrix of T on the monomial basis 1, eta, ..., eta^N; upper triangular with
 * the eigenvalues on the diagonal, which is asserted as a consistency check. */
inline MatX<double> diff_op_matrix(const SystemDescriptor& d, int N) {
  DiffOpData od = diff_op_data(d);
  Poly<double> s = eta_sum_poly(d, 2), p = eta_prod_poly(d, 2);
  std::vector<Poly<double>> S(N + 1), U(N + 1);
  S[0] = Poly<double>{2.0};
  if (N >= 1) S[1] = s;
  U[0] = Poly<double>{1.0};
  if (N >= 1) U[1] = s;
  for (int k = 2; k <= N; ++k) {
    S[k] = poly_sub(poly_mul(s, S[k - 1]), poly_mul(p, S[k - 2]));
    U[k] = poly_sub(poly_mul(s, U[k - 1]), poly_mul(p, U[k - 2]));
  }
  MatX<double> m(N + 1, N + 1);
  m.setZero();
  for (int k = 0; k <= N; ++k) {
    Poly<double> sym = poly_sub(poly_scale(S[k], 0.5), poly_monomial<double>(k));
    Poly<double> num = poly_mul(od.c0, sym);
    if (k >= 1) num = poly_add(num, poly_mul(od.dt, U[k - 1]));
    Poly<double> col = poly_divide_checked(num, od.den);
    if (col.degree() > k) throw extraction_error("difference operator does not lower degree");
    for (Eigen::Index j = 0; j <= col.degree(); ++j) m(j, k) = col.coeff[j];
    double ek = energy(d, k);
    if (std::abs(m(k, k) - ek) > 1e-9 * std::max(1.0, std::abs(ek)))
      throw extraction_error("difference operator diagonal disagrees with the spectrum");
  }
  return m;
}

/* Eigenpolynomials of the discrete families from the triangular eigenproblem,
 * scaled to the catalogued leading coefficient.  Ordinary families fall back
 * to the exact recurrence. */
inline Poly<double> poly_P(const SystemDescriptor& d, long n) {
  if (is_ordinary(d.fam)) return poly_cast<double>(poly_P_rat(d, n));
  MatX<double> m = diff_op_matrix(d, static_cast<int>(n));
  VecX<double> c(n + 1);
  c[n] = 1.0;
  double en = energy(d, n);
  for (long j = n - 1; j >= 0; --j) {
    double acc = 0.0;
    for (long k = j + 1; k <= n; ++k) acc += m(j, k) * c[k];
    double gap = en - energy(d, j);
    if (std::abs(gap) < 1e-12 * std::max(1.0, std::abs(en)))
      throw convergence_error("degenerate spectrum in polynomial construction");
    c[j] = acc / gap;
  }
  Poly<double> out;
  out.coeff = c;
  return poly_scale(out, leading_c(d, n));
}

/* Forward shift on polynomials, eta-space.  Ordinary: a scaled derivative.
 * Discrete: F[eta^k] = theta_1 U_{k-1} built on the half-step shift data. */
inline Poly<Rational> forward_shift_rat(const SystemDescriptor& d, const Poly<Rational>& f) {
  switch (d.fam) {
    case Family::H: return poly_derivative(f);
    case Family::L: return poly_scale(poly_derivative(f), Rational(2));
    case Family::J: return poly_scale(poly_derivative(f), Rational(-4));
    default: throw regime_error("forward_shift_rat covers the ordinary families");
  }
}

inline Poly<Rational> backward_shift_rat(const SystemDescriptor& d, const Poly<Rational>& f) {
  // acts on a polynomial in the lambda+delta system, lands in the lambda system
  Poly<Rational> df = poly_derivative(f);
  switch (d.fam) {
    case Family::H:
      return poly_sub(poly_mul(Poly<Rational>{Rational(0), Rational(2)}, f), df);
    case Family::L: {
      Poly<Rational> t = poly_mul(Poly<Rational>{Rational(0), Rational(-2)}, df);
      return poly_add(t, poly_mul(Poly<Rational>{-2 * d.g - 1, Rational(2)}, f));
    }
    case Family::J: {
      Poly<Rational> t = poly_mul(Poly<Rational>{Rational(1), Rational(0), Rational(-1)}, df);
      return poly_sub(t, poly_mul(Poly<Rational>{d.g - d.h, d.g + d.h + 1}, f));
    }
    default: throw regime_error("backward_shift_rat covers the ordinary families");
  }
}

inline Poly<double> forward_shift_poly(const SystemDescriptor& d, const Poly<double>& f) {
  if (is_ordinary(d.fam))
    throw regime_error("use forward_shift_rat in the ordinary regime");
  Poly<double> s = eta_sum_poly(d, 1), p = eta_prod_poly(d, 1);
  double th = theta_shift(d, 1);
  Eigen::Index n = f.degree();
  std::vector<Poly<double>> U(std::max<Eigen::Index>(n, 1));
  U[0] = Poly<double>{1.0};
  if (n >= 2) U[1] = s;
  for (Eigen::Index k = 2; k < n; ++k)
    U[k] = poly_sub(poly_mul(s, U[k - 1]), poly_mul(p, U[k - 2]));
  Poly<double> out;
  for (Eigen::Index k = 1; k <= n; ++k)
    out = poly_add(out, poly_scale(U[k - 1], th * f.coeff[k]));
  return out;
}

/* Backward shift in the discrete regime: pointwise application of
 * -i (V(x) (varphi f)(x - i gamma/2) - V*(x) (varphi f)(x + i gamma/2))
 * to f given as a polynomial in eta for the lambda+delta system, recovered
 * as a polynomial in eta by sampling. */
inline Poly<double> backward_shift_poly(const SystemDescriptor& d, const Poly<double>& f) {
  if (is_ordinary(d.fam))
    throw regime_error("use backward_shift_rat in the ordinary regime");
  int out_deg = static_cast<int>(f.degree()) + 1;
  double gam = gamma_d(d);
  auto val = [&](double eta) -> Cplx {
    double x = x_from_eta(d, eta);
    Cplx xm = Cplx(x, -0.5 * gam), xp = Cplx(x, 0.5 * gam);
    Cplx lhs = potential_V(d, Cplx(x, 0)) * varphi(d, xm) * poly_eval(f, eta_of(d, xm));
    Cplx rhs = potential_Vstar(d, Cplx(x, 0)) * varphi(d, xp) * poly_eval(f, eta_of(d, xp));
    return Cplx(0, -1) * (lhs - rhs);
  };
  auto [lo, hi] = eta_window(d, out_deg);
  return extract_polynomial_real(val, lo, hi, out_deg);
}

/* x-space Wronskian of polynomials in eta:
 * W[f1(eta(x)), .., fn(eta(x))](x) = (deta/dx)^{n(n-1)/2} W[f1, .., fn](eta(x)). */
inline Cplx wronskian_in_x(const SystemDescriptor& d, const std::vector<Poly<double>>& f,
                           const Cplx& x) {
  if (!is_ordinary(d.fam)) throw regime_error("the x-space Wronskian is an ordinary-regime form");
  const long n = static_cast<long>(f.size());
  std::vector<Poly<Cplx>> fc;
  fc.reserve(f.size());
  for (const auto& p : f) fc.push_back(poly_cast<Cplx>(p));
  Cplx w = poly_eval(wronskian_poly(fc), eta_of(d, x));
  const Cplx dd = deta_dx(d, x);
  for (long k = 0; k < n * (n - 1) / 2; ++k) w *= dd;
  return w;
}

/* Pointwise residual of the eta-space difference equation for the seed system:
 * V(x)(P(eta(x-i gamma)) - P(eta)) + V*(x)(P(eta(x+i gamma)) - P(eta)) = E_n P(eta). */
inline double seed_difference_residual(const SystemDescriptor& d, const Poly<double>& pn,
                                       long n, double x) {
  double gam = gamma_d(d);
  Cplx z(x, 0);
  Cplx pe = poly_eval(pn, eta_of(d, z));
  Cplx pm = poly_eval(pn, eta_of(d, z - Cplx(0, gam)));
  Cplx pp = poly_eval(pn, eta_of(d, z + Cplx(0, gam)));
  Cplx lhs = potential_V(d, z) * (pm - pe) + potential_Vstar(d, z) * (pp - pe);
  return std::abs(lhs - energy(d, n) * pe);
}

/* Shape invariance, ordinary regime: the prepotential identity at real x. */
inline double shape_invariance_residual_qm(const SystemDescriptor& d, double x) {
  SystemDescriptor d1 = shifted(d, 1);
  double lhs = prepotential_wp(d, x) * prepotential_wp(d, x) - prepotential_wpp(d, x);
  double rhs = prepotential_wp(d1, x) * prepotential_wp(d1, x) + prepotential_wpp(d1, x) +
               energy(d, 1);
  return std::abs(lhs - rhs);
}

/* Shape invariance, discrete regime: product and sum identities. */
inline double shape_invariance_residual_dqm_mult(const SystemDescriptor& d, const Cplx& x) {
  SystemDescriptor d1 = shifted(d, 1);
  double gam = gamma_d(d), kap = kappa_d(d);
  Cplx lhs = potential_V(d, x - Cplx(0, 0.5 * gam)) * potential_Vstar(d, x - Cplx(0, 0.5 * gam));
  Cplx rhs = kap * kap * potential_V(d1, x) * potential_Vstar(d1, x - Cplx(0, gam));
  return std::abs(lhs - rhs);
}

inline double shape_invariance_residual_dqm_add(const SystemDescriptor& d, const Cplx& x) {
  SystemDescriptor d1 = shifted(d, 1);
  double gam = gamma_d(d), kap = kappa_d(d);
  Cplx lhs = potential_V(d, x + Cplx(0, 0.5 * gam)) + potential_Vstar(d, x - Cplx(0, 0.5 * gam));
  Cplx rhs = kap * (potential_V(d1, x) + potential_Vstar(d1, x)) - energy(d, 1);
  return std::abs(lhs - rhs);
}

/* Zero mode of A: sqrt(V*(x - i gamma/2)) phi0(x - i gamma/2) =
 * sqrt(V(x + i gamma/2)) phi0(x + i gamma/2) at real x. */
inline double zero_mode_residual(const SystemDescriptor& d, double x) {
  double gam = gamma_d(d);
  Cplx xm(x, -0.5 * gam), xp(x, 0.5 * gam);
  Cplx lhs = std::sqrt(potential_Vstar(d, xm)) * phi0(d, xm);
  Cplx rhs = std::sqrt(potential_V(d, xp)) * phi0(d, xp);
  return std::abs(lhs - rhs);
}

/* phi0(x; lambda+delta)^2 = varphi(x)^2 V(x + i gamma/2; lambda) phi0(x + i gamma/2; lambda)^2,
 * the squared (branch-free) form of the ground-state shift property. */
inline double phi0_shift_residual(const SystemDescriptor& d, const Cplx& x) {
  SystemDescriptor d1 = shifted(d, 1);
  double gam = gamma_d(d);
  Cplx xp = x + Cplx(0, 0.5 * gam);
  Cplx lhs = phi0(d1, x);
  lhs *= lhs;
  Cplx p0 = phi0(d, xp);
  Cplx rhs = varphi(d, x) * varphi(d, x) * potential_V(d, xp) * p0 * p0;
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return std::abs(lhs - rhs) / scale;
}

/* V(x; lambda+delta) = kappa^{-1} (varphi(x - i gamma) / varphi(x)) V(x - i gamma/2; lambda). */
inline double potential_shift_residual(const SystemDescriptor& d, const Cplx& x) {
  SystemDescriptor d1 = shifted(d, 1);
  double gam = gamma_d(d), kap = kappa_d(d);
  Cplx lhs = potential_V(d1, x);
  Cplx rhs = (varphi(d, x - Cplx(0, gam)) / varphi(d, x)) *
             potential_V(d, x - Cplx(0, 0.5 * gam)) / kap;
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace kadel
