#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "kadel/krein_adler.hpp"

namespace kadel {

/* Closed forms for the contiguous deletion D = {1,...,ell}: the deforming
 * polynomial xi_ell, the deformed prepotential/potential, the factorised
 * energy constants, the backward-shift route to P_{ell,n}, and the squared
 * norms h_{ell,n}.  Everything here must reproduce the generic Wronskian or
 * Casoratian construction of krein_adler; the overall constants relating the
 * two routes are implemented exactly, and a mismatch is an error, never a
 * fudge factor. */

struct EllSystem {
  SystemDescriptor desc;
  long ell = 0;
  Poly<double> xi;
  long mu = 0;
  bool xi_zero_free = false;
};

/* Parameter flip lambda -> -lambda* - (ell-1)delta entering the closed form
 * of xi_ell in the discrete regime. */
inline SystemDescriptor flipped_descriptor(const SystemDescriptor& d, long ell) {
  SystemDescriptor f = d;
  const double s = 0.5 * static_cast<double>(ell - 1);
  switch (d.fam) {
    case Family::MP:
      f.a = -d.a - s;
      break;
    case Family::CH:
      for (int j = 0; j < 2; ++j) f.ai[j] = -std::conj(d.ai[j]) - s;
      break;
    case Family::W:
      for (int j = 0; j < 4; ++j) f.ai[j] = -std::conj(d.ai[j]) - s;
      break;
    case Family::AW: {
      const double r = std::pow(d.q, -s);
      for (int j = 0; j < 4; ++j) f.ai[j] = r / std::conj(d.ai[j]);
      break;
    }
    default:
      throw regime_error("the parameter flip is a discrete-regime construction");
  }
  return f;
}

/* xi_ell for the ordinary families, exact.  The classical polynomials carry
 * parameters outside the orthogonality domain, so the coefficients come from
 * the terminating sums, not from weight-based evaluators. */
inline Poly<Rational> xi_ell_rat(const SystemDescriptor& d, long ell) {
  if (!is_ordinary(d.fam))
    throw regime_error("exact xi_ell exists in the ordinary regime only");
  if (ell < 0) throw parameter_error("ell must be non-negative");
  if (ell == 0) return Poly<Rational>{Rational(1)};
  const Rational half(1, 2);
  switch (d.fam) {
    case Family::H: {
      std::vector<Poly<Rational>> he(ell + 1);
      he[0] = Poly<Rational>{Rational(1)};
      he[1] = Poly<Rational>{Rational(0), Rational(2)};
      for (long k = 2; k <= ell; ++k)
        he[k] = poly_sub(poly_mul(Poly<Rational>{Rational(0), Rational(2)}, he[k - 1]),
                         poly_scale(he[k - 2], Rational(2 * (k - 1))));
      Rational den = factorial_rat(ell);
      for (long k = 0; k < ell; ++k) den *= 2;
      Poly<Rational> out;
      out.coeff.resize(ell + 1);
      for (long j = 0; j <= ell; ++j) {
        Rational c = (j <= he[ell].degree()) ? he[ell].coeff[j] : Rational(0);
        if ((ell - j) % 2 == 0 && ((ell - j) / 2) % 2 != 0) c = -c;
        out.coeff[j] = c / den;
      }
      return poly_trim(out);
    }
    case Family::L: {
      Poly<Rational> out;
      out.coeff.resize(ell + 1);
      for (long k = 0; k <= ell; ++k) {
        Rational c(1);
        for (long t = 0; t < ell - k; ++t) c *= -d.g - half - t;
        out.coeff[k] = c / (factorial_rat(ell - k) * factorial_rat(k));
      }
      return poly_trim(out);
    }
    case Family::J: {
      const Poly<Rational> zp{half, half}, zm{-half, half};
      Poly<Rational> acc{};
      for (long s = 0; s <= ell; ++s) {
        Rational ba(1), bb(1);
        for (long t = 0; t < ell - s; ++t) ba *= -d.g - half - t;
        for (long t = 0; t < s; ++t) bb *= -d.h - half - t;
        ba /= factorial_rat(ell - s);
        bb /= factorial_rat(s);
        acc = poly_add(acc,
                       poly_scale(poly_mul(poly_pow(zm, s), poly_pow(zp, ell - s)),
                                  Rational(ba * bb)));
      }
      Rational scale(1);
      for (long k = 0; k < ell; ++k) scale *= -2;
      return poly_scale(acc, scale / pochhammer<Rational>(d.g + d.h + 1, ell));
    }
    default:
      throw regime_error("unreachable");
  }
}

/* xi_ell for every family.  Discrete: the seed polynomial of degree ell at
 * flipped parameters, rescaled to the stated normalisation. */
inline Poly<double> xi_ell(const SystemDescriptor& d, long ell) {
  if (ell < 0) throw parameter_error("ell must be non-negative");
  if (is_ordinary(d.fam)) return poly_cast<double>(xi_ell_rat(d, ell));
  if (ell == 0) return Poly<double>{1.0};
  const SystemDescriptor f = flipped_descriptor(d, ell);
  Poly<double> p;
  try {
    p = poly_P(f, ell);
  } catch (const convergence_error& e) {
    throw parameter_error(std::string("xi_ell closed form undefined at flipped parameters: ") +
                          e.what());
  }
  const double lc = leading_c(f, ell);
  if (!(std::abs(lc) > 0.0))
    throw parameter_error("xi_ell closed form undefined: flipped leading coefficient vanishes");
  double scale = 1.0;
  if (d.fam == Family::AW) {
    const double gam = gamma_d(d);
    for (long j = 1; j <= ell; ++j) scale *= std::sinh(-0.5 * j * gam);
  } else {
    scale = to_double(factorial_rat(ell));
  }
  return poly_scale(p, 1.0 / (lc * scale));
}

inline EllSystem make_ell_system(const SystemDescriptor& d, long ell, bool force = false) {
  validate(d);
  EllSystem s;
  s.desc = d;
  s.ell = ell;
  s.mu = 0;
  s.xi = xi_ell(d, ell);
  if (s.xi.degree() != ell)
    throw extraction_error("xi_ell does not have the expected degree");
  if (is_ordinary(d.fam)) {
    const auto w = scan_window(d, static_cast<int>(ell));
    s.xi_zero_free = poly_zero_free_on(s.xi, w.first, w.second);
  } else {
    s.xi_zero_free = dqm_Q_zero_free(d, s.xi);
  }
  if (ell % 2 == 0 && !s.xi_zero_free && !force)
    throw pole_error("xi_ell vanishes inside the range");
  return s;
}

/* Deformed prepotential.  The sign of phi_{ell,0} lives in xi_ell; the
 * prepotential tracks the modulus, so odd ell only fails where xi_ell
 * actually vanishes. */
inline double prepotential_w_ell(const EllSystem& s, double x) {
  if (!is_ordinary(s.desc.fam))
    throw regime_error("the prepotential is an ordinary-regime quantity");
  const double xi = poly_eval(s.xi, eta_real(s.desc, x));
  if (xi == 0.0) throw pole_error("xi_ell vanishes at this point");
  return prepotential_w(shifted(s.desc, static_cast<int>(s.ell)), x) - std::log(std::abs(xi));
}

inline double prepotential_w_ell(const SystemDescriptor& d, long ell, double x) {
  return prepotential_w_ell(make_ell_system(d, ell), x);
}

/* Deformed potential, parameter-shift form. */
inline Cplx V_ell(const EllSystem& s, const Cplx& x) {
  if (is_ordinary(s.desc.fam))
    throw regime_error("V_ell is a discrete-regime quantity");
  const Cplx half(0.0, 0.5 * gamma_d(s.desc));
  const Cplx xip = poly_eval(s.xi, eta_of(s.desc, x + half));
  const Cplx xim = poly_eval(s.xi, eta_of(s.desc, x - half));
  if (!(std::abs(xim) > 0.0)) throw pole_error("xi_ell vanishes at the shifted point");
  const double kl = std::pow(kappa_d(s.desc), static_cast<double>(s.ell));
  return kl * (xip / xim) * potential_V(shifted(s.desc, static_cast<int>(s.ell)), x);
}

inline Cplx V_ell(const SystemDescriptor& d, long ell, const Cplx& x) {
  return V_ell(make_ell_system(d, ell), x);
}

/* The same potential assembled from the varphi-ratio form; agreement with
 * V_ell is one of the module's cross-checks. */
inline Cplx V_ell_varphi_form(const EllSystem& s, const Cplx& x) {
  if (is_ordinary(s.desc.fam))
    throw regime_error("V_ell is a discrete-regime quantity");
  const SystemDescriptor& d = s.desc;
  const double gam = gamma_d(d);
  const Cplx ig(0.0, gam);
  const Cplx half = 0.5 * ig;
  const Cplx xip = poly_eval(s.xi, eta_of(d, x + half));
  const Cplx xim = poly_eval(s.xi, eta_of(d, x - half));
  const Cplx den = varphi(d, x) * varphi(d, x - half) * xim;
  if (!(std::abs(den) > 0.0)) throw pole_error("varphi ratio has a pole at this point");
  const double l = static_cast<double>(s.ell);
  return varphi(d, x - 0.5 * (l + 1.0) * ig) * varphi(d, x - 0.5 * l * ig) * xip *
         potential_V(d, x - 0.5 * l * ig) / den;
}

/* The constant A relating (f_n, b_{n-1}) to (f_{ell,n}, b_{ell,n-1}). */
inline Rational fb_shift_A_rat(const SystemDescriptor& d, long ell, long n) {
  Rational a(1);
  switch (d.fam) {
    case Family::H:
      for (long k = 0; k < ell; ++k) a *= -2;
      return a * pochhammer<Rational>(Rational(n - ell), ell);
    case Family::L:
      return a;
    case Family::J:
      for (long k = 0; k < ell; ++k) a /= -2;
      return a * pochhammer<Rational>(d.g + d.h + n + 1, ell);
    default:
      throw regime_error("exact factorisation constants exist in the ordinary regime only");
  }
}

inline double fb_shift_A(const SystemDescriptor& d, long ell, long n) {
  switch (d.fam) {
    case Family::H:
    case Family::L:
    case Family::J:
      return to_double(fb_shift_A_rat(d, ell, n));
    case Family::MP:
      return std::pow(2.0, static_cast<double>(ell));
    case Family::CH:
      return pochhammer<double>(b1_sum(d) + n, ell);
    case Family::W:
      return (ell % 2 ? -1.0 : 1.0) * pochhammer<double>(static_cast<double>(n - ell), ell) *
             pochhammer<double>(b1_sum(d) + n, ell);
    case Family::AW: {
      const double qn = std::pow(d.q, static_cast<double>(n));
      const Cplx p1 = q_pochhammer(Cplx(qn * std::pow(d.q, -static_cast<double>(ell)), 0), d.q, ell);
      const Cplx p2 = q_pochhammer(Cplx(b4_prod(d) * qn, 0), d.q, ell);
      return std::pow(d.q, -0.5 * ell * n) * p1.real() * p2.real();
    }
  }
  return 0.0;
}

/* f_{ell,n} = f_n A and b_{ell,n-1} = b_{n-1}/A; the product is E_n(lambda)
 * untouched. */
inline std::pair<Rational, Rational> f_b_ell_rat(const SystemDescriptor& d, long ell, long n) {
  if (n < 0 || (n >= 1 && n <= ell))
    throw parameter_error("factorisation constants exist for n = 0 and n >= ell+1 only");
  const Rational a = fb_shift_A_rat(d, ell, n);
  if (a == 0) throw parameter_error("factorisation constant A vanishes");
  return {fn_factor_rat(d, n) * a, bn_factor_rat(d, n) / a};
}

inline std::pair<double, double> f_b_ell(const SystemDescriptor& d, long ell, long n) {
  if (n < 0 || (n >= 1 && n <= ell))
    throw parameter_error("factorisation constants exist for n = 0 and n >= ell+1 only");
  if (is_ordinary(d.fam)) {
    const auto fb = f_b_ell_rat(d, ell, n);
    return {to_double(fb.first), to_double(fb.second)};
  }
  const double a = fb_shift_A(d, ell, n);
  if (!(std::abs(a) > 0.0)) throw parameter_error("factorisation constant A vanishes");
  return {fn_factor(d, n) * a, bn_factor(d, n) / a};
}

inline Poly<Rational> c2_coeff(const SystemDescriptor& d) {
  switch (d.fam) {
    case Family::H: return Poly<Rational>{Rational(1, 4)};
    case Family::L: return Poly<Rational>{Rational(0), Rational(1)};
    case Family::J: return Poly<Rational>{Rational(1), Rational(0), Rational(-1)};
    default: throw regime_error("c2 exists in the ordinary regime only");
  }
}

/* P_{ell,n} via the backward-shift identity, exact.  Zero for deleted and
 * negative levels, one for n = 0. */
inline Poly<Rational> P_ell_n_rat(const SystemDescriptor& d, long ell, long n) {
  if (!is_ordinary(d.fam))
    throw regime_error("exact deformed polynomials exist in the ordinary regime only");
  if (n < 0 || (n >= 1 && n <= ell)) return Poly<Rational>{};
  if (n == 0) return Poly<Rational>{Rational(1)};
  const SystemDescriptor ds = shifted(d, static_cast<int>(ell));
  const Poly<Rational> xi = xi_ell_rat(d, ell);
  const Poly<Rational> pn = poly_P_rat(ds, n - ell);
  const Poly<Rational> lhs =
      poly_add(poly_scale(poly_mul(xi, pn), energy_rat(ds, n - ell)),
               poly_scale(poly_mul(poly_mul(c2_coeff(d), poly_derivative(xi)),
                                   poly_derivative(pn)),
                          Rational(4)));
  const Rational den = f_b_ell_rat(d, ell, n).second * fn_factor_rat(ds, n - ell);
  if (den == 0) throw parameter_error("backward-shift normalisation vanishes");
  return poly_scale(lhs, Rational(1) / den);
}

inline Poly<double> P_ell_n(const SystemDescriptor& d, long ell, long n) {
  if (is_ordinary(d.fam)) return poly_cast<double>(P_ell_n_rat(d, ell, n));
  if (n < 0 || (n >= 1 && n <= ell)) return Poly<double>{};
  if (n == 0) return Poly<double>{1.0};
  const Poly<double> xi = xi_ell(d, ell);
  const SystemDescriptor dl = shifted(d, static_cast<int>(ell));
  const Poly<double> pm = poly_P(shifted(d, static_cast<int>(ell) + 1), n - ell - 1);
  const double gam = gamma_d(d);
  const Cplx half(0.0, 0.5 * gam);
  const double pref = (ell % 2 ? -1.0 : 1.0) *
                      std::pow(kappa_d(d), 0.25 * static_cast<double>(ell * (ell - 3))) *
                      f_b_ell(d, ell, n).second;
  auto val = [&](double ev) {
    const Cplx x(x_from_eta(d, ev), 0.0);
    const Cplx z = potential_V(dl, x) * poly_eval(xi, eta_of(d, x + half)) *
                   varphi(d, x - half) * poly_eval(pm, eta_of(d, x - half));
    return Cplx(2.0 * z.imag() / pref, 0.0);
  };
  const auto win = eta_window(d, static_cast<int>(n));
  return extract_polynomial_real(val, win.first, win.second, static_cast<int>(n));
}

/* Squared norms of the deformed eigenfunctions, even ell. */
inline double h_ell_n(const SystemDescriptor& d, long ell, long n, bool force = false) {
  if (ell % 2 != 0 && !force)
    throw parameter_error("odd ell deformations are not hermitian; norms are undefined");
  if (n < 0 || (n >= 1 && n <= ell))
    throw parameter_error("norms exist for n = 0 and n >= ell+1 only");
  const double hn = norm_h(d, n);
  const double poch = pochhammer<double>(static_cast<double>(n - ell), ell);
  switch (d.fam) {
    case Family::H:
      return poch * hn * std::pow(2.0, static_cast<double>(ell));
    case Family::L:
      return poch * hn;
    case Family::J:
      return poch * hn * std::pow(4.0, -static_cast<double>(ell)) *
             pochhammer<double>(to_double(d.g) + to_double(d.h) + n + 1, ell);
    case Family::MP:
      return hn * poch * std::pow(2.0, static_cast<double>(ell));
    case Family::CH:
    case Family::W:
      return hn * poch * pochhammer<double>(b1_sum(d) + n, ell);
    case Family::AW: {
      const double qn = std::pow(d.q, static_cast<double>(n));
      const Cplx p1 = q_pochhammer(Cplx(qn * std::pow(d.q, -static_cast<double>(ell)), 0), d.q, ell);
      const Cplx p2 = q_pochhammer(Cplx(b4_prod(d) * qn, 0), d.q, ell);
      return hn * std::pow(d.q, -static_cast<double>(ell * n)) * p1.real() * p2.real();
    }
  }
  return 0.0;
}

/* Modified ground state.  On the real range the square roots are positive;
 * off axis the principal branch is used, which fixes phi_{ell,0} up to the
 * sign every verified relation is insensitive to. */
inline Cplx phi_ell_0(const EllSystem& s, const Cplx& x) {
  const SystemDescriptor& d = s.desc;
  const SystemDescriptor dl = shifted(d, static_cast<int>(s.ell));
  if (is_ordinary(d.fam)) {
    const Cplx xi = poly_eval(s.xi, eta_of(d, x));
    if (!(std::abs(xi) > 0.0)) throw pole_error("xi_ell vanishes at this point");
    return phi0(dl, x) / xi;
  }
  const Cplx half(0.0, 0.5 * gamma_d(d));
  const Cplx prod = poly_eval(s.xi, eta_of(d, x - half)) * poly_eval(s.xi, eta_of(d, x + half));
  if (!(std::abs(prod) > 0.0)) throw pole_error("xi_ell vanishes at a shifted point");
  const double c = (s.ell % 2 ? -1.0 : 1.0) *
                   std::pow(kappa_d(d), 0.25 * static_cast<double>(s.ell * (s.ell - 1)));
  return c * phi0(dl, x) / std::sqrt(prod);
}

/* Forward shift on the deformed polynomials; the division by xi_ell is exact
 * for genuine P_{ell,n} input. */
inline Poly<Rational> F_ell_apply_rat(const SystemDescriptor& d, long ell,
                                      const Poly<Rational>& p) {
  return poly_divide_exact(forward_shift_rat(d, p), xi_ell_rat(d, ell));
}

inline Poly<double> F_ell_apply(const SystemDescriptor& d, long ell, const Poly<double>& p) {
  if (is_ordinary(d.fam))
    return poly_cast<double>(F_ell_apply_rat(d, ell, poly_cast<Rational>(p)));
  if (p.degree() < 1) return Poly<double>{};
  const double gam = gamma_d(d);
  const Cplx half(0.0, 0.5 * gam);
  const double pref = (ell % 2 ? -1.0 : 1.0) *
                      std::pow(kappa_d(d), 0.25 * static_cast<double>(ell * (ell + 1)));
  /* The shift difference divided by varphi is a polynomial for any input, so
   * the xi_ell division runs on coefficients, where it stays well behaved at
   * real zeros of odd-ell xi. */
  auto value = [&](double ev) {
    const Cplx x(x_from_eta(d, ev), 0.0);
    const Cplx z = poly_eval(p, eta_of(d, x - half));
    return Cplx(-2.0 * pref * z.imag(), 0.0) / varphi(d, x);
  };
  const long m = p.degree() - 1;
  const auto win = eta_window(d, static_cast<int>(std::max<long>(m, 1)));
  const Poly<double> num =
      extract_polynomial_real(value, win.first, win.second, static_cast<int>(m));
  return poly_divide_checked(num, xi_ell(d, ell));
}

/* Backward shift, acting on polynomials of the (ell+1)-shifted system. */
inline Poly<Rational> B_ell_apply_rat(const SystemDescriptor& d, long ell,
                                      const Poly<Rational>& p) {
  const Poly<Rational> xi = xi_ell_rat(d, ell);
  const Poly<Rational> xip = poly_derivative(xi);
  const Poly<Rational> pp = poly_derivative(p);
  const Poly<Rational> eta{Rational(0), Rational(1)};
  switch (d.fam) {
    case Family::H:
      return poly_add(poly_mul(xi, poly_sub(poly_scale(poly_mul(eta, p), Rational(2)), pp)),
                      poly_mul(xip, p));
    case Family::L: {
      const Poly<Rational> lin{-2 * d.g - 2 * ell - 1, Rational(2)};
      return poly_add(poly_mul(xi, poly_sub(poly_mul(lin, p),
                                            poly_scale(poly_mul(eta, pp), Rational(2)))),
                      poly_scale(poly_mul(poly_mul(eta, xip), p), Rational(2)));
    }
    case Family::J: {
      const Poly<Rational> c{Rational(1), Rational(0), Rational(-1)};
      const Poly<Rational> lin{d.g - d.h, d.g + d.h + 2 * ell + 1};
      return poly_sub(poly_mul(xi, poly_sub(poly_mul(c, pp), poly_mul(lin, p))),
                      poly_mul(poly_mul(c, xip), p));
    }
    default:
      throw regime_error("exact backward shift exists in the ordinary regime only");
  }
}

inline Poly<double> B_ell_apply(const SystemDescriptor& d, long ell, const Poly<double>& p) {
  if (is_ordinary(d.fam))
    return poly_cast<double>(B_ell_apply_rat(d, ell, poly_cast<Rational>(p)));
  const Poly<double> xi = xi_ell(d, ell);
  const SystemDescriptor dl = shifted(d, static_cast<int>(ell));
  const double gam = gamma_d(d);
  const Cplx half(0.0, 0.5 * gam);
  const double pref = (ell % 2 ? -1.0 : 1.0) *
                      std::pow(kappa_d(d), -0.25 * static_cast<double>(ell * (ell - 3)));
  auto value = [&](double ev) {
    const Cplx x(x_from_eta(d, ev), 0.0);
    const Cplx z = potential_V(dl, x) * poly_eval(xi, eta_of(d, x + half)) *
                   varphi(d, x - half) * poly_eval(p, eta_of(d, x - half));
    return Cplx(2.0 * pref * z.imag(), 0.0);
  };
  const long m = p.degree() + ell + 1;
  const auto win = eta_window(d, static_cast<int>(m));
  return extract_polynomial_real(value, win.first, win.second, static_cast<int>(m));
}

namespace detail {

inline double rel_mismatch(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)) / scale;
}

}  // namespace detail

/* Residual of the intertwining relations A_ell phi_{ell,n} = f_{ell,n}
 * phi_{n-ell-1}(lambda+(ell+1)delta) and its dagger with b_{ell,n-1}.  The
 * square roots in the discrete operators are taken pointwise, so both sides
 * are compared up to an overall sign. */
inline double intertwine_residual(const EllSystem& s, long n, double x) {
  const SystemDescriptor& d = s.desc;
  if (n < s.ell + 1) throw parameter_error("the relation is stated for n >= ell+1");
  const auto fb = f_b_ell(d, s.ell, n);
  const SystemDescriptor du = shifted(d, static_cast<int>(s.ell) + 1);
  const Poly<double> pl = P_ell_n(d, s.ell, n);
  const Poly<double> pm = poly_P(du, n - s.ell - 1);
  if (is_ordinary(d.fam)) {
    const SystemDescriptor dl = shifted(d, static_cast<int>(s.ell));
    const double e = eta_real(d, x);
    const double ep = deta_dx(d, Cplx(x, 0.0)).real();
    const double g0 = phi_ell_0(s, Cplx(x, 0.0)).real();
    const double fwd_l = g0 * poly_eval(poly_derivative(pl), e) * ep;
    const double fwd_r = fb.first * phi0(du, Cplx(x, 0.0)).real() * poly_eval(pm, e);
    const double xiv = poly_eval(s.xi, e);
    const double wlp = prepotential_wp(dl, x) - poly_eval(poly_derivative(s.xi), e) * ep / xiv;
    const double psi = phi0(du, Cplx(x, 0.0)).real();
    const double rev_l = -psi * ((prepotential_wp(du, x) + wlp) * poly_eval(pm, e) +
                                 poly_eval(poly_derivative(pm), e) * ep);
    const double rev_r = fb.second * g0 * poly_eval(pl, e);
    return std::max(detail::rel_mismatch(fwd_l, fwd_r), detail::rel_mismatch(rev_l, rev_r));
  }
  const Cplx xc(x, 0.0);
  const Cplx half(0.0, 0.5 * gamma_d(d));
  const Cplx zf = std::sqrt(V_ell(s, xc + half)) * phi_ell_0(s, xc + half) *
                  poly_eval(pl, eta_of(d, xc + half));
  const double fwd_l = 2.0 * zf.imag();
  const double fwd_r = fb.first * phi0(du, xc).real() * poly_eval(pm, eta_real(d, x));
  const Cplx zr = std::sqrt(V_ell(s, xc)) * phi0(du, xc - half) *
                  poly_eval(pm, eta_of(d, xc - half));
  const double rev_l = 2.0 * zr.imag();
  const double rev_r = fb.second * phi_ell_0(s, xc).real() * poly_eval(pl, eta_real(d, x));
  return std::max(detail::rel_mismatch(fwd_l, fwd_r), detail::rel_mismatch(rev_l, rev_r));
}

inline double intertwine_residual(const SystemDescriptor& d, long ell, long n, double x) {
  return intertwine_residual(make_ell_system(d, ell), n, x);
}

}  // namespace kadel
