#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "kadel/poly.hpp"
#include "kadel/special.hpp"

namespace kadel {

enum class Family { H, L, J, MP, CH, W, AW };

inline bool is_ordinary(Family f) { return f == Family::H || f == Family::L || f == Family::J; }

inline int param_count_ai(Family f) {
  switch (f) {
    case Family::CH: return 2;
    case Family::W:
    case Family::AW: return 4;
    default: return 0;
  }
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::H: return "H";
    case Family::L: return "L";
    case Family::J: return "J";
    case Family::MP: return "MP";
    case Family::CH: return "CH";
    case Family::W: return "W";
    case Family::AW: return "AW";
  }
  return "?";
}

inline Family family_from_string(const std::string& s) {
  if (s == "H") return Family::H;
  if (s == "L") return Family::L;
  if (s == "J") return Family::J;
  if (s == "MP") return Family::MP;
  if (s == "CH") return Family::CH;
  if (s == "W") return Family::W;
  if (s == "AW") return Family::AW;
  throw parameter_error("unknown family '" + s + "'");
}

/* Parameters of one solvable system.  Only the slots relevant to `fam` are
 * meaningful: L uses g, J uses g and h, MP uses a, CH uses ai[0..1],
 * W uses ai[0..3], AW uses ai[0..3] and q. */
struct SystemDescriptor {
  Family fam = Family::H;
  Rational g = 0;
  Rational h = 0;
  double a = 0.0;
  std::array<Cplx, 4> ai{};
  double q = 0.0;
};

inline bool conj_closed_set(const std::array<Cplx, 4>& ai, int n, double tol = 1e-12) {
  std::vector<bool> used(n, false);
  for (int i = 0; i < n; ++i) {
    bool found = false;
    for (int j = 0; j < n && !found; ++j) {
      if (!used[j] && std::abs(std::conj(ai[i]) - ai[j]) <= tol) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline void validate(const SystemDescriptor& d) {
  switch (d.fam) {
    case Family::H:
      break;
    case Family::L:
      if (!(d.g > 0)) throw parameter_error("L requires g > 0");
      break;
    case Family::J:
      if (!(d.g > 0) || !(d.h > 0)) throw parameter_error("J requires g > 0 and h > 0");
      break;
    case Family::MP:
      if (!(d.a > 0)) throw parameter_error("MP requires a > 0");
      break;
    case Family::CH:
      for (int i = 0; i < 2; ++i)
        if (!(d.ai[i].real() > 0)) throw parameter_error("CH requires Re a1, Re a2 > 0");
      break;
    case Family::W:
      for (int i = 0; i < 4; ++i)
        if (!(d.ai[i].real() > 0)) throw parameter_error("W requires Re ai > 0");
      if (!conj_closed_set(d.ai, 4)) throw parameter_error("W requires {conj ai} = {ai}");
      break;
    case Family::AW:
      if (!(d.q > 0.0 && d.q < 1.0)) throw parameter_error("AW requires 0 < q < 1");
      for (int i = 0; i < 4; ++i)
        if (!(std::abs(d.ai[i]) < 1.0)) throw parameter_error("AW requires |ai| < 1");
      if (!conj_closed_set(d.ai, 4)) throw parameter_error("AW requires {conj ai} = {ai}");
      break;
  }
}

/* Parameter shift lambda -> lambda + k*delta. */
inline SystemDescriptor shifted(const SystemDescriptor& d, int k) {
  SystemDescriptor out = d;
  switch (d.fam) {
    case Family::H:
      break;
    case Family::L:
      out.g = d.g + k;
      break;
    case Family::J:
      out.g = d.g + k;
      out.h = d.h + k;
      break;
    case Family::MP:
      out.a = d.a + 0.5 * k;
      break;
    case Family::CH:
      for (int i = 0; i < 2; ++i) out.ai[i] = d.ai[i] + 0.5 * k;
      break;
    case Family::W:
      for (int i = 0; i < 4; ++i) out.ai[i] = d.ai[i] + 0.5 * k;
      break;
    case Family::AW: {
      double f = std::pow(d.q, 0.5 * k);
      for (int i = 0; i < 4; ++i) out.ai[i] = d.ai[i] * f;
      break;
    }
  }
  return out;
}

inline double gamma_d(const SystemDescriptor& d) {
  if (d.fam == Family::AW) return std::log(d.q);
  if (is_ordinary(d.fam)) throw regime_error("gamma is a discrete-regime quantity");
  return 1.0;
}

inline double kappa_d(const SystemDescriptor& d) {
  if (d.fam == Family::AW) return 1.0 / d.q;
  if (is_ordinary(d.fam)) throw regime_error("kappa is a discrete-regime quantity");
  return 1.0;
}

inline double b1_sum(const SystemDescriptor& d) {
  if (d.fam == Family::CH) {
    Cplx s = d.ai[0] + d.ai[1];
    return 2.0 * s.real();
  }
  if (d.fam == Family::W) {
    Cplx s = d.ai[0] + d.ai[1] + d.ai[2] + d.ai[3];
    return s.real();
  }
  throw regime_error("b1 defined for CH and W only");
}

inline double b4_prod(const SystemDescriptor& d) {
  if (d.fam != Family::AW) throw regime_error("b4 defined for AW only");
  Cplx p = d.ai[0] * d.ai[1] * d.ai[2] * d.ai[3];
  return p.real();
}

/* Elementary symmetric polynomials of the ai. */
inline std::array<Cplx, 5> elem_sym(const SystemDescriptor& d) {
  int n = param_count_ai(d.fam);
  std::array<Cplx, 5> e{Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0)};
  for (int i = 0; i < n; ++i)
    for (int k = std::min(i + 1, 4); k >= 1; --k) e[k] = e[k] + e[k - 1] * d.ai[i];
  return e;
}

inline Cplx eta_of(const SystemDescriptor& d, const Cplx& x) {
  switch (d.fam) {
    case Family::H:
    case Family::MP:
    case Family::CH: return x;
    case Family::L:
    case Family::W: return x * x;
    case Family::J: return std::cos(2.0 * x);
    case Family::AW: return std::cos(x);
  }
  return x;
}

inline double x_from_eta(const SystemDescriptor& d, double eta) {
  switch (d.fam) {
    case Family::H:
    case Family::MP:
    case Family::CH: return eta;
    case Family::L:
    case Family::W:
      if (eta < 0) throw parameter_error("eta must be nonnegative for this family");
      return std::sqrt(eta);
    case Family::J:
      return 0.5 * std::acos(eta);
    case Family::AW:
      return std::acos(eta);
  }
  return eta;
}

inline Cplx deta_dx(const SystemDescriptor& d, const Cplx& x) {
  switch (d.fam) {
    case Family::H: return Cplx(1, 0);
    case Family::L: return 2.0 * x;
    case Family::J: return -2.0 * std::sin(2.0 * x);
    default: throw regime_error("deta_dx used in the ordinary regime only");
  }
}

inline Cplx d2eta_dx2(const SystemDescriptor& d, const Cplx& x) {
  switch (d.fam) {
    case Family::H: return Cplx(0, 0);
    case Family::L: return Cplx(2, 0);
    case Family::J: return -4.0 * std::cos(2.0 * x);
    default: throw regime_error("d2eta_dx2 used in the ordinary regime only");
  }
}

/* The auxiliary function varphi(x) of the discrete regime. */
inline Cplx varphi(const SystemDescriptor& d, const Cplx& x) {
  switch (d.fam) {
    case Family::MP:
    case Family::CH: return Cplx(1, 0);
    case Family::W: return 2.0 * x;
    case Family::AW: return 2.0 * std::sin(x);
    default: throw regime_error("varphi is a discrete-regime quantity");
  }
}

/* varphi_ell(x) = varphi(x)^{[ell/2]} prod_{k=1}^{ell-2}
 *   (varphi(x - i k gamma/2) varphi(x + i k gamma/2))^{[(ell-k)/2]},
 * with varphi_0 = varphi_1 = 1. */
inline Cplx varphi_ell_aux(const SystemDescriptor& d, const Cplx& x, int ell) {
  if (ell <= 1) return Cplx(1, 0);
  double gam = gamma_d(d);
  Cplx out = Cplx(1, 0);
  for (int t = 0; t < ell / 2; ++t) out *= varphi(d, x);
  for (int k = 1; k <= ell - 2; ++k) {
    int e = (ell - k) / 2;
    Cplx f = varphi(d, x - Cplx(0, 0.5 * k * gam)) * varphi(d, x + Cplx(0, 0.5 * k * gam));
    for (int t = 0; t < e; ++t) out *= f;
  }
  return out;
}

/* eta(x - i k gamma/2) - eta(x + i k gamma/2) = -i varphi(x) theta_k. */
inline double theta_shift(const SystemDescriptor& d, int k) {
  switch (d.fam) {
    case Family::MP:
    case Family::CH:
    case Family::W: return static_cast<double>(k);
    case Family::AW: return std::sinh(-0.5 * k * gamma_d(d));
    default: throw regime_error("theta_shift is a discrete-regime quantity");
  }
}

/* eta(x - i k gamma/2) + eta(x + i k gamma/2) as a polynomial in eta(x). */
inline Poly<double> eta_sum_poly(const SystemDescriptor& d, int k) {
  switch (d.fam) {
    case Family::MP:
    case Family::CH: return Poly<double>{0.0, 2.0};
    case Family::W: return Poly<double>{-0.5 * k * k, 2.0};
    case Family::AW: return Poly<double>{0.0, 2.0 * std::cosh(0.5 * k * gamma_d(d))};
    default: throw regime_error("eta_sum_poly is a discrete-regime quantity");
  }
}

/* eta(x - i k gamma/2) * eta(x + i k gamma/2) as a polynomial in eta(x). */
inline Poly<double> eta_prod_poly(const SystemDescriptor& d, int k) {
  switch (d.fam) {
    case Family::MP:
    case Family::CH: return Poly<double>{0.25 * k * k, 0.0, 1.0};
    case Family::W: {
      double c = 0.25 * k * k;
      return Poly<double>{c * c, 2.0 * c, 1.0};
    }
    case Family::AW: {
      double s = std::sinh(0.5 * k * gamma_d(d));
      return Poly<double>{s * s, 0.0, 1.0};
    }
    default: throw regime_error("eta_prod_poly is a discrete-regime quantity");
  }
}

struct Range {
  double x1 = 0.0, x2 = 0.0;
  bool left_inf = false, right_inf = false;
};

inline Range range_of(const SystemDescriptor& d) {
  switch (d.fam) {
    case Family::H:
    case Family::MP:
    case Family::CH: return Range{0.0, 0.0, true, true};
    case Family::L:
    case Family::W: return Range{0.0, 0.0, false, true};
    case Family::J: return Range{0.0, 1.5707963267948966, false, false};
    case Family::AW: return Range{0.0, 3.14159265358979323846, false, false};
  }
  return Range{};
}

inline double eta_real(const SystemDescriptor& d, double x) {
  return eta_of(d, Cplx(x, 0.0)).real();
}

/* Real eta-window for polynomial sampling: Chebyshev nodes are placed here.
 * Finite x-endpoints get a 5% margin; infinite ends use L = max(4, 2 deg). */
inline std::pair<double, double> eta_window(const SystemDescriptor& d, int degree_bound) {
  double L = std::max(4.0, 2.0 * degree_bound);
  Range r = range_of(d);
  if (r.left_inf && r.right_inf) return {-L, L};
  if (!r.left_inf && r.right_inf) {
    // eta = x^2 families: one-sided window kept away from x = 0
    return {0.05 * L, L};
  }
  double m = 0.05 * (r.x2 - r.x1);
  double e1 = eta_real(d, r.x1 + m), e2 = eta_real(d, r.x2 - m);
  return {std::min(e1, e2), std::max(e1, e2)};
}

/* Ordinary-regime prepotential and derivatives at real x inside the range. */
inline double prepotential_w(const SystemDescriptor& d, double x) {
  switch (d.fam) {
    case Family::H: return -0.5 * x * x;
    case Family::L: return -0.5 * x * x + to_double(d.g) * std::log(x);
    case Family::J:
      return to_double(d.g) * std::log(std::sin(x)) + to_double(d.h) * std::log(std::cos(x));
    default: throw regime_error("prepotential is an ordinary-regime quantity");
  }
}

inline double prepotential_wp(const SystemDescriptor& d, double x) {
  switch (d.fam) {
    case Family::H: return -x;
    case Family::L: return -x + to_double(d.g) / x;
    case Family::J:
      return to_double(d.g) / std::tan(x) - to_double(d.h) * std::tan(x);
    default: throw regime_error("prepotential is an ordinary-regime quantity");
  }
}

inline double prepotential_wpp(const SystemDescriptor& d, double x) {
  switch (d.fam) {
    case Family::H: return -1.0;
    case Family::L: return -1.0 - to_double(d.g) / (x * x);
    case Family::J: {
      double s = std::sin(x), c = std::cos(x);
      return -to_double(d.g) / (s * s) - to_double(d.h) / (c * c);
    }
    default: throw regime_error("prepotential is an ordinary-regime quantity");
  }
}

/* Seed potential U = w'^2 + w''. */
inline double potential_U(const SystemDescriptor& d, double x) {
  double g = to_double(d.g), h = to_double(d.h);
  switch (d.fam) {
    case Family::H: return x * x - 1.0;
    case Family::L: return x * x + g * (g - 1.0) / (x * x) - 2.0 * g - 1.0;
    case Family::J: {
      double s = std::sin(x), c = std::cos(x);
      return g * (g - 1.0) / (s * s) + h * (h - 1.0) / (c * c) - (g + h) * (g + h);
    }
    default: throw regime_error("potential_U is an ordinary-regime quantity");
  }
}

/* Discrete-regime potential function V(x). */
inline Cplx potential_V(const SystemDescriptor& d, const Cplx& x) {
  const Cplx ix = Cplx(0, 1) * x;
  switch (d.fam) {
    case Family::MP:
      return d.a + ix;
    case Family::CH:
      return (d.ai[0] + ix) * (d.ai[1] + ix);
    case Family::W: {
      Cplx den = (2.0 * ix) * (2.0 * ix + 1.0);
      if (std::abs(den) < 1e-14) throw pole_error("V has a pole at this point");
      Cplx num(1, 0);
      for (int j = 0; j < 4; ++j) num *= d.ai[j] + ix;
      return num / den;
    }
    case Family::AW: {
      Cplx e = std::exp(ix), e2 = e * e;
      Cplx den = (Cplx(1, 0) - e2) * (Cplx(1, 0) - d.q * e2);
      if (std::abs(den) < 1e-14) throw pole_error("V has a pole at this point");
      Cplx num(1, 0);
      for (int j = 0; j < 4; ++j) num *= Cplx(1, 0) - d.ai[j] * e;
      return num / den;
    }
    default: throw regime_error("potential_V is a discrete-regime quantity");
  }
}

/* V*(x) = conj(V(conj x)). */
inline Cplx potential_Vstar(const SystemDescriptor& d, const Cplx& x) {
  return std::conj(potential_V(d, std::conj(x)));
}

/* Discrete-regime weight phi_0(x)^2 as a single-valued meromorphic function.
 * Every gamma factor is exponentiated on its own, so branch ambiguities of the
 * individual log-gammas cancel pointwise. */
inline Cplx weight_fn(const SystemDescriptor& d, const Cplx& x) {
  const Cplx ix = Cplx(0, 1) * x;
  switch (d.fam) {
    case Family::MP:
      return gamma_fn(d.a + ix) * gamma_fn(d.a - ix);
    case Family::CH:
      return gamma_fn(d.ai[0] + ix) * gamma_fn(d.ai[1] + ix) *
             gamma_fn(std::conj(d.ai[0]) - ix) * gamma_fn(std::conj(d.ai[1]) - ix);
    case Family::W: {
      Cplx w(1, 0);
      for (int j = 0; j < 4; ++j) w *= gamma_fn(d.ai[j] + ix) * gamma_fn(d.ai[j] - ix);
      return w / (gamma_fn(2.0 * ix) * gamma_fn(-2.0 * ix));
    }
    case Family::AW: {
      Cplx w = q_pochhammer_inf(std::exp(2.0 * ix), d.q) *
               q_pochhammer_inf(std::exp(-2.0 * ix), d.q);
      for (int j = 0; j < 4; ++j)
        w /= q_pochhammer_inf(d.ai[j] * std::exp(ix), d.q) *
             q_pochhammer_inf(d.ai[j] * std::exp(-ix), d.q);
      return w;
    }
    default: throw regime_error("weight_fn is a discrete-regime quantity");
  }
}

/* Ground-state function phi_0(x), complex-capable.  On the real range it is
 * the positive weight-root; off axis the discrete families continue that root
 * vertically, which keeps phi_0 coherent along the pure imaginary shifts the
 * Casoratian constructions use. */
inline Cplx phi0(const SystemDescriptor& d, const Cplx& x) {
  switch (d.fam) {
    case Family::H:
      return std::exp(-0.5 * x * x);
    case Family::L:
      return std::exp(-0.5 * x * x + to_double(d.g) * std::log(x));
    case Family::J:
      return std::exp(to_double(d.g) * std::log(std::sin(x)) + to_double(d.h) * std::log(std::cos(x)));
    default: {
      if (x.imag() == 0.0) return std::sqrt(weight_fn(d, x));
      const int steps = 96 + static_cast<int>(64.0 * std::abs(x.imag()));
      return analytic_sqrt([&](const Cplx& w) { return weight_fn(d, w); },
                           Cplx(x.real(), 0.0), x, steps);
    }
  }
}

}  // namespace kadel
