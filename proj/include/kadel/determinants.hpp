#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "kadel/poly.hpp"

namespace kadel {

/* Determinant of a scalar matrix.  Exact scalars go through fraction-free
 * Bareiss elimination written as plain loops; floating scalars use Eigen's
 * partially pivoted LU. */
template <class S>
inline S det_scalar(const MatX<S>& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw parameter_error("determinant of a non-square matrix");
  if (n == 0) return S(1);
  if constexpr (scalar_traits<S>::is_exact) {
    MatX<S> a = m;
    S prev = S(1);
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (is_zero(a(k, k))) {
        Eigen::Index r = k + 1;
        while (r < n && is_zero(a(r, k))) ++r;
        if (r == n) return S(0);
        for (Eigen::Index j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
        sign = -sign;
      }
      for (Eigen::Index i = k + 1; i < n; ++i)
        for (Eigen::Index j = k + 1; j < n; ++j)
          a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      prev = a(k, k);
    }
    S det = a(n - 1, n - 1);
    return sign < 0 ? S(-det) : det;
  } else {
    return Eigen::PartialPivLU<MatX<S>>(m).determinant();
  }
}

/* Determinant of a matrix of polynomials, division-free: Laplace expansion
 * organised as a subset DP over columns.  Sizes here are small (n <= 8). */
template <class S>
inline Poly<S> det_poly(const std::vector<std::vector<Poly<S>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Poly<S>{S(1)};
  for (const auto& row : m)
    if (row.size() != n) throw parameter_error("determinant of a non-square matrix");
  if (n > 20) throw parameter_error("polynomial determinant size out of range");
  std::vector<Poly<S>> dp(std::size_t(1) << n);
  std::vector<bool> live(std::size_t(1) << n, false);
  dp[0] = Poly<S>{S(1)};
  live[0] = true;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<Poly<S>> nxt(dp.size());
    std::vector<bool> nlive(dp.size(), false);
    for (std::size_t mask = 0; mask < dp.size(); ++mask) {
      if (!live[mask] || std::size_t(__builtin_popcountll(mask)) != r) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (mask & (std::size_t(1) << c)) continue;
        if (poly_is_zero(m[r][c])) continue;
        int inv = __builtin_popcountll(mask >> (c + 1));
        Poly<S> term = poly_mul(dp[mask], m[r][c]);
        if (inv & 1) term = poly_scale(term, S(-1));
        std::size_t nm = mask | (std::size_t(1) << c);
        nxt[nm] = nlive[nm] ? poly_add(nxt[nm], term) : term;
        nlive[nm] = true;
      }
    }
    dp.swap(nxt);
    live.swap(nlive);
  }
  return live[dp.size() - 1] ? dp[dp.size() - 1] : Poly<S>{};
}

/* Wronskian of polynomials in their own variable; the empty Wronskian is 1. */
template <class S>
inline Poly<S> wronskian_poly(const std::vector<Poly<S>>& f) {
  const std::size_t n = f.size();
  if (n == 0) return Poly<S>{S(1)};
  std::vector<std::vector<Poly<S>>> m(n, std::vector<Poly<S>>(n));
  for (std::size_t k = 0; k < n; ++k) {
    Poly<S> der = f[k];
    for (std::size_t j = 0; j < n; ++j) {
      m[j][k] = der;
      der = poly_derivative(der);
    }
  }
  return det_poly(m);
}

/* Wronskian value from Taylor data: series[k][j] = f_k^{(j)}(x0) / j!. */
template <class CT>
inline CT wronskian_from_series(const std::vector<Poly<CT>>& series) {
  const Eigen::Index n = static_cast<Eigen::Index>(series.size());
  if (n == 0) return CT(1);
  MatX<CT> m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    CT fact(1);
    for (Eigen::Index j = 0; j < n; ++j) {
      m(j, k) = (j < series[k].coeff.size()) ? series[k].coeff[j] * fact : CT(0);
      fact *= CT(static_cast<double>(j + 1));
    }
  }
  return det_scalar(m);
}

/* Casoratian W_gamma[f_1 .. f_n](x) = i^{n(n-1)/2} det f_k(x + i(n+1-2j)gamma/2).
 * Templated on the complex type so tests can run it in extended precision. */
template <class CT>
inline CT casoratian(const std::vector<std::function<CT(CT)>>& f, CT x,
                     typename CT::value_type gamma) {
  using RT = typename CT::value_type;
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  if (n == 0) return CT(1);
  MatX<CT> m(n, n);
  for (Eigen::Index j = 1; j <= n; ++j) {
    CT arg = x + CT(0, RT(n + 1 - 2 * j) * gamma / RT(2));
    for (Eigen::Index k = 0; k < n; ++k) m(j - 1, k) = f[k](arg);
  }
  CT det = det_scalar(m);
  // i^{n(n-1)/2}
  switch ((n * (n - 1) / 2) % 4) {
    case 0: return det;
    case 1: return CT(0, 1) * det;
    case 2: return -det;
    default: return CT(0, -1) * det;
  }
}

/* gamma^{-n(n-1)/2} W_gamma, the combination that degenerates to a Wronskian. */
template <class CT>
inline CT casoratian_scaled(const std::vector<std::function<CT(CT)>>& f, CT x,
                            typename CT::value_type gamma) {
  using RT = typename CT::value_type;
  if (gamma == RT(0)) throw parameter_error("casoratian scaling requires a nonzero shift unit");
  const int n = static_cast<int>(f.size());
  CT w = casoratian(f, x, gamma);
  RT scale(1);
  for (int k = 0; k < n * (n - 1) / 2; ++k) scale /= gamma;
  return w * CT(scale, RT(0));
}

/* Truncated Taylor-series arithmetic (coefficients of (x - x0)^j, j <= ord).
 * Used to differentiate analytic products exactly in structure. */
template <class CT>
inline Poly<CT> series_trunc(const Poly<CT>& a, int ord) {
  Poly<CT> out;
  out.coeff.resize(ord + 1);
  for (int j = 0; j <= ord; ++j) out.coeff[j] = (j < a.coeff.size()) ? a.coeff[j] : CT(0);
  return out;
}

template <class CT>
inline Poly<CT> series_mul(const Poly<CT>& a, const Poly<CT>& b, int ord) {
  Poly<CT> out;
  out.coeff.resize(ord + 1);
  for (int j = 0; j <= ord; ++j) out.coeff[j] = CT(0);
  for (int i = 0; i < a.coeff.size() && i <= ord; ++i)
    for (int j = 0; j < b.coeff.size() && i + j <= ord; ++j)
      out.coeff[i + j] += a.coeff[i] * b.coeff[j];
  return out;
}

template <class CT>
inline Poly<CT> series_div(const Poly<CT>& a, const Poly<CT>& b, int ord) {
  if (b.coeff.size() == 0 || b.coeff[0] == CT(0))
    throw pole_error("series division by a series vanishing at the base point");
  Poly<CT> out;
  out.coeff.resize(ord + 1);
  for (int j = 0; j <= ord; ++j) {
    CT acc = (j < a.coeff.size()) ? a.coeff[j] : CT(0);
    for (int i = 1; i <= j; ++i)
      if (i < b.coeff.size()) acc -= b.coeff[i] * out.coeff[j - i];
    out.coeff[j] = acc / b.coeff[0];
  }
  return out;
}

template <class CT>
inline Poly<CT> series_exp(const Poly<CT>& a, int ord) {
  // e' = a' e, solved coefficient by coefficient
  Poly<CT> out;
  out.coeff.resize(ord + 1);
  out.coeff[0] = std::exp(a.coeff[0]);
  for (int j = 1; j <= ord; ++j) {
    CT acc(0);
    for (int i = 1; i <= j; ++i)
      if (i < a.coeff.size()) acc += CT(static_cast<double>(i)) * a.coeff[i] * out.coeff[j - i];
    out.coeff[j] = acc / CT(static_cast<double>(j));
  }
  return out;
}

template <class CT>
inline Poly<CT> series_log(const Poly<CT>& a, int ord) {
  // l' = a'/a
  if (a.coeff[0] == CT(0)) throw pole_error("series log at a zero of the argument");
  Poly<CT> out;
  out.coeff.resize(ord + 1);
  out.coeff[0] = std::log(a.coeff[0]);
  for (int j = 1; j <= ord; ++j) {
    CT acc = (j < a.coeff.size()) ? CT(static_cast<double>(j)) * a.coeff[j] : CT(0);
    for (int i = 1; i < j; ++i)
      if (j - i < a.coeff.size()) acc -= CT(static_cast<double>(i)) * out.coeff[i] * a.coeff[j - i];
    out.coeff[j] = acc / (CT(static_cast<double>(j)) * a.coeff[0]);
  }
  return out;
}

inline Poly<Cplx> series_sin(const Cplx& x0, int ord) {
  Poly<Cplx> out;
  out.coeff.resize(ord + 1);
  Cplx s = std::sin(x0), c = std::cos(x0);
  double fact = 1.0;
  for (int j = 0; j <= ord; ++j) {
    if (j > 0) fact *= j;
    Cplx d = (j % 4 == 0) ? s : (j % 4 == 1) ? c : (j % 4 == 2) ? -s : -c;
    out.coeff[j] = d / fact;
  }
  return out;
}

inline Poly<Cplx> series_cos(const Cplx& x0, int ord) {
  Poly<Cplx> out;
  out.coeff.resize(ord + 1);
  Cplx s = std::sin(x0), c = std::cos(x0);
  double fact = 1.0;
  for (int j = 0; j <= ord; ++j) {
    if (j > 0) fact *= j;
    Cplx d = (j % 4 == 0) ? c : (j % 4 == 1) ? -s : (j % 4 == 2) ? -c : s;
    out.coeff[j] = d / fact;
  }
  return out;
}

inline Poly<Cplx> series_identity(const Cplx& x0, int ord) {
  Poly<Cplx> out;
  out.coeff.resize(ord + 1);
  for (int j = 0; j <= ord; ++j) out.coeff[j] = Cplx(0, 0);
  out.coeff[0] = x0;
  if (ord >= 1) out.coeff[1] = Cplx(1, 0);
  return out;
}

/* Recover polynomial coefficients from point values G(eta), eta in [lo, hi].
 * Samples at Chebyshev nodes, solves in the affinely scaled basis, converts
 * back to eta-monomials, then validates at 2(deg+1) fresh nodes. */
inline Poly<Cplx> extract_polynomial(const std::function<Cplx(double)>& value_at_eta,
                                     double lo, double hi, int degree_bound,
                                     double rel_tol = 1e-8) {
  if (!(hi > lo)) throw parameter_error("empty sampling window");
  const int n = degree_bound + 1;
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  const double pi = 3.14159265358979323846;
  VecX<Cplx> y(n);
  MatX<Cplx> v(n, n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (2.0 * i + 1.0) / (2.0 * n));
    y[i] = value_at_eta(c + r * t);
    Cplx p(1, 0);
    for (int j = 0; j < n; ++j) {
      v(i, j) = p;
      p *= t;
    }
  }
  VecX<Cplx> a = Eigen::ColPivHouseholderQR<MatX<Cplx>>(v).solve(y);
  Poly<Cplx> in_t{};
  in_t.coeff = a;
  in_t = poly_trim(in_t);
  Poly<Cplx> p_eta = poly_compose_linear(in_t, Cplx(1.0 / r, 0), Cplx(-c / r, 0));

  const int nv = 2 * n;
  double scale = 0.0, worst = 0.0;
  std::vector<Cplx> vals(nv), fits(nv);
  for (int i = 0; i < nv; ++i) {
    double t = std::cos(pi * (2.0 * i + 1.0) / (2.0 * nv));
    double e = c + r * t;
    vals[i] = value_at_eta(e);
    fits[i] = poly_eval(p_eta, Cplx(e, 0));
    scale = std::max(scale, std::abs(vals[i]));
  }
  scale = std::max(scale, 1e-300);
  for (int i = 0; i < nv; ++i) worst = std::max(worst, std::abs(vals[i] - fits[i]));
  if (worst > rel_tol * scale)
    throw extraction_error("sampled values are not a polynomial of the expected degree (residual " +
                           std::to_string(worst / scale) + ")");
  return p_eta;
}

/* Same, demanding real coefficients. */
inline Poly<double> extract_polynomial_real(const std::function<Cplx(double)>& value_at_eta,
                                            double lo, double hi, int degree_bound,
                                            double rel_tol = 1e-8) {
  Poly<Cplx> p = extract_polynomial(value_at_eta, lo, hi, degree_bound, rel_tol);
  double scale = std::max(poly_max_abs(p), 1e-300);
  Poly<double> out;
  out.coeff.resize(p.coeff.size());
  for (Eigen::Index i = 0; i < p.coeff.size(); ++i) {
    if (std::abs(p.coeff[i].imag()) > 1e-7 * scale)
      throw extraction_error("extracted coefficients are unexpectedly complex");
    out.coeff[i] = p.coeff[i].real();
  }
  return poly_trim(out);
}

}  // namespace kadel
