#pragma once

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "kadel/scalars.hpp"

namespace kadel {

template <class To, class From>
inline To scalar_convert(const From& v) {
  return static_cast<To>(v);
}
template <>
inline double scalar_convert<double, Rational>(const Rational& v) {
  return to_double(v);
}
template <>
inline Cplx scalar_convert<Cplx, Rational>(const Rational& v) {
  return to_cplx(v);
}
template <>
inline Cplx scalar_convert<Cplx, double>(const double& v) {
  return Cplx(v, 0.0);
}

/* Dense univariate polynomial, coefficients constant-first.
 * Invariant: coeff.size() >= 1; the zero polynomial is stored as [0]. */
template <class S>
struct Poly {
  VecX<S> coeff;

  Poly() : coeff(1) { coeff[0] = S(0); }
  explicit Poly(VecX<S> c) : coeff(std::move(c)) {
    if (coeff.size() == 0) {
      coeff.resize(1);
      coeff[0] = S(0);
    }
  }
  Poly(std::initializer_list<S> c) {
    coeff.resize(static_cast<Eigen::Index>(std::max<std::size_t>(c.size(), 1)));
    coeff[0] = S(0);
    Eigen::Index i = 0;
    for (const auto& v : c) coeff[i++] = v;
  }

  Eigen::Index degree() const { return coeff.size() - 1; }
  const S& operator[](Eigen::Index i) const { return coeff[i]; }
  S& operator[](Eigen::Index i) { return coeff[i]; }
};

template <class S>
inline Poly<S> poly_trim(const Poly<S>& p) {
  Eigen::Index d = p.coeff.size() - 1;
  while (d > 0 && is_zero(p.coeff[d])) --d;
  Poly<S> out;
  out.coeff.resize(d + 1);
  for (Eigen::Index i = 0; i <= d; ++i) out.coeff[i] = p.coeff[i];
  return out;
}

template <class S>
inline bool poly_is_zero(const Poly<S>& p) {
  for (Eigen::Index i = 0; i < p.coeff.size(); ++i)
    if (!is_zero(p.coeff[i])) return false;
  return true;
}

template <class S>
inline Poly<S> poly_monomial(Eigen::Index k, const S& c = S(1)) {
  Poly<S> p;
  p.coeff.resize(k + 1);
  for (Eigen::Index i = 0; i <= k; ++i) p.coeff[i] = S(0);
  p.coeff[k] = c;
  return p;
}

template <class S>
inline Poly<S> poly_add(const Poly<S>& a, const Poly<S>& b) {
  Poly<S> out;
  out.coeff.resize(std::max(a.coeff.size(), b.coeff.size()));
  for (Eigen::Index i = 0; i < out.coeff.size(); ++i) {
    S v = S(0);
    if (i < a.coeff.size()) v = v + a.coeff[i];
    if (i < b.coeff.size()) v = v + b.coeff[i];
    out.coeff[i] = v;
  }
  return poly_trim(out);
}

template <class S>
inline Poly<S> poly_scale(const Poly<S>& a, const S& c) {
  Poly<S> out = a;
  for (Eigen::Index i = 0; i < out.coeff.size(); ++i) out.coeff[i] = out.coeff[i] * c;
  return poly_trim(out);
}

template <class S>
inline Poly<S> poly_sub(const Poly<S>& a, const Poly<S>& b) {
  return poly_add(a, poly_scale(b, S(-1)));
}

template <class S>
inline Poly<S> poly_mul(const Poly<S>& a, const Poly<S>& b) {
  if (poly_is_zero(a) || poly_is_zero(b)) return Poly<S>{};
  Poly<S> out;
  out.coeff.resize(a.coeff.size() + b.coeff.size() - 1);
  for (Eigen::Index i = 0; i < out.coeff.size(); ++i) out.coeff[i] = S(0);
  for (Eigen::Index i = 0; i < a.coeff.size(); ++i)
    for (Eigen::Index j = 0; j < b.coeff.size(); ++j)
      out.coeff[i + j] = out.coeff[i + j] + a.coeff[i] * b.coeff[j];
  return out;
}

template <class S>
inline Poly<S> poly_pow(const Poly<S>& a, Eigen::Index n) {
  Poly<S> out{S(1)};
  for (Eigen::Index k = 0; k < n; ++k) out = poly_mul(out, a);
  return out;
}

template <class S>
inline Poly<S> poly_derivative(const Poly<S>& a) {
  if (a.coeff.size() <= 1) return Poly<S>{};
  Poly<S> out;
  out.coeff.resize(a.coeff.size() - 1);
  for (Eigen::Index i = 1; i < a.coeff.size(); ++i) out.coeff[i - 1] = a.coeff[i] * S(static_cast<int>(i));
  return poly_trim(out);
}

/* p(a*t + b), exact in the coefficient field. */
template <class S>
inline Poly<S> poly_compose_linear(const Poly<S>& p, const S& a, const S& b) {
  Poly<S> lin{b, a};
  Poly<S> out{p.coeff[p.coeff.size() - 1]};
  for (Eigen::Index i = p.coeff.size() - 2; i >= 0; --i) {
    out = poly_mul(out, lin);
    out = poly_add(out, Poly<S>{p.coeff[i]});
  }
  return out;
}

template <class S>
inline Poly<S> poly_compose(const Poly<S>& p, const Poly<S>& q) {
  Poly<S> out{p.coeff[p.coeff.size() - 1]};
  for (Eigen::Index i = p.coeff.size() - 2; i >= 0; --i) {
    out = poly_mul(out, q);
    out = poly_add(out, Poly<S>{p.coeff[i]});
  }
  return out;
}

/* Horner evaluation; the argument type drives the result type. */
template <class X, class S>
inline X poly_eval(const Poly<S>& p, const X& x) {
  X acc = scalar_convert<X>(p.coeff[p.coeff.size() - 1]);
  for (Eigen::Index i = p.coeff.size() - 2; i >= 0; --i)
    acc = acc * x + scalar_convert<X>(p.coeff[i]);
  return acc;
}

template <class To, class S>
inline Poly<To> poly_cast(const Poly<S>& p) {
  Poly<To> out;
  out.coeff.resize(p.coeff.size());
  for (Eigen::Index i = 0; i < p.coeff.size(); ++i) out.coeff[i] = scalar_convert<To>(p.coeff[i]);
  return out;
}

template <class S>
inline std::pair<Poly<S>, Poly<S>> poly_divmod(const Poly<S>& a, const Poly<S>& b) {
  Poly<S> bt = poly_trim(b);
  if (poly_is_zero(bt)) throw parameter_error("polynomial division by zero");
  Poly<S> rem = poly_trim(a);
  Eigen::Index db = bt.degree();
  if (rem.degree() < db) return {Poly<S>{}, rem};
  Poly<S> quot;
  quot.coeff.resize(rem.degree() - db + 1);
  for (Eigen::Index i = 0; i < quot.coeff.size(); ++i) quot.coeff[i] = S(0);
  S lead = bt.coeff[db];
  for (Eigen::Index k = rem.degree(); k >= db; --k) {
    if (is_zero(rem.coeff[k])) continue;
    S q = rem.coeff[k] / lead;
    quot.coeff[k - db] = q;
    for (Eigen::Index j = 0; j <= db; ++j) rem.coeff[k - db + j] = rem.coeff[k - db + j] - q * bt.coeff[j];
  }
  return {poly_trim(quot), poly_trim(rem)};
}

template <class S>
inline Poly<S> poly_divide_exact(const Poly<S>& a, const Poly<S>& b) {
  auto [q, r] = poly_divmod(a, b);
  if (!poly_is_zero(r)) throw extraction_error("polynomial division left a nonzero remainder");
  return q;
}

template <class S>
inline bool poly_equal(const Poly<S>& a, const Poly<S>& b) {
  return poly_is_zero(poly_sub(a, b));
}

inline double poly_max_abs(const Poly<Cplx>& p) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < p.coeff.size(); ++i) m = std::max(m, std::abs(p.coeff[i]));
  return m;
}

inline double poly_max_abs(const Poly<double>& p) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < p.coeff.size(); ++i) m = std::max(m, std::abs(p.coeff[i]));
  return m;
}

/* Coefficient-wise distance, absolute; used by tests comparing two routes. */
inline double poly_dist(const Poly<Cplx>& a, const Poly<Cplx>& b) {
  Poly<Cplx> d = poly_sub(a, b);
  return poly_max_abs(d);
}

template <class S>
inline std::string poly_to_string(const Poly<S>& p, const std::string& var = "t") {
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index i = p.coeff.size() - 1; i >= 0; --i) {
    if (is_zero(p.coeff[i]) && !(first && i == 0)) continue;
    if (!first) os << " + ";
    os << "(" << p.coeff[i] << ")";
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

/* Complex conjugate of coefficients: q(t) = conj(p(conj t)). */
inline Poly<Cplx> poly_conj(const Poly<Cplx>& p) {
  Poly<Cplx> out = p;
  for (Eigen::Index i = 0; i < out.coeff.size(); ++i) out.coeff[i] = std::conj(out.coeff[i]);
  return out;
}

}  // namespace kadel
