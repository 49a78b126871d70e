#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kadel/catalog.hpp"
#include "test_support.hpp"

using namespace kadel;
using kadel_test::kAll;
using kadel_test::kDiscrete;
using kadel_test::kOrdinary;
using kadel_test::mk;
using kadel_test::mk_J;
using kadel_test::mk_L;
using kadel_test::range_points;

namespace {

// Independent constructions of the seed polynomials: classical three-term
// recurrences for H/L/J/MP, terminating hypergeometric sums for CH/W/AW.

Poly<Rational> hermite_rec(long n) {
  Poly<Rational> pm1{Rational(1)}, p{Rational(0), Rational(2)};
  if (n == 0) return pm1;
  for (long k = 1; k < n; ++k) {
    Poly<Rational> next = poly_sub(poly_mul(Poly<Rational>{Rational(0), Rational(2)}, p),
                                   poly_scale(pm1, Rational(2 * k)));
    pm1 = p;
    p = next;
  }
  return p;
}

Poly<Rational> laguerre_rec(const Rational& alpha, long n) {
  Poly<Rational> pm1{Rational(1)};
  Poly<Rational> p{alpha + 1, Rational(-1)};
  if (n == 0) return pm1;
  for (long k = 1; k < n; ++k) {
    Poly<Rational> t = poly_mul(Poly<Rational>{Rational(2 * k + 1) + alpha, Rational(-1)}, p);
    Poly<Rational> next = poly_scale(poly_sub(t, poly_scale(pm1, Rational(Rational(k) + alpha))),
                                     Rational(1) / Rational(k + 1));
    pm1 = p;
    p = next;
  }
  return p;
}

Poly<Rational> jacobi_rec(const Rational& a, const Rational& b, long n) {
  Poly<Rational> pm1{Rational(1)};
  Poly<Rational> p{Rational(a - b) / 2, Rational(a + b + 2) / 2};
  if (n == 0) return pm1;
  for (long k = 2; k <= n; ++k) {
    const Rational s = a + b;
    const Rational t0 = Rational(2 * k) + s;
    const Rational c1 = Rational(2 * k) * (Rational(k) + s) * (t0 - 2);
    const Rational c2 = (t0 - 1) * Rational(a * a - b * b);
    const Rational c3 = (t0 - 1) * t0 * (t0 - 2);
    const Rational c4 = Rational(2) * (Rational(k - 1) + a) * (Rational(k - 1) + b) * t0;
    Poly<Rational> t = poly_mul(Poly<Rational>{c2, c3}, p);
    Poly<Rational> next = poly_scale(poly_sub(t, poly_scale(pm1, c4)), Rational(1) / c1);
    pm1 = p;
    p = next;
  }
  return p;
}

// Exact complex arithmetic over rationals, so the terminating series below
// carry no rounding of their own.
struct CRat {
  Rational re{0}, im{0};
  CRat() = default;
  CRat(Rational r) : re(std::move(r)) {}
  CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
};
CRat operator+(const CRat& a, const CRat& b) {
  return {Rational(a.re + b.re), Rational(a.im + b.im)};
}
CRat operator-(const CRat& a, const CRat& b) {
  return {Rational(a.re - b.re), Rational(a.im - b.im)};
}
CRat operator*(const CRat& a, const CRat& b) {
  return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
}
CRat operator/(const CRat& a, const CRat& b) {
  const Rational n = b.re * b.re + b.im * b.im;
  return {Rational((a.re * b.re + a.im * b.im) / n), Rational((a.im * b.re - a.re * b.im) / n)};
}
Cplx to_cplx(const CRat& z) { return Cplx(to_double(z.re), to_double(z.im)); }
CRat crat_of(const Cplx& z) { return {Rational(z.real()), Rational(z.imag())}; }

CRat poch(const CRat& z, long n) {
  CRat out{Rational(1)};
  for (long j = 0; j < n; ++j) out = out * (z + CRat{Rational(j)});
  return out;
}

CRat qpoch(const CRat& a, const Rational& q, long n) {
  CRat out{Rational(1)};
  Rational qj(1);
  for (long j = 0; j < n; ++j) {
    out = out * (CRat{Rational(1)} - a * CRat{qj});
    qj *= q;
  }
  return out;
}

Rational rat_pow(const Rational& q, long m) {
  Rational out(1);
  for (long j = 0; j < std::abs(m); ++j) out *= q;
  if (m < 0) out = Rational(1) / out;
  return out;
}

Poly<Rational> mp_rec(const Rational& a, long n) {
  Poly<Rational> pm1{Rational(1)}, p{Rational(0), Rational(2)};
  if (n == 0) return pm1;
  for (long k = 1; k < n; ++k) {
    Poly<Rational> t = poly_mul(Poly<Rational>{Rational(0), Rational(2)}, p);
    Poly<Rational> next = poly_scale(poly_sub(t, poly_scale(pm1, Rational(2 * a + (k - 1)))),
                                     Rational(1) / Rational(k + 1));
    pm1 = p;
    p = next;
  }
  return p;
}

Cplx ch_series(const SystemDescriptor& d, long n, const Rational& eta) {
  const CRat a1 = crat_of(d.ai[0]), a2 = crat_of(d.ai[1]);
  const CRat a3{a1.re, Rational(-a1.im)}, a4{a2.re, Rational(-a2.im)};
  const CRat s12 = a1 + a3, s13 = a1 + a4;
  const CRat b1m1 = s12 + a2 + a4 - CRat{Rational(1)};
  CRat in{Rational(1)};
  for (long j = 0; j < n; ++j) in = in * CRat{Rational(0), Rational(1)};
  CRat pref = in * poch(s12, n) * poch(s13, n) / CRat{factorial_rat(n)};
  CRat sum{Rational(0)};
  for (long k = 0; k <= n; ++k) {
    CRat term = poch(CRat{Rational(-n)}, k) * poch(b1m1 + CRat{Rational(n)}, k) /
                (poch(s12, k) * poch(s13, k) * CRat{factorial_rat(k)});
    for (long j = 0; j < k; ++j) term = term * (a1 + CRat{Rational(j), eta});
    sum = sum + term;
  }
  return to_cplx(pref * sum);
}

Cplx wilson_series(const SystemDescriptor& d, long n, const Rational& eta) {
  const CRat a = crat_of(d.ai[0]);
  const CRat s1 = a + crat_of(d.ai[1]), s2 = a + crat_of(d.ai[2]), s3 = a + crat_of(d.ai[3]);
  const CRat b1m1 = crat_of(d.ai[0]) + crat_of(d.ai[1]) + crat_of(d.ai[2]) +
                    crat_of(d.ai[3]) - CRat{Rational(1)};
  CRat pref = poch(s1, n) * poch(s2, n) * poch(s3, n);
  CRat sum{Rational(0)};
  for (long k = 0; k <= n; ++k) {
    CRat term = poch(CRat{Rational(-n)}, k) * poch(b1m1 + CRat{Rational(n)}, k) /
                (poch(s1, k) * poch(s2, k) * poch(s3, k) * CRat{factorial_rat(k)});
    for (long j = 0; j < k; ++j) {
      const CRat aj = a + CRat{Rational(j)};
      term = term * (aj * aj + CRat{eta});
    }
    sum = sum + term;
  }
  return to_cplx(pref * sum);
}

Cplx aw_series(const SystemDescriptor& d, long n, const Rational& eta) {
  const Rational q(d.q);
  const CRat a = crat_of(d.ai[0]);
  const CRat b4 = a * crat_of(d.ai[1]) * crat_of(d.ai[2]) * crat_of(d.ai[3]);
  const CRat ab = a * crat_of(d.ai[1]), ac = a * crat_of(d.ai[2]), ad = a * crat_of(d.ai[3]);
  CRat an{Rational(1)};
  for (long j = 0; j < n; ++j) an = an * a;
  CRat pref = qpoch(ab, q, n) * qpoch(ac, q, n) * qpoch(ad, q, n) / an;
  CRat sum{Rational(0)};
  for (long k = 0; k <= n; ++k) {
    CRat term = qpoch(CRat{rat_pow(q, -n)}, q, k) * qpoch(b4 * CRat{rat_pow(q, n - 1)}, q, k) /
                (qpoch(ab, q, k) * qpoch(ac, q, k) * qpoch(ad, q, k) *
                 qpoch(CRat{q}, q, k));
    term = term * CRat{rat_pow(q, k)};
    for (long j = 0; j < k; ++j) {
      const CRat aq = a * CRat{rat_pow(q, j)};
      term = term * (CRat{Rational(1)} - CRat{Rational(2)} * aq * CRat{eta} + aq * aq);
    }
    sum = sum + term;
  }
  return to_cplx(pref * sum);
}

double eval_condition(const Poly<double>& p, double e) {
  double s = 0.0, pw = 1.0;
  for (Eigen::Index k = 0; k < p.coeff.size(); ++k) {
    s += std::abs(p.coeff[k]) * pw;
    pw *= std::abs(e);
  }
  return s;
}

}  // namespace

TEST_CASE("sinusoidal coordinate") {
  CHECK(std::abs(eta_of(mk(Family::J), Cplx(3.14159265358979323846 / 4, 0))) < 1e-15);
  CHECK(eta_of(mk(Family::AW), Cplx(0, 0)) == Cplx(1, 0));
  CHECK(eta_of(mk(Family::W), Cplx(3, 0)) == Cplx(9, 0));
  CHECK(eta_of(mk(Family::H), Cplx(1.2, 0.3)) == Cplx(1.2, 0.3));
}

TEST_CASE("eta shift identities match direct evaluation") {
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    const double gam = gamma_d(d);
    for (int k = 1; k <= 6; ++k) {
      const Poly<double> s = eta_sum_poly(d, k);
      const Poly<double> p = eta_prod_poly(d, k);
      for (double x : range_points(d, 6)) {
        const Cplx em = eta_of(d, Cplx(x, -0.5 * k * gam));
        const Cplx ep = eta_of(d, Cplx(x, 0.5 * k * gam));
        const double e = eta_real(d, x);
        const double scale = std::max({std::abs(em * ep), std::abs(em + ep), 1.0});
        CHECK(std::abs(em + ep - Cplx(poly_eval(s, e), 0)) <= 1e-12 * scale);
        CHECK(std::abs(em * ep - Cplx(poly_eval(p, e), 0)) <= 1e-12 * scale);
      }
    }
  }
  // two closed-form spot values
  {
    const SystemDescriptor mp = mk(Family::MP);
    const Cplx prod = eta_of(mp, Cplx(0, -1)) * eta_of(mp, Cplx(0, 1));
    CHECK(std::abs(prod - Cplx(1, 0)) < 1e-15);
    CHECK(poly_eval(eta_prod_poly(mp, 2), 0.0) == doctest::Approx(1.0));

    const SystemDescriptor w = mk(Family::W);
    CHECK(poly_eval(eta_prod_poly(w, 2), 1.0) == doctest::Approx(4.0));
  }
}

TEST_CASE("auxiliary function varphi") {
  CHECK(varphi(mk(Family::CH), Cplx(5, 0)) == Cplx(1, 0));
  CHECK(varphi(mk(Family::MP), Cplx(-2, 1)) == Cplx(1, 0));
  CHECK(varphi(mk(Family::W), Cplx(0.5, 0)) == Cplx(1, 0));
  CHECK(std::abs(varphi(mk(Family::AW), Cplx(3.14159265358979323846 / 2, 0)) - Cplx(2, 0)) <
        1e-15);
}

TEST_CASE("seed polynomials match the classical recurrences, ordinary") {
  CHECK(poly_equal(poly_P_rat(mk(Family::H), 2),
                   Poly<Rational>{Rational(-2), Rational(0), Rational(4)}));
  CHECK(poly_equal(poly_P_rat(mk_L(Rational(1)), 1),
                   Poly<Rational>{Rational(3, 2), Rational(-1)}));
  for (long n = 0; n <= 8; ++n) {
    CHECK(poly_equal(poly_P_rat(mk(Family::H), n), hermite_rec(n)));
    const SystemDescriptor l = mk(Family::L);
    CHECK(poly_equal(poly_P_rat(l, n), laguerre_rec(l.g - Rational(1, 2), n)));
    const SystemDescriptor j = mk(Family::J);
    CHECK(poly_equal(poly_P_rat(j, n),
                     jacobi_rec(j.g - Rational(1, 2), j.h - Rational(1, 2), n)));
  }
  for (Family f : kOrdinary) {
    CHECK(poly_equal(poly_P_rat(mk(f), 0), Poly<Rational>{Rational(1)}));
    for (long n = 0; n <= 8; ++n) CHECK(poly_P_rat(mk(f), n).degree() == n);
  }
}

TEST_CASE("seed polynomials match the hypergeometric series, discrete") {
  const std::vector<double> mp_etas = {-2.3, -0.7, 0.4, 1.9};
  const std::vector<double> w_etas = {0.3, 1.1, 4.2, 8.5};
  const std::vector<double> aw_etas = {-0.85, -0.3, 0.25, 0.8};
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    const std::vector<double>& etas = (f == Family::W) ? w_etas
                                      : (f == Family::AW) ? aw_etas
                                                          : mp_etas;
    for (long n = 0; n <= 8; ++n) {
      const Poly<double> p = poly_P(d, n);
      CHECK(p.degree() == n);
      for (double e : etas) {
        const Rational er(e);
        Cplx ref;
        if (f == Family::MP)
          ref = Cplx(to_double(poly_eval(mp_rec(Rational(d.a), n), er)), 0);
        else if (f == Family::CH)
          ref = ch_series(d, n, er);
        else if (f == Family::W)
          ref = wilson_series(d, n, er);
        else
          ref = aw_series(d, n, er);
        CHECK(std::abs(ref.imag()) <= 1e-10 * std::max(std::abs(ref.real()), 1.0));
        const double scale = std::max(eval_condition(p, e), 1.0);
        CHECK(std::abs(poly_eval(p, e) - ref.real()) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("energy levels") {
  CHECK(energy(mk(Family::H), 3) == 6.0);
  CHECK(energy(mk_J(Rational(1), Rational(2)), 1) == 16.0);
  CHECK(energy(mk(Family::AW), 0) == 0.0);
  for (Family f : kAll) {
    const SystemDescriptor d = mk(f);
    CHECK(energy(d, 0) == 0.0);
    for (long n = 0; n < 12; ++n) CHECK(energy(d, n + 1) > energy(d, n));
  }
}

TEST_CASE("factorization of the energy") {
  CHECK(fn_factor_rat(mk(Family::H), 4) == Rational(8));
  CHECK(bn_factor_rat(mk(Family::H), 4) == Rational(1));
  CHECK(fn_factor_rat(mk(Family::L), 3) == Rational(-2));
  CHECK(bn_factor_rat(mk(Family::L), 3) == Rational(-6));
  {
    const SystemDescriptor d = mk(Family::AW);
    const double b4 = b4_prod(d);
    const double f1 = std::sqrt(d.q) * (1.0 / d.q - 1.0) * (1.0 - b4);
    CHECK(fn_factor(d, 1) == doctest::Approx(f1).epsilon(1e-14));
    CHECK(bn_factor(d, 1) == doctest::Approx(1.0 / std::sqrt(d.q)).epsilon(1e-14));
  }
  for (Family f : kOrdinary) {
    const SystemDescriptor d = mk(f);
    for (long n = 1; n <= 12; ++n)
      CHECK(fn_factor_rat(d, n) * bn_factor_rat(d, n) == energy_rat(d, n));
  }
  for (Family f : kAll) {
    const SystemDescriptor d = mk(f);
    for (long n = 1; n <= 12; ++n) {
      const double e = energy(d, n);
      CHECK(std::abs(fn_factor(d, n) * bn_factor(d, n) - e) <= 1e-12 * std::abs(e));
    }
  }
}

TEST_CASE("squared norms") {
  const double sqrt_pi = std::sqrt(3.14159265358979323846);
  CHECK(norm_h(mk(Family::H), 0) == doctest::Approx(sqrt_pi).epsilon(1e-14));
  CHECK(norm_h(mk(Family::H), 2) == doctest::Approx(8.0 * sqrt_pi).epsilon(1e-14));
  CHECK(norm_h(mk(Family::MP), 0) ==
        doctest::Approx(3.14159265358979323846 / 2).epsilon(1e-13));
  for (Family f : kAll)
    for (long n = 0; n <= 8; ++n) CHECK(norm_h(mk(f), n) > 0.0);
}

TEST_CASE("ground states") {
  CHECK(phi0(mk(Family::H), Cplx(0, 0)) == Cplx(1, 0));
  CHECK(std::abs(phi0(mk_L(Rational(1)), Cplx(1, 0)) - Cplx(std::exp(-0.5), 0)) < 1e-15);
  CHECK(std::abs(phi0(mk(Family::MP), Cplx(0, 0)) - Cplx(1, 0)) < 1e-13);
  for (Family f : kAll) {
    const SystemDescriptor d = mk(f);
    for (double x : range_points(d, 12)) {
      const Cplx v = phi0(d, Cplx(x, 0));
      CHECK(v.real() > 0.0);
      CHECK(std::abs(v.imag()) <= 1e-12 * v.real());
    }
  }
}

TEST_CASE("discrete potential functions") {
  SystemDescriptor mp = mk(Family::MP);
  mp.a = 2.0;
  CHECK(std::abs(potential_V(mp, Cplx(0, 0)) - Cplx(2, 0)) < 1e-15);
  CHECK(std::abs(potential_V(mk(Family::CH), Cplx(0, 0)) - Cplx(2, 0)) < 1e-15);

  const SystemDescriptor w = mk(Family::W);
  CHECK(std::abs(potential_V(w, Cplx(0, 1.0))) < 1e-13);  // a1 + ix vanishes at x = i a1
  CHECK_THROWS_AS(potential_V(w, Cplx(0, 0)), pole_error);
  CHECK_THROWS_AS(potential_V(mk(Family::AW), Cplx(0, 0)), pole_error);

  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    for (double x : range_points(d, 8)) {
      const Cplx z(x, 0.3);
      const Cplx lhs = potential_Vstar(d, z);
      const Cplx rhs = std::conj(potential_V(d, std::conj(z)));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    }
  }
}

TEST_CASE("forward and backward shifts, ordinary, exact") {
  {
    const SystemDescriptor h = mk(Family::H);
    const Poly<Rational> fh1 = forward_shift_rat(h, poly_P_rat(h, 1));
    CHECK(poly_equal(fh1, Poly<Rational>{Rational(2)}));

    const SystemDescriptor l = mk(Family::L);
    const Poly<Rational> b = backward_shift_rat(l, poly_P_rat(shifted(l, 1), 0));
    CHECK(poly_equal(b, poly_scale(poly_P_rat(l, 1), Rational(-2))));
    CHECK(bn_factor_rat(l, 1) == Rational(-2));
  }
  for (Family f : kOrdinary) {
    const SystemDescriptor d = mk(f);
    for (long n = 1; n <= 5; ++n) {
      const Poly<Rational> pn = poly_P_rat(d, n);
      const Poly<Rational> pm = poly_P_rat(shifted(d, 1), n - 1);
      CHECK(poly_equal(forward_shift_rat(d, pn), poly_scale(pm, fn_factor_rat(d, n))));
      CHECK(poly_equal(backward_shift_rat(d, pm), poly_scale(pn, bn_factor_rat(d, n))));
    }
  }
}

TEST_CASE("forward and backward shifts, discrete") {
  {
    const SystemDescriptor mp = mk(Family::MP);
    const Poly<double> f1 = forward_shift_poly(mp, poly_P(mp, 1));
    REQUIRE(f1.degree() == 0);
    CHECK(f1.coeff[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    const SystemDescriptor du = shifted(d, 1);
    for (long n = 1; n <= 6; ++n) {
      const Poly<double> pn = poly_P(d, n);
      const Poly<double> pm = poly_P(du, n - 1);
      const double rf = kadel_test::rel_poly_diff(forward_shift_poly(d, pn),
                                                  poly_scale(pm, fn_factor(d, n)));
      const double rb = kadel_test::rel_poly_diff(backward_shift_poly(d, pm),
                                                  poly_scale(pn, bn_factor(d, n)));
      CHECK(rf <= 1e-9);
      CHECK(rb <= 1e-9);
    }
  }
}

TEST_CASE("difference equation for the seed polynomials") {
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    for (long n = 0; n <= 8; ++n) {
      const Poly<double> pn = poly_P(d, n);
      for (double x : range_points(d, 20)) {
        const double scale =
            1.0 + std::abs(energy(d, n) * poly_eval(pn, eta_real(d, x)));
        CHECK(seed_difference_residual(d, pn, n, x) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("shift operators map real functions to real functions") {
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    const double gam = gamma_d(d);
    const Poly<Cplx> p{Cplx(0.3, -0.8), Cplx(1.0, 0.5), Cplx(-0.4, 0.1)};
    Poly<Cplx> ps = p;
    for (Eigen::Index k = 0; k < ps.coeff.size(); ++k) ps.coeff[k] = std::conj(ps.coeff[k]);

    auto F = [&](const Poly<Cplx>& q, Cplx x) {
      const Cplx xm = x - Cplx(0, 0.5 * gam), xp = x + Cplx(0, 0.5 * gam);
      return Cplx(0, 1) / varphi(d, x) *
             (poly_eval(q, eta_of(d, xm)) - poly_eval(q, eta_of(d, xp)));
    };
    auto B = [&](const Poly<Cplx>& q, Cplx x) {
      const Cplx xm = x - Cplx(0, 0.5 * gam), xp = x + Cplx(0, 0.5 * gam);
      return Cplx(0, -1) * (potential_V(d, x) * varphi(d, xm) * poly_eval(q, eta_of(d, xm)) -
                            potential_Vstar(d, x) * varphi(d, xp) * poly_eval(q, eta_of(d, xp)));
    };
    for (double x : range_points(d, 6)) {
      const Cplx z(x, 0.2);
      const Cplx fstar = std::conj(F(p, std::conj(z)));
      CHECK(std::abs(fstar - F(ps, z)) <= 1e-12 * std::max(std::abs(fstar), 1.0));
      const Cplx bstar = std::conj(B(p, std::conj(z)));
      CHECK(std::abs(bstar - B(ps, z)) <= 1e-12 * std::max(std::abs(bstar), 1.0));
    }
  }
}

TEST_CASE("shape invariance of the seeds") {
  for (Family f : kOrdinary) {
    const SystemDescriptor d = mk(f);
    for (double x : range_points(d, 20))
      CHECK(shape_invariance_residual_qm(d, x) <= 1e-10);
  }
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    for (double x : range_points(d, 20)) {
      const Cplx z(x, 0.1);
      CHECK(shape_invariance_residual_dqm_mult(d, z) <= 1e-9);
      CHECK(shape_invariance_residual_dqm_add(d, z) <= 1e-9);
    }
  }
}

TEST_CASE("zero mode and ground-state shift relations") {
  for (Family f : kDiscrete) {
    const SystemDescriptor d = mk(f);
    for (double x : range_points(d, 20)) {
      CHECK(zero_mode_residual(d, x) <= 1e-9);
      CHECK(phi0_shift_residual(d, Cplx(x, 0.05)) <= 1e-10);
      CHECK(potential_shift_residual(d, Cplx(x, 0.05)) <= 1e-10);
    }
  }
}

TEST_CASE("parameter validation") {
  SystemDescriptor bad = mk_L(Rational(-1));
  CHECK_THROWS_AS(validate(bad), parameter_error);

  SystemDescriptor j = mk_J(Rational(1), Rational(0));
  CHECK_THROWS_AS(validate(j), parameter_error);

  SystemDescriptor w = mk(Family::W);
  w.ai[3] = Cplx(2.5, 0.7);  // breaks conjugation closure
  CHECK_THROWS_AS(validate(w), parameter_error);

  SystemDescriptor aw = mk(Family::AW);
  aw.q = 1.5;
  CHECK_THROWS_AS(validate(aw), parameter_error);

  SystemDescriptor aw2 = mk(Family::AW);
  aw2.ai[0] = Cplx(1.2, 0);
  CHECK_THROWS_AS(validate(aw2), parameter_error);

  CHECK_THROWS_AS(energy_rat(mk(Family::MP), 1), regime_error);
  CHECK_THROWS_AS(varphi(mk(Family::H), Cplx(0, 0)), regime_error);
}
