#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kadel/krein_adler.hpp"
#include "test_support.hpp"

using namespace kadel;
using kadel_test::kDiscrete;
using kadel_test::mk;
using kadel_test::mk_L;
using kadel_test::range_points;

namespace {

// Brute force over the defining product condition: prod_j (m - d_j) >= 0 for
// every non-negative integer m.  The product can only change sign below
// max(D) + 1, so the scan is finite.
bool admissible_brute(const std::vector<long>& lv) {
  if (lv.empty()) return true;
  const long top = *std::max_element(lv.begin(), lv.end());
  for (long m = 0; m <= top + 2; ++m) {
    long sign = 1;
    bool zero = false;
    for (long d : lv) {
      if (m == d) zero = true;
      if (m < d) sign = -sign;
    }
    if (!zero && sign < 0) return false;
  }
  return true;
}

long witness_brute(const std::vector<long>& lv) {
  if (lv.empty()) return -1;
  const long top = *std::max_element(lv.begin(), lv.end());
  for (long m = 0; m <= top + 2; ++m) {
    long sign = 1;
    bool zero = false;
    for (long d : lv) {
      if (m == d) zero = true;
      if (m < d) sign = -sign;
    }
    if (!zero && sign < 0) return m;
  }
  return -1;
}

double fd_second(const std::function<double(double)>& f, double x, double h) {
  auto stencil = [&](double step) {
    return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) -
            f(x - 2 * step)) /
           (12 * step * step);
  };
  return (16.0 * stencil(h / 2) - stencil(h)) / 15.0;
}

double dqm_diff_residual(const ModifiedSystem& m, const Poly<double>& pmu,
                         const Poly<double>& pn, long n, double x) {
  const SystemDescriptor& d = m.desc;
  const double gam = gamma_d(d);
  const Cplx xc(x, 0.0);
  const Cplx ig(0.0, gam);
  const Cplx vb = dqm_modified_V(m, pmu, xc);
  const Cplx vbs = dqm_modified_Vstar(m, pmu, xc);
  const Cplx e0 = eta_of(d, xc), em = eta_of(d, xc - ig), ep = eta_of(d, xc + ig);
  const Cplx pm0 = poly_eval(pmu, e0), pmm = poly_eval(pmu, em), pmp = poly_eval(pmu, ep);
  const Cplx pn0 = poly_eval(pn, e0), pnm = poly_eval(pn, em), pnp = poly_eval(pn, ep);
  const double de = energy(d, n) - energy(d, m.del.mu);
  const Cplx t1 = vb * (pm0 * pnm / pmm - pn0);
  const Cplx t2 = vbs * (pm0 * pnp / pmp - pn0);
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(de * pn0), 1e-30});
  return std::abs(t1 + t2 - de * pn0) / scale;
}

}  // namespace

TEST_CASE("admissibility: examples and brute-force cross check") {
  CHECK(admissible_clusters({}));
  CHECK(admissible_clusters({0}));
  CHECK(admissible_clusters({1, 2}));
  CHECK(admissible_clusters({0, 2, 3}));
  CHECK_FALSE(admissible_clusters({1}));
  CHECK_FALSE(admissible_clusters({2, 3, 5}));
  CHECK(admissibility_witness({1}) == 0);
  CHECK(admissibility_witness({2, 3, 5}) == 0);
  CHECK(admissibility_witness({1, 2}) == -1);

  for (int mask = 0; mask < 64; ++mask) {
    std::vector<long> lv;
    for (int b = 0; b < 6; ++b)
      if (mask & (1 << b)) lv.push_back(b);
    CHECK(admissible_clusters(lv) == admissible_brute(lv));
    CHECK(admissibility_witness(lv) == witness_brute(lv));
  }
  std::mt19937 rng(515151);
  for (int t = 0; t < 300; ++t) {
    std::vector<long> lv;
    for (long v = 0; v <= 15; ++v)
      if (rng() & 1u) lv.push_back(v);
    CHECK(admissible_clusters(lv) == admissible_brute(lv));
    CHECK(admissibility_witness(lv) == witness_brute(lv));
  }
}

TEST_CASE("deletion bookkeeping and input validation") {
  const Deletion d = validate_deletion({3, 1, 2, 4});
  CHECK(d.ell == 4);
  CHECK(d.mu == 0);
  CHECK(d.sum == 10);
  CHECK(validate_deletion({0, 1, 3, 4}).mu == 2);

  CHECK_THROWS_AS(validate_deletion({2, 2}), parameter_error);
  CHECK_THROWS_AS(validate_deletion({-1}), parameter_error);
  bool carried = false;
  try {
    validate_deletion({2, 3, 5});
  } catch (const inadmissible_error& e) {
    carried = (e.witness_m == 0);
  }
  CHECK(carried);
}

TEST_CASE("oscillator with levels 1 and 2 deleted") {
  const ModifiedSystem m = build_modified(mk(Family::H), {1, 2});
  CHECK(m.del.mu == 0);
  CHECK(m.admissible);
  CHECK(m.weight_zero_free);

  const Poly<double> xi = poly_cast<double>(m.xi);
  CHECK(poly_eval(xi, 0.5) == doctest::Approx(8 * 0.25 + 4).epsilon(1e-14));

  CHECK(poly_is_zero(modified_poly_exact(m, 1)));
  CHECK(poly_is_zero(modified_poly_exact(m, 2)));
  const Poly<Rational> p3 = modified_poly_exact(m, 3);
  CHECK(poly_equal(p3, Poly<Rational>{Rational(0), Rational(192), Rational(0), Rational(128)}));

  CHECK(weight_sq(m, 0.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  for (double x : range_points(m.desc, 50)) CHECK(weight_sq(m, x) > 0.0);

  double worst = 0;
  for (double x : {0.3, 0.9, 1.7}) {
    auto phib = [&](double t) { return modified_eigenfunction(m, 3, t); };
    const double lhs = -fd_second(phib, x, 1e-3) + modified_potential_U(m, x) * phib(x);
    const double rhs = energy(m.desc, 3) * phib(x);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst < 1e-6);

  CHECK_THROWS_AS(modified_eigenfunction(m, 2, 0.5), parameter_error);

  const ModifiedSystem m2 = build_modified(mk(Family::H), {2, 1});
  const double x1 = poly_eval(poly_cast<double>(m2.xi), 0.5);
  CHECK(std::abs(x1) == doctest::Approx(std::abs(poly_eval(xi, 0.5))).epsilon(1e-14));
  CHECK(modified_potential_U(m2, 0.7) ==
        doctest::Approx(modified_potential_U(m, 0.7)).epsilon(1e-10));
  CHECK(std::abs(modified_eigenfunction(m2, 3, 0.7)) ==
        doctest::Approx(std::abs(modified_eigenfunction(m, 3, 0.7))).epsilon(1e-10));
}

TEST_CASE("empty deletion reduces to the original system, ordinary") {
  for (Family f : {Family::H, Family::L, Family::J}) {
    const SystemDescriptor d = mk(f);
    const ModifiedSystem m = build_modified(d, {});
    CHECK(m.del.ell == 0);
    CHECK(m.del.mu == 0);
    for (double x : range_points(d, 8)) {
      CHECK(modified_potential_U(m, x) ==
            doctest::Approx(potential_U(d, x)).epsilon(1e-12));
      const double direct =
          phi0(d, Cplx(x, 0)).real() * poly_eval(poly_P(d, 4), eta_real(d, x));
      CHECK(modified_eigenfunction(m, 4, x) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("deleting the bottom of the spectrum shifts the ground state") {
  const ModifiedSystem m = build_modified(mk_L(Rational(5, 2)), {0, 1});
  CHECK(m.del.mu == 2);
  CHECK(m.weight_zero_free);
  double worst = 0;
  for (double x : {0.5, 1.1, 2.0}) {
    auto phib = [&](double t) { return modified_eigenfunction(m, 2, t); };
    const double lhs = -fd_second(phib, x, 1e-3) + modified_potential_U(m, x) * phib(x);
    const double rhs = energy(m.desc, 2) * phib(x);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("discrete families, levels 1 and 2 deleted") {
  for (Family f : kDiscrete) {
    CAPTURE(family_name(f));
    const SystemDescriptor d = mk(f);
    const ModifiedSystem m0 = build_modified(d, {});
    const ModifiedSystem m = build_modified(d, {1, 2});
    CHECK(m.del.mu == 0);
    CHECK(m.weight_zero_free);
    CHECK(poly_is_zero(modified_poly(m, 1)));
    CHECK(poly_is_zero(modified_poly(m, 2)));

    const Cplx x0(range_reference(d) + 0.3, 0.1);
    CHECK(std::abs(dqm_modified_V(m0, x0) - potential_V(d, x0)) <=
          1e-10 * std::abs(potential_V(d, x0)));
    const double xr = range_reference(d) + 0.4;
    CHECK(std::abs(weight_sq(m0, xr) - std::norm(phi0(d, Cplx(xr, 0)))) <=
          1e-10 * std::norm(phi0(d, Cplx(xr, 0))));

    const Poly<double> pmu = modified_poly(m, m.del.mu);
    double worstv = 0;
    for (int i = 0; i < 5; ++i) {
      const Cplx x(range_reference(d) + 0.17 + 0.11 * i, 0.2 * gamma_d(d) * (i - 2) / 2.0);
      const Cplx a = dqm_modified_V(m, pmu, x);
      const Cplx b = dqm_modified_V_direct(m, x);
      worstv = std::max(worstv, std::min(std::abs(a - b), std::abs(a + b)) / std::abs(a));
    }
    CHECK(worstv < 1e-8);

    double worste = 0;
    for (long n : {0L, 3L, 4L}) {
      for (int i = 0; i < 4; ++i) {
        const double x = range_reference(d) + 0.15 + 0.2 * i;
        const double a = dqm_modified_eigenfunction_sq(m, n, x);
        const double b = dqm_modified_eigenfunction_sq_direct(m, n, x);
        worste = std::max(worste, std::abs(a - b) / std::max(std::abs(b), 1e-30));
      }
    }
    CHECK(worste < 1e-8);

    double worstr = 0;
    for (long n : {0L, 3L, 4L, 5L}) {
      const Poly<double> pn = modified_poly(m, n);
      for (int i = 0; i < 4; ++i) {
        const double x = range_reference(d) + 0.1 + 0.23 * i;
        worstr = std::max(worstr, dqm_diff_residual(m, pmu, pn, n, x));
      }
    }
    CHECK(worstr < 1e-8);

    double worstp = 0;
    for (int i = 0; i < 5; ++i) {
      const Cplx x(range_reference(d) + 0.2 + 0.13 * i, 0.15 * gamma_d(d) * (i - 2) / 2.0);
      worstp = std::max(worstp, prodV_residual(m, x));
    }
    CHECK(worstp < 1e-8);
    CHECK(prodV_residual(m0, Cplx(range_reference(d) + 0.5, 0.1)) == 0.0);

    const ModifiedSystem m2 = build_modified(d, {2, 1});
    const double e0 = eta_real(d, range_reference(d) + 0.3);
    CHECK(std::abs(poly_eval(m.Q, e0)) ==
          doctest::Approx(std::abs(poly_eval(m2.Q, e0))).epsilon(1e-9));
    const Cplx v1 = dqm_modified_V(m, Cplx(range_reference(d) + 0.3, 0.0));
    const Cplx v2 = dqm_modified_V(m2, Cplx(range_reference(d) + 0.3, 0.0));
    CHECK(std::abs(v1 - v2) <= 1e-9 * std::abs(v1));
  }
}

TEST_CASE("inadmissible deletions are refused unless forced") {
  const SystemDescriptor d = mk(Family::MP);
  CHECK_THROWS_AS(build_modified(d, {1}), inadmissible_error);
  const ModifiedSystem mf = build_modified(d, {1}, true);
  CHECK_FALSE(mf.admissible);
  CHECK(mf.forced);
  CHECK_FALSE(mf.weight_zero_free);

  const ModifiedSystem hf = build_modified(mk(Family::H), {1}, true);
  CHECK_FALSE(hf.weight_zero_free);
  CHECK_THROWS_AS(modified_potential_U(hf, 0.0), pole_error);
}
