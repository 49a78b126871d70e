#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "kadel/catalog.hpp"
#include "kadel/determinants.hpp"

namespace kadel {

/* A set of deleted levels D = {d_1,...,d_ell}, kept sorted.  mu is the lowest
 * surviving level, the ground state of the deformed system. */
struct Deletion {
  std::vector<long> levels;
  long ell = 0;
  long mu = 0;
  long sum = 0;
};

inline Deletion make_deletion(std::vector<long> in) {
  std::sort(in.begin(), in.end());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] < 0) throw parameter_error("deleted levels must be non-negative");
    if (i > 0 && in[i] == in[i - 1])
      throw parameter_error("deleted level " + std::to_string(in[i]) + " repeated");
  }
  Deletion d;
  d.levels = std::move(in);
  d.ell = static_cast<long>(d.levels.size());
  d.sum = std::accumulate(d.levels.begin(), d.levels.end(), 0L);
  long m = 0;
  for (long v : d.levels) {
    if (v == m)
      ++m;
    else if (v > m)
      break;
  }
  d.mu = m;
  return d;
}

/* Cluster rule: contiguous runs must have even length, except a run starting
 * at level 0, which may have any length. */
inline bool admissible_clusters(const std::vector<long>& lv) {
  std::size_t i = 0;
  while (i < lv.size()) {
    std::size_t j = i + 1;
    while (j < lv.size() && lv[j] == lv[j - 1] + 1) ++j;
    if (lv[i] != 0 && (j - i) % 2 != 0) return false;
    i = j;
  }
  return true;
}

/* Smallest m in Z_+ with prod_j (m - d_j) < 0, or -1 when none exists.
 * Beyond max(D) the product is positive, so the scan is finite. */
inline long admissibility_witness(const std::vector<long>& lv) {
  if (lv.empty()) return -1;
  for (long m = 0; m <= lv.back() + 1; ++m) {
    if (std::binary_search(lv.begin(), lv.end(), m)) continue;
    const long above = lv.end() - std::upper_bound(lv.begin(), lv.end(), m);
    if (above % 2 != 0) return m;
  }
  return -1;
}

inline Deletion validate_deletion(std::vector<long> levels) {
  Deletion d = make_deletion(std::move(levels));
  const bool ok = admissible_clusters(d.levels);
  const long w = admissibility_witness(d.levels);
  if (ok != (w < 0)) throw regime_error("admissibility routes disagree");
  if (!ok)
    throw inadmissible_error(
        "deleted set violates the product condition at m = " + std::to_string(w),
        static_cast<int>(w));
  return d;
}

/* Deformed system built from a descriptor and a deleted set.  Holds the
 * denominator polynomial of the deformation: Xi (ordinary, exact) or Q
 * (discrete, extracted).  build_order is the column order used for the
 * determinants; it only affects overall signs. */
struct ModifiedSystem {
  SystemDescriptor desc;
  Deletion del;
  std::vector<long> build_order;
  bool forced = false;
  bool admissible = true;
  bool weight_zero_free = true;
  Poly<Rational> xi;
  Poly<double> Q;
};

inline bool level_deleted(const ModifiedSystem& m, long n) {
  return std::binary_search(m.del.levels.begin(), m.del.levels.end(), n);
}

/* eta interval over which zero scans run; slightly wider than the extraction
 * window so interior zeros near the ends are not missed. */
inline std::pair<double, double> scan_window(const SystemDescriptor& d, int deg) {
  const double L = std::max(8.0, 2.0 * deg);
  const Range r = range_of(d);
  if (r.left_inf && r.right_inf) return {-L, L};
  if (r.right_inf) return {1e-6, L};
  const double m = 1e-6 * (r.x2 - r.x1);
  const double e1 = eta_real(d, r.x1 + m), e2 = eta_real(d, r.x2 - m);
  return {std::min(e1, e2), std::max(e1, e2)};
}

inline bool poly_zero_free_on(const Poly<double>& p, double lo, double hi,
                              int samples = 1000) {
  std::vector<double> vals(samples);
  double mx = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double e = lo + (hi - lo) * (i + 0.5) / samples;
    vals[i] = poly_eval(p, e);
    mx = std::max(mx, std::abs(vals[i]));
  }
  if (mx == 0.0) return false;
  double mn = mx;
  for (int i = 0; i < samples; ++i) {
    mn = std::min(mn, std::abs(vals[i]));
    if (vals[i] == 0.0) return false;
    if (i > 0 && std::signbit(vals[i]) != std::signbit(vals[i - 1])) {
      double a = lo + (hi - lo) * (i - 0.5) / samples;
      double b = lo + (hi - lo) * (i + 0.5) / samples;
      for (int it = 0; it < 80; ++it) {
        const double c = 0.5 * (a + b);
        if (std::signbit(poly_eval(p, c)) == std::signbit(poly_eval(p, a)))
          a = c;
        else
          b = c;
      }
      return false;
    }
  }
  return mn > 1e-12 * mx;
}

/* States phi_n = phi_0 * P_n(eta) as callables on the complex plane. */
inline std::vector<std::function<Cplx(Cplx)>> dqm_states(const SystemDescriptor& d,
                                                         const std::vector<long>& levels) {
  std::vector<std::function<Cplx(Cplx)>> fs;
  fs.reserve(levels.size());
  for (long n : levels) {
    Poly<double> p = poly_P(d, n);
    fs.push_back([d, p](Cplx z) { return phi0(d, z) * poly_eval(p, eta_of(d, z)); });
  }
  return fs;
}

inline Poly<double> dqm_Q_poly(const SystemDescriptor& d, const std::vector<long>& order) {
  const long l = static_cast<long>(order.size());
  if (l == 0) return Poly<double>{1.0};
  const double gam = gamma_d(d);
  std::vector<Poly<double>> ps;
  ps.reserve(order.size());
  for (long n : order) ps.push_back(poly_P(d, n));
  std::vector<std::function<Cplx(Cplx)>> fs;
  fs.reserve(ps.size());
  for (const auto& p : ps)
    fs.push_back([d, p](Cplx z) { return poly_eval(p, eta_of(d, z)); });
  const long sum = std::accumulate(order.begin(), order.end(), 0L);
  const int deg = static_cast<int>(sum - l * (l - 1) / 2);
  const auto win = eta_window(d, deg);
  const int il = static_cast<int>(l);
  auto val = [&](double ev) {
    const double x = x_from_eta(d, ev);
    return casoratian(fs, Cplx(x, 0.0), gam) / varphi_ell_aux(d, Cplx(x, 0.0), il);
  };
  return extract_polynomial_real(val, win.first, win.second, deg);
}

inline bool dqm_Q_zero_free(const SystemDescriptor& d, const Poly<double>& Q) {
  const int deg = static_cast<int>(Q.degree());
  const auto win = scan_window(d, deg);
  if (!poly_zero_free_on(Q, win.first, win.second)) return false;
  const double half = 0.5 * std::abs(gamma_d(d));
  double mn = 0.0, mx = 0.0;
  bool first = true;
  for (int i = 0; i < 100; ++i) {
    const double ev = win.first + (win.second - win.first) * (i + 0.5) / 100.0;
    const double xr = x_from_eta(d, ev);
    for (int j = 0; j < 20; ++j) {
      const double y = -half + 2.0 * half * j / 19.0;
      const double v = std::abs(poly_eval(Q, eta_of(d, Cplx(xr, y))));
      if (first || v < mn) mn = v;
      if (first || v > mx) mx = v;
      first = false;
    }
  }
  return mx > 0.0 && mn > 1e-8 * mx;
}

inline ModifiedSystem build_modified(const SystemDescriptor& desc,
                                     const std::vector<long>& levels, bool force = false) {
  validate(desc);
  ModifiedSystem m;
  m.desc = desc;
  m.forced = force;
  m.build_order = levels;
  if (force) {
    m.del = make_deletion(levels);
    m.admissible = admissible_clusters(m.del.levels);
  } else {
    m.del = validate_deletion(levels);
  }
  if (is_ordinary(desc.fam)) {
    std::vector<Poly<Rational>> ps;
    ps.reserve(levels.size());
    for (long n : m.build_order) ps.push_back(poly_P_rat(desc, n));
    m.xi = wronskian_poly(ps);
    const Poly<double> xd = poly_cast<double>(m.xi);
    const auto win = scan_window(desc, static_cast<int>(xd.degree()));
    m.weight_zero_free = poly_zero_free_on(xd, win.first, win.second);
  } else {
    m.Q = dqm_Q_poly(desc, m.build_order);
    m.weight_zero_free = dqm_Q_zero_free(desc, m.Q);
  }
  if (!m.weight_zero_free && !force)
    throw pole_error("deformation denominator vanishes inside the range");
  return m;
}

/* calP_n: the deformed polynomial.  Identically zero for deleted n. */
inline Poly<Rational> modified_poly_exact(const ModifiedSystem& m, long n) {
  if (!is_ordinary(m.desc.fam))
    throw regime_error("exact deformed polynomials exist in the ordinary regime only");
  if (n < 0) throw parameter_error("level must be non-negative");
  std::vector<Poly<Rational>> ps;
  ps.reserve(m.build_order.size() + 1);
  for (long dl : m.build_order) ps.push_back(poly_P_rat(m.desc, dl));
  ps.push_back(poly_P_rat(m.desc, n));
  return poly_trim(wronskian_poly(ps));
}

inline Poly<double> modified_poly(const ModifiedSystem& m, long n) {
  if (n < 0) throw parameter_error("level must be non-negative");
  if (is_ordinary(m.desc.fam)) return poly_cast<double>(modified_poly_exact(m, n));
  if (level_deleted(m, n)) return Poly<double>{};
  if (m.del.ell == 0) return poly_P(m.desc, n);
  const SystemDescriptor d = m.desc;
  const double gam = gamma_d(d);
  std::vector<long> order = m.build_order;
  order.push_back(n);
  std::vector<Poly<double>> ps;
  ps.reserve(order.size());
  for (long lev : order) ps.push_back(poly_P(d, lev));
  std::vector<std::function<Cplx(Cplx)>> fs;
  fs.reserve(ps.size());
  for (const auto& p : ps)
    fs.push_back([d, p](Cplx z) { return poly_eval(p, eta_of(d, z)); });
  const int deg = static_cast<int>(m.del.sum + n - m.del.ell * (m.del.ell + 1) / 2);
  const auto win = eta_window(d, deg);
  const int il = static_cast<int>(m.del.ell) + 1;
  auto val = [&](double ev) {
    const double x = x_from_eta(d, ev);
    return casoratian(fs, Cplx(x, 0.0), gam) / varphi_ell_aux(d, Cplx(x, 0.0), il);
  };
  return extract_polynomial_real(val, win.first, win.second, deg);
}

inline double range_reference(const SystemDescriptor& d) {
  const Range r = range_of(d);
  if (!r.left_inf && !r.right_inf) return 0.5 * (r.x1 + r.x2);
  if (!r.left_inf) return r.x1 + 1.0;
  if (!r.right_inf) return r.x2 - 1.0;
  return 0.0;
}

/* psibar before the sign convention: phi_0 (deta/dx)^ell / Xi(eta). */
inline double psibar_raw(const ModifiedSystem& m, double x) {
  const SystemDescriptor& d = m.desc;
  const double xv = poly_eval(poly_cast<double>(m.xi), eta_real(d, x));
  if (xv == 0.0) throw pole_error("weight evaluated at a zero of Xi");
  const double ep = deta_dx(d, Cplx(x, 0.0)).real();
  double jac = 1.0;
  for (long k = 0; k < m.del.ell; ++k) jac *= ep;
  return phi0(d, Cplx(x, 0.0)).real() * jac / xv;
}

inline double psibar(const ModifiedSystem& m, double x) {
  if (!is_ordinary(m.desc.fam)) throw regime_error("signed psibar is ordinary-regime only");
  const double s = psibar_raw(m, range_reference(m.desc)) < 0.0 ? -1.0 : 1.0;
  return s * psibar_raw(m, x);
}

/* Squared deformed weight.  Ordinary: psibar^2.  Discrete: the paired product
 * assembled from V V* and |phi_0|^2, which needs no square-root branch. */
inline double weight_sq(const ModifiedSystem& m, double x) {
  const SystemDescriptor& d = m.desc;
  if (is_ordinary(d.fam)) {
    const double p = psibar_raw(m, x);
    return p * p;
  }
  const double gam = gamma_d(d);
  const long l = m.del.ell;
  double acc = std::norm(phi0(d, Cplx(x, 0.5 * l * gam)));
  for (long k = 0; k < l; ++k) {
    acc *= std::norm(varphi(d, Cplx(x, 0.5 * k * gam)));
    acc *= std::abs(potential_V(d, Cplx(x, 0.5 * (l - 2 * k) * gam)));
  }
  const double qn = std::norm(poly_eval(m.Q, eta_of(d, Cplx(x, 0.5 * gam))));
  if (qn == 0.0) throw pole_error("weight evaluated at a zero of Q");
  return acc / qn;
}

/* U_D(x) = U(x) - 2 (log W[phi_D])'' with the logarithm split into the
 * prepotential, Jacobian and Xi parts, each differentiated in closed form. */
inline double modified_potential_U(const ModifiedSystem& m, double x) {
  const SystemDescriptor& d = m.desc;
  if (!is_ordinary(d.fam)) throw regime_error("modified U is ordinary-regime only");
  const long l = m.del.ell;
  const Poly<double> xi0 = poly_cast<double>(m.xi);
  const Poly<double> xi1 = poly_derivative(xi0);
  const Poly<double> xi2 = poly_derivative(xi1);
  const double e = eta_real(d, x);
  const double xv = poly_eval(xi0, e);
  if (xv == 0.0) throw pole_error("modified U evaluated at a zero of Xi");
  const double ep = deta_dx(d, Cplx(x, 0.0)).real();
  const double epp = d2eta_dx2(d, Cplx(x, 0.0)).real();
  double logj2 = 0.0;
  if (d.fam == Family::L) logj2 = -1.0 / (x * x);
  if (d.fam == Family::J) {
    const double s = std::sin(2.0 * x);
    logj2 = -4.0 / (s * s);
  }
  const double t1 = (poly_eval(xi2, e) * ep * ep + poly_eval(xi1, e) * epp) / xv;
  const double t2 = poly_eval(xi1, e) * ep / xv;
  return potential_U(d, x) -
         2.0 * (static_cast<double>(l) * prepotential_wpp(d, x) +
                0.5 * static_cast<double>(l * (l - 1)) * logj2 + t1 - t2 * t2);
}

inline double modified_eigenfunction(const ModifiedSystem& m, long n, double x) {
  if (!is_ordinary(m.desc.fam))
    throw regime_error("pointwise eigenfunctions are ordinary-regime only");
  if (level_deleted(m, n)) throw parameter_error("level " + std::to_string(n) + " was deleted");
  const Poly<double> p = poly_cast<double>(modified_poly_exact(m, n));
  return psibar(m, x) * poly_eval(p, eta_real(m.desc, x));
}

/* Modified potential function Vbar, sqrt-free canonical route: every square
 * root has been absorbed using the zero-mode relation, leaving ratios of Q,
 * calP_mu and the varphi_ell prefactors. */
inline Cplx dqm_modified_V(const ModifiedSystem& m, const Poly<double>& pmu, const Cplx& x) {
  const SystemDescriptor& d = m.desc;
  if (is_ordinary(d.fam)) throw regime_error("Vbar is discrete-regime only");
  const double gam = gamma_d(d);
  const long l = m.del.ell;
  const int il = static_cast<int>(l);
  const Cplx ih(0.0, 0.5 * gam);
  const Cplx qp = poly_eval(m.Q, eta_of(d, x + ih));
  const Cplx qm = poly_eval(m.Q, eta_of(d, x - ih));
  const Cplx p0 = poly_eval(pmu, eta_of(d, x));
  const Cplx p1 = poly_eval(pmu, eta_of(d, x - 2.0 * ih));
  if (std::abs(qm) == 0.0 || std::abs(p0) == 0.0)
    throw pole_error("Vbar evaluated at a zero of the deformation denominators");
  Cplx v = potential_V(d, x - static_cast<double>(l) * ih);
  v *= varphi_ell_aux(d, x + ih, il) / varphi_ell_aux(d, x - ih, il);
  v *= varphi_ell_aux(d, x - 2.0 * ih, il + 1) / varphi_ell_aux(d, x, il + 1);
  v *= (qp / qm) * (p1 / p0);
  return v;
}

inline Cplx dqm_modified_V(const ModifiedSystem& m, const Cplx& x) {
  return dqm_modified_V(m, modified_poly(m, m.del.mu), x);
}

inline Cplx dqm_modified_Vstar(const ModifiedSystem& m, const Poly<double>& pmu,
                               const Cplx& x) {
  return std::conj(dqm_modified_V(m, pmu, std::conj(x)));
}

/* Direct Casoratian-ratio route for Vbar.  Square roots are taken on the
 * principal branch, so the value can differ from the canonical route by a
 * global sign; comparisons should be made modulo that flip. */
inline Cplx dqm_modified_V_direct(const ModifiedSystem& m, const Cplx& x) {
  const SystemDescriptor& d = m.desc;
  if (is_ordinary(d.fam)) throw regime_error("Vbar is discrete-regime only");
  const double gam = gamma_d(d);
  const long l = m.del.ell;
  const Cplx ih(0.0, 0.5 * gam);
  auto fs = dqm_states(d, m.build_order);
  std::vector<long> withmu = m.build_order;
  withmu.push_back(m.del.mu);
  auto fsn = dqm_states(d, withmu);
  const Cplx wp = casoratian(fs, x + ih, gam);
  const Cplx wm = casoratian(fs, x - ih, gam);
  const Cplx w0 = casoratian(fsn, x, gam);
  const Cplx w1 = casoratian(fsn, x - 2.0 * ih, gam);
  if (std::abs(wm) == 0.0 || std::abs(w0) == 0.0)
    throw pole_error("Vbar evaluated at a zero of the Casoratians");
  const Cplx s = std::sqrt(potential_V(d, x - static_cast<double>(l) * ih) *
                           potential_Vstar(d, x - static_cast<double>(l + 2) * ih));
  return s * (wp / wm) * (w1 / w0);
}

/* |phibar_n|^2 on the real axis: weight_sq * calP_n(eta)^2. */
inline double dqm_modified_eigenfunction_sq(const ModifiedSystem& m, const Poly<double>& pn,
                                            double x) {
  const double pv = poly_eval(pn, eta_real(m.desc, x));
  return weight_sq(m, x) * pv * pv;
}

inline double dqm_modified_eigenfunction_sq(const ModifiedSystem& m, long n, double x) {
  if (!is_ordinary(m.desc.fam) && level_deleted(m, n))
    throw parameter_error("level " + std::to_string(n) + " was deleted");
  return dqm_modified_eigenfunction_sq(m, modified_poly(m, n), x);
}

/* Same quantity from the raw Casoratian ratio, moduli only. */
inline double dqm_modified_eigenfunction_sq_direct(const ModifiedSystem& m, long n, double x) {
  const SystemDescriptor& d = m.desc;
  if (is_ordinary(d.fam)) throw regime_error("Casoratian route is discrete-regime only");
  if (level_deleted(m, n)) throw parameter_error("level " + std::to_string(n) + " was deleted");
  const double gam = gamma_d(d);
  const long l = m.del.ell;
  auto fs = dqm_states(d, m.build_order);
  std::vector<long> withn = m.build_order;
  withn.push_back(n);
  auto fsn = dqm_states(d, withn);
  const Cplx wm = casoratian(fs, Cplx(x, -0.5 * gam), gam);
  const Cplx wp = casoratian(fs, Cplx(x, 0.5 * gam), gam);
  const Cplx wn = casoratian(fsn, Cplx(x, 0.0), gam);
  if (std::abs(wm) == 0.0 || std::abs(wp) == 0.0)
    throw pole_error("eigenfunction evaluated at a zero of the Casoratians");
  double pref = 1.0;
  for (long j = 0; j < l; ++j)
    pref *= std::abs(potential_V(d, Cplx(x, 0.5 * (l - 2 * j) * gam)));
  return pref * std::norm(wn) / (std::abs(wm) * std::abs(wp));
}

namespace detail {

/* The step-by-step deletion chain.  Potentials and states are defined
 * recursively, each step dressing the previous one.  Every square root is a
 * branch-tracked continuation from a real-axis anchor, and the relative sign
 * inside each step operator is fixed so that it annihilates the state being
 * deleted; with principal branches alone the additive combinations are
 * corrupted whenever a factor crosses a cut. */
struct DqmChain {
  SystemDescriptor d;
  std::vector<long> lev;
  double gam;
  Cplx anchor;
  std::map<long, Poly<double>> pc;
  std::map<int, double> sig;

  /* All arguments reached from a sample point differ from it by pure imaginary
   * shifts, so the whole evaluation lives on one vertical line.  Anchoring the
   * square-root continuation on that line keeps every path singularity-free
   * unless a zero or pole of an intermediate potential sits on the line itself. */
  explicit DqmChain(const ModifiedSystem& m, double re_line)
      : d(m.desc), lev(m.build_order), gam(gamma_d(m.desc)), anchor(re_line, 0.0) {}

  explicit DqmChain(const ModifiedSystem& m)
      : DqmChain(m, range_reference(m.desc) + 0.1356) {}

  const Poly<double>& P(long n) {
    auto it = pc.find(n);
    if (it == pc.end()) it = pc.emplace(n, poly_P(d, n)).first;
    return it->second;
  }
  Cplx sh(const Cplx& x, double k) const { return x + Cplx(0.0, k * gam); }

  Cplx half(int s, const Cplx& z) {
    if (s == 0)
      return analytic_sqrt([&](const Cplx& w) { return potential_V(d, w); }, anchor, z);
    return analytic_sqrt([&](const Cplx& w) { return V_s(s, w); }, anchor, z);
  }
  Cplx half_star(int s, const Cplx& z) { return std::conj(half(s, std::conj(z))); }

  /* Relative branch inside the step operator, pinned by its zero mode. */
  double sigma(int s) {
    auto it = sig.find(s);
    if (it != sig.end()) return it->second;
    for (double off : {0.29, 0.53, 0.81, 1.07}) {
      const Cplx xh = anchor + Cplx(0.0, off * gam);
      const Cplx xm = sh(xh, -0.5), xp = sh(xh, 0.5);
      const Cplx den = half(s, xp) * state(s - 1, lev[s - 1], xp);
      if (std::abs(den) < 1e-280) continue;
      const Cplx rho = half_star(s, xm) * state(s - 1, lev[s - 1], xm) / den;
      if (std::abs(std::abs(rho) - 1.0) < 1e-5) {
        const double sg = rho.real() >= 0.0 ? 1.0 : -1.0;
        sig.emplace(s, sg);
        return sg;
      }
    }
    throw convergence_error("could not pin the chain branch sign");
  }

  Cplx state(int s, long n, const Cplx& x) {
    if (s == 0) return phi0(d, x) * poly_eval(P(n), eta_of(d, x));
    const Cplx xm = sh(x, -0.5), xp = sh(x, 0.5);
    return Cplx(0, 1) * (half_star(s, xm) * state(s - 1, n, xm) -
                         sigma(s) * half(s, xp) * state(s - 1, n, xp));
  }

  Cplx V_s(int s, const Cplx& x) {
    const Cplx num = state(s - 1, lev[s - 1], sh(x, -1.0));
    const Cplx den = state(s - 1, lev[s - 1], x);
    if (std::abs(den) == 0.0) throw pole_error("chain potential hit a zero state");
    if (s == 1) {
      const Cplx pair = half(0, x) * std::conj(half(0, std::conj(x) + Cplx(0.0, gam)));
      return pair * num / den;
    }
    const Cplx xm = sh(x, -0.5);
    return half(s - 1, xm) * half_star(s - 1, xm) * num / den;
  }
};

}  // namespace detail

/* Relative deviation between the chain product prod_j V_{d_1..d_j} at its
 * staggered arguments and the closed Casoratian-ratio form, modulo one global
 * sign.  Exactly zero for ell = 0. */
inline double prodV_residual(const ModifiedSystem& m, const Cplx& x) {
  const SystemDescriptor& d = m.desc;
  if (is_ordinary(d.fam)) throw regime_error("the chain product is discrete-regime only");
  const long l = m.del.ell;
  if (l == 0) return 0.0;
  const double gam = gamma_d(d);
  detail::DqmChain ch(m, x.real());
  Cplx lhs(1.0, 0.0);
  for (long j = 1; j <= l; ++j)
    lhs *= ch.V_s(static_cast<int>(j), x + Cplx(0.0, 0.5 * (l + 1 - j) * gam));
  auto fs = dqm_states(d, m.build_order);
  const Cplx wm = casoratian(fs, x - Cplx(0.0, 0.5 * gam), gam);
  const Cplx wp = casoratian(fs, x + Cplx(0.0, 0.5 * gam), gam);
  if (std::abs(wp) == 0.0) throw pole_error("closed form hit a Casoratian zero");
  Cplx pr(1.0, 0.0);
  for (long j = 0; j < l; ++j) {
    const Cplx u(0.0, 0.5 * (l - 2 * j) * gam);
    pr *= potential_V(d, x + u) * potential_Vstar(d, x - u);
  }
  const Cplx rhs = std::sqrt(pr) * wm / wp;
  const double scale = std::abs(rhs);
  if (scale == 0.0) throw pole_error("closed-form product vanished at the sample point");
  return std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)) / scale;
}

}  // namespace kadel
