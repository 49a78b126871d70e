#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kadel/special_ell.hpp"

namespace kadel {

/* Verification harness: quadrature, pointwise residuals of the (difference)
 * Schroedinger equations, sign-change and interlacing checks, and the report
 * type the command line aggregates.  Oracles here stay independent of the
 * construction calculus: derivatives are finite differences, integrals are
 * quadrature, zeros are bisection brackets. */

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::pair<double, double> window{0.0, 0.0};
  std::string scheme;  // "gauss-legendre-panels" or "truncated-infinite"
};

struct ResidualReport {
  std::string check;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::vector<std::pair<std::string, std::string>> metadata;
};

inline ResidualReport make_report(std::string check, double max_residual, double tolerance,
                                  std::vector<std::pair<std::string, std::string>> metadata = {}) {
  ResidualReport r;
  r.check = std::move(check);
  r.max_residual = max_residual;
  r.tolerance = tolerance;
  r.passed = max_residual <= tolerance;
  r.metadata = std::move(metadata);
  return r;
}

namespace detail {

inline const std::vector<std::pair<double, double>>& gauss_legendre_32() {
  static const std::vector<std::pair<double, double>> table = [] {
    const int n = 32;
    const double pi = 3.14159265358979323846;
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return out;
  }();
  return table;
}

/* Doubling search for the truncation point of a decaying weight, walking away
 * from the maximizer and tightened by bisection once the threshold is
 * bracketed. */
inline double truncate_end(const std::function<double(double)>& weight, double anchor, double dir,
                           double start_offset, double wmax) {
  const double thr = 1e-16 * wmax;
  double inside = 0.0;
  double t = std::max(1.0, start_offset);
  for (int it = 0; it < 60; ++it) {
    if (std::abs(weight(anchor + dir * t)) < thr) {
      double a = inside, b = t;
      for (int k = 0; k < 50; ++k) {
        const double c = 0.5 * (a + b);
        (std::abs(weight(anchor + dir * c)) < thr ? b : a) = c;
      }
      return anchor + dir * b;
    }
    inside = t;
    t *= 2.0;
  }
  throw convergence_error("truncation search did not terminate");
}

inline std::vector<double> panel_edges(double lo, double hi, int panels) {
  std::vector<double> e(panels + 1);
  for (int i = 0; i <= panels; ++i) e[i] = lo + (hi - lo) * i / panels;
  return e;
}

inline QuadratureRule assemble_rule(double lo, double hi, int panels, const std::string& scheme) {
  QuadratureRule r;
  r.window = {lo, hi};
  r.scheme = scheme;
  const auto& base = gauss_legendre_32();
  const auto edges = panel_edges(lo, hi, panels);
  r.nodes.reserve(32 * panels);
  r.weights.reserve(32 * panels);
  for (int p = 0; p < panels; ++p) {
    const double c = 0.5 * (edges[p] + edges[p + 1]), s = 0.5 * (edges[p + 1] - edges[p]);
    for (const auto& [t, w] : base) {
      r.nodes.push_back(c + s * t);
      r.weights.push_back(s * w);
    }
  }
  return r;
}

}  // namespace detail

inline double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

/* Composite Gauss-Legendre rule over the range, with infinite ends truncated
 * where the weight has decayed below 1e-16 of its maximum.  Self-validating:
 * doubling the panel count must reproduce the weight integral to 1e-10. */
inline QuadratureRule build_quadrature(const SystemDescriptor& d,
                                       const std::function<double(double)>& weight, int order) {
  const Range r = range_of(d);
  double lo = r.x1, hi = r.x2;
  const bool infinite = r.left_inf || r.right_inf;
  if (infinite) {
    const double plo = r.left_inf ? -8.0 : r.x1;
    const double phi = r.right_inf ? 8.0 : r.x2;
    double wmax = 0.0, xbest = 0.5 * (plo + phi);
    for (int i = 0; i < 400; ++i) {
      const double x = plo + (phi - plo) * (i + 0.5) / 400;
      const double v = std::abs(weight(x));
      if (v > wmax) {
        wmax = v;
        xbest = x;
      }
    }
    if (!(wmax > 0.0)) throw convergence_error("weight vanishes on the probe window");
    if (r.left_inf) lo = detail::truncate_end(weight, xbest, -1.0, xbest - plo, wmax);
    if (r.right_inf) hi = detail::truncate_end(weight, xbest, +1.0, phi - xbest, wmax);
  }
  const std::string scheme = infinite ? "truncated-infinite" : "gauss-legendre-panels";
  for (int panels = std::max(1, (order + 31) / 32); panels <= 4096; panels *= 2) {
    QuadratureRule rule = detail::assemble_rule(lo, hi, panels, scheme);
    const QuadratureRule fine = detail::assemble_rule(lo, hi, 2 * panels, scheme);
    const double i1 = integrate(rule, weight), i2 = integrate(fine, weight);
    if (std::abs(i1 - i2) <= 1e-10 * std::max(std::abs(i2), 1e-300)) return rule;
  }
  throw convergence_error("quadrature self-check failed; weight not resolved");
}

inline MatX<double> gram_matrix(const ModifiedSystem& m, const std::vector<long>& levels,
                                const QuadratureRule& rule) {
  for (long n : levels)
    if (n < 0 || level_deleted(m, n))
      throw parameter_error("Gram levels must be surviving non-negative levels");
  const auto N = static_cast<Eigen::Index>(levels.size());
  std::vector<Poly<double>> ps;
  ps.reserve(levels.size());
  for (long n : levels) ps.push_back(modified_poly(m, n));
  MatX<double> g(N, N);
  g.setZero();
  std::vector<double> pv(levels.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double w = rule.weights[i] * weight_sq(m, x);
    const double e = eta_real(m.desc, x);
    for (std::size_t k = 0; k < ps.size(); ++k) pv[k] = poly_eval(ps[k], e);
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = a; b < N; ++b) g(a, b) += w * pv[a] * pv[b];
  }
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < a; ++b) g(a, b) = g(b, a);
  return g;
}

inline MatX<double> gram_matrix(const EllSystem& s, const std::vector<long>& levels,
                                const QuadratureRule& rule) {
  for (long n : levels)
    if (n < 0 || (n >= 1 && n <= s.ell))
      throw parameter_error("Gram levels must be surviving non-negative levels");
  const auto N = static_cast<Eigen::Index>(levels.size());
  std::vector<Poly<double>> ps;
  ps.reserve(levels.size());
  for (long n : levels) ps.push_back(P_ell_n(s.desc, s.ell, n));
  MatX<double> g(N, N);
  g.setZero();
  std::vector<double> pv(levels.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Cplx x(rule.nodes[i], 0.0);
    const double w = rule.weights[i] * std::norm(phi_ell_0(s, x));
    const double e = eta_real(s.desc, rule.nodes[i]);
    for (std::size_t k = 0; k < ps.size(); ++k) pv[k] = poly_eval(ps[k], e);
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = a; b < N; ++b) g(a, b) += w * pv[a] * pv[b];
  }
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < a; ++b) g(a, b) = g(b, a);
  return g;
}

/* Rules sized for Gram integrands: truncation must survive the polynomial
 * growth of the eigenpolynomials, so the envelope carries (1+eta^2)^dmax. */
inline QuadratureRule gram_rule(const ModifiedSystem& m, const std::vector<long>& levels,
                                int order = 256) {
  long dmax = 0;
  for (long n : levels) dmax = std::max(dmax, modified_poly(m, n).degree());
  auto w = [&m, dmax](double x) {
    const double e = eta_real(m.desc, x);
    return weight_sq(m, x) * std::pow(1.0 + e * e, static_cast<double>(dmax));
  };
  return build_quadrature(m.desc, w, order);
}

inline QuadratureRule gram_rule(const EllSystem& s, const std::vector<long>& levels,
                                int order = 256) {
  long dmax = 0;
  for (long n : levels) dmax = std::max(dmax, n);
  auto w = [&s, dmax](double x) {
    const double e = eta_real(s.desc, x);
    return std::norm(phi_ell_0(s, Cplx(x, 0.0))) *
           std::pow(1.0 + e * e, static_cast<double>(dmax));
  };
  return build_quadrature(s.desc, w, order);
}

namespace detail {

/* Grid window for pointwise ordinary-regime checks: infinite ends truncated
 * by weight decay, finite ends pulled in by a 5% margin so inverse-power
 * singularities of the potential do not pollute the stencil. */
inline std::pair<double, double> interior_window(const ModifiedSystem& m) {
  const Range r = range_of(m.desc);
  auto w = [&](double x) { return weight_sq(m, x); };
  double lo = r.x1, hi = r.x2;
  const double plo = r.left_inf ? -8.0 : r.x1;
  const double phi = r.right_inf ? 8.0 : r.x2;
  double wmax = 0.0, xbest = 0.5 * (plo + phi);
  for (int i = 0; i < 400; ++i) {
    const double x = plo + (phi - plo) * (i + 0.5) / 400;
    try {
      const double v = std::abs(w(x));
      if (v > wmax) {
        wmax = v;
        xbest = x;
      }
    } catch (const pole_error&) {
    }
  }
  if (r.left_inf) lo = truncate_end(w, xbest, -1.0, xbest - plo, wmax);
  if (r.right_inf) hi = truncate_end(w, xbest, +1.0, phi - xbest, wmax);
  const double margin = 0.05 * (hi - lo);
  if (!r.left_inf) lo += margin;
  if (!r.right_inf) hi -= margin;
  return {lo, hi};
}

}  // namespace detail

/* Max-norm residual of -f'' + U f = E f on an interior grid; the second
 * derivative is a 5-point stencil sharpened once by Richardson extrapolation,
 * so the check never reuses the construction's own calculus. */
inline ResidualReport schrodinger_residual_qm(const ModifiedSystem& m, long n, int gridsize = 400,
                                              double tolerance = 1e-6) {
  if (!is_ordinary(m.desc.fam))
    throw regime_error("the differential residual applies to the ordinary regime");
  if (n < 0 || level_deleted(m, n)) throw parameter_error("level must survive the deletion");
  const auto [lo, hi] = detail::interior_window(m);
  const double h = (hi - lo) / (2.0 * gridsize);
  const double en = energy(m.desc, n);
  auto f = [&](double x) { return modified_eigenfunction(m, n, x); };
  double fmax = 0.0;
  std::vector<double> xs(gridsize), fv(gridsize);
  for (int i = 0; i < gridsize; ++i) {
    xs[i] = lo + (hi - lo) * (i + 0.5) / gridsize;
    fv[i] = f(xs[i]);
    fmax = std::max(fmax, std::abs(fv[i]));
  }
  auto stencil = [&](double x, double step) {
    return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) - f(x - 2 * step)) /
           (12 * step * step);
  };
  double worst = 0.0;
  for (int i = 0; i < gridsize; ++i) {
    const double x = xs[i];
    const double fpp = (16.0 * stencil(x, 0.5 * h) - stencil(x, h)) / 15.0;
    const double res = -fpp + (modified_potential_U(m, x) - en) * fv[i];
    worst = std::max(worst, std::abs(res));
  }
  worst /= (std::abs(en) + 1.0) * std::max(fmax, 1e-300);
  return make_report("schrodinger-residual", worst, tolerance,
                     {{"family", family_name(m.desc.fam)},
                      {"level", std::to_string(n)},
                      {"gridsize", std::to_string(gridsize)}});
}

/* Residual of the difference Schroedinger equation, assembled through the
 * square-root-free factorised route: the ratio form in calP_mu and calP_n
 * with the canonical deformed potential. */
inline ResidualReport difference_residual_dqm(const ModifiedSystem& m, long n,
                                              const std::vector<double>& points,
                                              double tolerance = 1e-8) {
  if (is_ordinary(m.desc.fam))
    throw regime_error("the difference residual applies to the discrete regime");
  if (n < 0 || level_deleted(m, n)) throw parameter_error("level must survive the deletion");
  const SystemDescriptor& d = m.desc;
  const double gam = gamma_d(d);
  const Poly<double> pmu = modified_poly(m, m.del.mu);
  const Poly<double> pn = modified_poly(m, n);
  const double de = energy(d, n) - energy(d, m.del.mu);
  double worst = 0.0;
  long skipped = 0;
  for (double x : points) {
    try {
      const Cplx xc(x, 0.0), ig(0.0, gam);
      const Cplx vb = dqm_modified_V(m, pmu, xc);
      const Cplx vbs = dqm_modified_Vstar(m, pmu, xc);
      const Cplx e0 = eta_of(d, xc), em = eta_of(d, xc - ig), ep = eta_of(d, xc + ig);
      const Cplx pm0 = poly_eval(pmu, e0), pmm = poly_eval(pmu, em), pmp = poly_eval(pmu, ep);
      if (std::abs(pmm) < 1e-12 || std::abs(pmp) < 1e-12) {
        ++skipped;
        continue;
      }
      const Cplx pn0 = poly_eval(pn, e0), pnm = poly_eval(pn, em), pnp = poly_eval(pn, ep);
      const Cplx t1 = vb * (pm0 * pnm / pmm - pn0);
      const Cplx t2 = vbs * (pm0 * pnp / pmp - pn0);
      const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(de * pn0), 1e-30});
      worst = std::max(worst, std::abs(t1 + t2 - de * pn0) / scale);
    } catch (const pole_error&) {
      ++skipped;
    }
  }
  return make_report("difference-residual", worst, tolerance,
                     {{"family", family_name(d.fam)},
                      {"level", std::to_string(n)},
                      {"points", std::to_string(points.size())},
                      {"skipped", std::to_string(skipped)}});
}

struct SignChanges {
  long count = 0;
  bool stable = true;
};

namespace detail {

/* Comparisons run between consecutive nonzero samples, so a sample landing
 * exactly on a zero still yields one bracketed crossing. */
inline std::vector<double> bracket_zeros(const std::function<double(double)>& f, double lo,
                                         double hi, int samples) {
  std::vector<double> zs;
  double xp = lo, vp = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double v = f(x);
    if (v == 0.0) continue;
    if (vp != 0.0 && std::signbit(vp) != std::signbit(v)) {
      double a = xp, b = x, fa = vp;
      for (int it = 0; it < 80; ++it) {
        const double c = 0.5 * (a + b), fc = f(c);
        if (fc == 0.0) {
          a = b = c;
          break;
        }
        if (std::signbit(fc) == std::signbit(fa)) {
          a = c;
          fa = fc;
        } else {
          b = c;
        }
      }
      if (std::signbit(f(a)) != std::signbit(f(b)) || f(a) == 0.0 || f(b) == 0.0)
        zs.push_back(0.5 * (a + b));
    }
    xp = x;
    vp = v;
  }
  return zs;
}

inline long sign_changes_once(const std::function<double(double)>& f, double lo, double hi,
                              int samples) {
  return static_cast<long>(bracket_zeros(f, lo, hi, samples).size());
}

}  // namespace detail

/* Bisection-confirmed sign changes over a dense sample; a lower bound, with
 * stability meaning the count survives doubling the sample. */
inline SignChanges count_sign_changes(const std::function<double(double)>& f, double lo, double hi,
                                      int samples = 2000) {
  const long c1 = detail::sign_changes_once(f, lo, hi, samples);
  const long c2 = detail::sign_changes_once(f, lo, hi, 2 * samples);
  return {std::max(c1, c2), c1 == c2};
}

struct InterlacingResult {
  bool holds = false;
  bool determinate = false;
};

/* Zeros of consecutive seed eigenfunctions must alternate strictly.  Both
 * zero sets are located in eta, where the sinusoidal coordinate is monotone
 * across the range; windows with an unbounded eta image widen until the
 * expected zero counts appear. */
inline InterlacingResult interlacing_check(const SystemDescriptor& d, long j, int samples = 4000) {
  if (j < 0) throw parameter_error("level must be non-negative");
  const Range r = range_of(d);
  auto win = scan_window(d, static_cast<int>(j) + 1);
  const Poly<double> pa = poly_P(d, j);
  const Poly<double> pb = poly_P(d, j + 1);
  auto fa = [&](double e) { return poly_eval(pa, e); };
  auto fb = [&](double e) { return poly_eval(pb, e); };
  std::vector<double> za, zb;
  for (int attempt = 0; attempt < 5; ++attempt) {
    za = detail::bracket_zeros(fa, win.first, win.second, samples);
    zb = detail::bracket_zeros(fb, win.first, win.second, samples);
    if (za.size() == static_cast<std::size_t>(j) && zb.size() == static_cast<std::size_t>(j + 1))
      break;
    if (!r.right_inf) break;
    win.second *= 2.0;
    if (r.left_inf && win.first < 0.0) win.first *= 2.0;
    samples *= 2;
  }
  const auto za2 = detail::bracket_zeros(fa, win.first, win.second, 2 * samples);
  const auto zb2 = detail::bracket_zeros(fb, win.first, win.second, 2 * samples);
  InterlacingResult out;
  out.determinate = za.size() == static_cast<std::size_t>(j) &&
                    zb.size() == static_cast<std::size_t>(j + 1) && za2.size() == za.size() &&
                    zb2.size() == zb.size();
  if (!out.determinate) return out;
  out.holds = true;
  for (std::size_t k = 0; k < za.size(); ++k)
    if (!(zb[k] < za[k] && za[k] < zb[k + 1])) out.holds = false;
  return out;
}

}  // namespace kadel
