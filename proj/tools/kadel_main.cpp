#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kadel/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kadel;

namespace {

struct JobSpec {
  std::string family;
  std::string params;
  std::string del;
  int ell = -1;
  std::string levels;
  int grid = 400;
  std::string out = ".";
  bool force = false;
  double tolerance = 0.0;
};

/* Shortest decimal that parses back to the same double. */
std::string g17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string rat_str(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string cplx_str(const Cplx& z) {
  if (z.imag() == 0.0) return g17(z.real());
  std::string s = g17(z.real());
  if (z.imag() >= 0.0) s += "+";
  return s + g17(z.imag()) + "i";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw parameter_error("not a numeric literal: '" + s + "'");
  return v;
}

/* a+bi literals: "0.3", "-0.2", "0.1+0.2i", "0.2i", "-i". */
Cplx parse_complex(const std::string& s) {
  if (s.empty()) throw parameter_error("empty complex literal");
  if (s.back() != 'i') return Cplx(parse_double(s), 0.0);
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (cut == std::string::npos) return Cplx(0.0, imag_of(body));
  return Cplx(parse_double(body.substr(0, cut)), imag_of(body.substr(cut)));
}

SystemDescriptor parse_descriptor(const JobSpec& spec) {
  SystemDescriptor d;
  d.fam = family_from_string(spec.family);
  std::map<std::string, std::string> kv;
  for (const std::string& item : split(spec.params, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw parameter_error("parameter assignments must look like k=v: '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  std::string v;
  switch (d.fam) {
    case Family::H:
      break;
    case Family::L:
      if (!(v = take("g")).empty()) d.g = rational_from_string(v);
      break;
    case Family::J:
      if (!(v = take("g")).empty()) d.g = rational_from_string(v);
      if (!(v = take("h")).empty()) d.h = rational_from_string(v);
      break;
    case Family::MP:
      if (!(v = take("a")).empty()) d.a = parse_double(v);
      break;
    case Family::CH:
      for (int i = 0; i < 2; ++i)
        if (!(v = take("a" + std::to_string(i + 1))).empty()) d.ai[i] = parse_complex(v);
      break;
    case Family::W:
    case Family::AW:
      for (int i = 0; i < 4; ++i)
        if (!(v = take("a" + std::to_string(i + 1))).empty()) d.ai[i] = parse_complex(v);
      if (d.fam == Family::AW && !(v = take("q")).empty()) d.q = parse_double(v);
      break;
  }
  if (!kv.empty())
    throw parameter_error("unknown parameter '" + kv.begin()->first + "' for family " +
                          spec.family);
  validate(d);
  return d;
}

std::string canonical_params(const SystemDescriptor& d) {
  switch (d.fam) {
    case Family::H: return "";
    case Family::L: return "g=" + rat_str(d.g);
    case Family::J: return "g=" + rat_str(d.g) + ",h=" + rat_str(d.h);
    case Family::MP: return "a=" + g17(d.a);
    case Family::CH: return "a1=" + cplx_str(d.ai[0]) + ",a2=" + cplx_str(d.ai[1]);
    case Family::W:
    case Family::AW: {
      std::string s;
      for (int i = 0; i < 4; ++i) {
        if (i) s += ",";
        s += "a" + std::to_string(i + 1) + "=" + cplx_str(d.ai[i]);
      }
      if (d.fam == Family::AW) s += ",q=" + g17(d.q);
      return s;
    }
  }
  return "";
}

std::vector<long> parse_deletion(const JobSpec& spec) {
  if (!spec.del.empty() && spec.ell >= 0)
    throw parameter_error("choose either --delete or --ell, not both");
  std::vector<long> lv;
  if (spec.ell >= 0)
    for (long k = 1; k <= spec.ell; ++k) lv.push_back(k);
  for (const std::string& t : split(spec.del, ',')) {
    std::size_t pos = 0;
    const long n = std::stol(t, &pos);
    if (pos != t.size() || n < 0) throw parameter_error("bad deletion level '" + t + "'");
    lv.push_back(n);
  }
  return lv;
}

std::vector<long> requested_levels(const JobSpec& spec, const ModifiedSystem& m, int how_many) {
  std::vector<long> lv;
  if (!spec.levels.empty()) {
    for (const std::string& t : split(spec.levels, ',')) {
      std::size_t pos = 0;
      const long n = std::stol(t, &pos);
      if (pos != t.size() || n < 0) throw parameter_error("bad level '" + t + "'");
      lv.push_back(n);
    }
    return lv;
  }
  for (long n = 0; static_cast<int>(lv.size()) < how_many; ++n)
    if (!level_deleted(m, n)) lv.push_back(n);
  return lv;
}

std::string join_long(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

/* Real sampling points inside the range, margins sized per end type. */
std::vector<double> check_points(const SystemDescriptor& d, int count) {
  const Range r = range_of(d);
  double lo, hi;
  if (r.left_inf && r.right_inf) {
    lo = -3.9;
    hi = 4.1;
  } else if (r.right_inf) {
    lo = r.x1 + 0.25;
    hi = r.x1 + 6.05;
  } else {
    const double w = r.x2 - r.x1;
    lo = r.x1 + 0.07 * w;
    hi = r.x2 - 0.05 * w;
  }
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i) xs[i] = lo + (hi - lo) * (i + 0.37) / count;
  return xs;
}

/* Deforming-polynomial print normalization: the raw determinant divided by
 * prod_{d in D} c_d d!  (ordinary), with d! replaced by the sinh product for
 * AW.  For D = {1..ell} this reproduces the classical closed forms. */
Poly<Rational> normalized_xi(const ModifiedSystem& m) {
  Rational den(1);
  for (long dl : m.del.levels) den *= factorial_rat(dl) * leading_c_rat(m.desc, dl);
  return poly_scale(m.xi, Rational(1) / den);
}

Poly<double> normalized_Q(const ModifiedSystem& m) {
  double den = 1.0;
  for (long dl : m.del.levels) {
    double brace = 1.0;
    if (m.desc.fam == Family::AW) {
      const double gam = gamma_d(m.desc);
      for (long j = 1; j <= dl; ++j) brace *= std::sinh(-0.5 * j * gam);
    } else {
      brace = to_double(factorial_rat(dl));
    }
    den *= brace * leading_c(m.desc, dl);
  }
  return poly_scale(m.Q, 1.0 / den);
}

int cmd_build(const JobSpec& spec) {
  const SystemDescriptor d = parse_descriptor(spec);
  const std::vector<long> lv = parse_deletion(spec);
  const ModifiedSystem m = build_modified(d, lv, spec.force);
  std::printf("family: %s\n", family_name(d.fam).c_str());
  std::printf("params: %s\n", canonical_params(d).c_str());
  std::printf("delete: %s\n", join_long(m.del.levels).c_str());
  std::printf("mu: %ld\n", m.del.mu);
  if (m.admissible) {
    std::printf("admissible: yes\n");
  } else {
    std::printf("admissible: no (witness m=%ld, forced)\n",
                admissibility_witness(m.del.levels));
  }
  std::printf("weight-regular: %s\n", m.weight_zero_free ? "yes" : "no");
  if (is_ordinary(d.fam)) {
    const Poly<Rational> xi = normalized_xi(m);
    std::string s;
    for (std::size_t i = 0; i < xi.coeff.size(); ++i) {
      if (i) s += ", ";
      s += rat_str(xi.coeff[i]);
    }
    std::printf("xi: [%s]\n", s.c_str());
  } else {
    const Poly<double> q = normalized_Q(m);
    std::string s;
    for (std::size_t i = 0; i < q.coeff.size(); ++i) {
      if (i) s += ", ";
      s += g17(q.coeff[i]);
    }
    std::printf("Q: [%s]\n", s.c_str());
  }
  for (long n : requested_levels(spec, m, 5)) {
    if (level_deleted(m, n)) {
      std::printf("P n=%ld: deleted\n", n);
      continue;
    }
    std::printf("P n=%ld: degree %ld\n", n, modified_poly(m, n).degree());
  }
  return 0;
}

json metadata_json(const ResidualReport& r) {
  json md = json::object();
  for (const auto& [k, v] : r.metadata) md[k] = v;
  return md;
}

ResidualReport boolean_report(const std::string& check, bool ok,
                              std::vector<std::pair<std::string, std::string>> md = {}) {
  return make_report(check, ok ? 0.0 : 1.0, 0.0, std::move(md));
}

ResidualReport failed_report(const std::string& check, double tol, const std::string& why) {
  ResidualReport r = make_report(check, 1.0, tol, {{"skipped", why}});
  r.passed = false;
  return r;
}

void run_gram_checks(const ModifiedSystem& m, const std::vector<long>& levels, double tol_diag,
                     std::vector<ResidualReport>& out) {
  try {
    const auto rule = gram_rule(m, levels, 256);
    const auto g = gram_matrix(m, levels, rule);
    double off = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = i + 1; j < g.cols(); ++j)
        off = std::max(off, std::abs(g(i, j)) / std::sqrt(g(i, i) * g(j, j)));
    out.push_back(make_report("gram-offdiag", off, 1e-8, {{"levels", join_long(levels)}}));
    const long ell = m.del.ell;
    const bool contiguous = !m.del.levels.empty() && m.del.levels.front() == 1 &&
                            m.del.levels.back() == ell &&
                            ell == static_cast<long>(m.del.levels.size());
    if (m.del.levels.empty()) {
      double rel = 0.0;
      for (Eigen::Index i = 0; i < g.rows(); ++i) {
        const long n = levels[static_cast<std::size_t>(i)];
        const double hn = norm_h(m.desc, n);
        rel = std::max(rel, std::abs(g(i, i) - hn) / hn);
      }
      out.push_back(make_report("gram-diagonal", rel, tol_diag, {{"levels", join_long(levels)}}));
    } else if (contiguous) {
      const EllSystem s = make_ell_system(m.desc, ell);
      const auto erule = gram_rule(s, levels, 256);
      const auto ge = gram_matrix(s, levels, erule);
      double rel = 0.0;
      for (Eigen::Index i = 0; i < ge.rows(); ++i) {
        const long n = levels[static_cast<std::size_t>(i)];
        const double hn = h_ell_n(m.desc, ell, n);
        rel = std::max(rel, std::abs(ge(i, i) - hn) / hn);
      }
      out.push_back(make_report("gram-diagonal", rel, tol_diag, {{"levels", join_long(levels)}}));
    }
  } catch (const std::exception& e) {
    out.push_back(failed_report("gram-offdiag", 1e-8, e.what()));
  }
}

int cmd_verify(const JobSpec& spec) {
  const SystemDescriptor d = parse_descriptor(spec);
  const std::vector<long> lv = parse_deletion(spec);
  const ModifiedSystem m = build_modified(d, lv, spec.force);
  const std::vector<long> levels = requested_levels(spec, m, is_ordinary(d.fam) ? 5 : 4);
  for (long n : levels)
    if (level_deleted(m, n))
      throw parameter_error("level " + std::to_string(n) + " is deleted; choose surviving levels");
  const double tol_eig = spec.tolerance > 0.0 ? spec.tolerance
                         : is_ordinary(d.fam) ? 1e-6
                                              : 1e-8;
  const auto pts = check_points(d, 20);
  std::vector<ResidualReport> checks;
  bool indeterminate = false;

  checks.push_back(boolean_report("admissible", m.admissible,
                                  {{"delete", join_long(m.del.levels)}}));
  checks.push_back(boolean_report("weight-regular", m.weight_zero_free));

  if (is_ordinary(d.fam)) {
    double r = 0.0;
    for (double x : pts) r = std::max(r, shape_invariance_residual_qm(d, x));
    checks.push_back(make_report("shape-invariance", r, 1e-10));
    for (long n : levels) {
      try {
        checks.push_back(schrodinger_residual_qm(m, n, spec.grid, tol_eig));
      } catch (const std::exception& e) {
        checks.push_back(failed_report("schrodinger-residual", tol_eig, e.what()));
      }
    }
  } else {
    double rm = 0.0, ra = 0.0, rz = 0.0, rp = 0.0;
    for (double x : pts) {
      rm = std::max(rm, shape_invariance_residual_dqm_mult(d, Cplx(x, 0.0)));
      ra = std::max(ra, shape_invariance_residual_dqm_add(d, Cplx(x, 0.0)));
      rz = std::max(rz, zero_mode_residual(d, x));
      try {
        rp = std::max(rp, prodV_residual(m, Cplx(x, 0.0)));
      } catch (const pole_error&) {
      }
    }
    checks.push_back(make_report("shape-invariance-mult", rm, 1e-9));
    checks.push_back(make_report("shape-invariance-add", ra, 1e-9));
    checks.push_back(make_report("zero-mode", rz, 1e-9));
    checks.push_back(make_report("prodV-chain", rp, 1e-8));
    for (long n : levels) {
      try {
        checks.push_back(difference_residual_dqm(m, n, pts, tol_eig));
      } catch (const std::exception& e) {
        checks.push_back(failed_report("difference-residual", tol_eig, e.what()));
      }
    }
  }

  run_gram_checks(m, levels, 1e-6, checks);

  for (long j = 0; j <= 3; ++j) {
    const auto il = interlacing_check(d, j);
    if (!il.determinate) indeterminate = true;
    checks.push_back(boolean_report("interlacing", il.holds && il.determinate,
                                    {{"j", std::to_string(j)},
                                     {"determinate", il.determinate ? "yes" : "no"}}));
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    std::printf("%-24s %s  max=%.3e tol=%.1e\n", c.check.c_str(),
                c.passed ? "PASS" : "FAIL", c.max_residual, c.tolerance);
  }

  json rep;
  rep["schema"] = "kadel-report/1";
  rep["family"] = family_name(d.fam);
  rep["params"] = canonical_params(d);
  rep["delete"] = join_long(m.del.levels);
  rep["force"] = spec.force;
  rep["grid"] = spec.grid;
  rep["indeterminate"] = indeterminate;
  rep["all_passed"] = all;
  rep["checks"] = json::array();
  for (const auto& c : checks)
    rep["checks"].push_back({{"check", c.check},
                             {"max_residual", c.max_residual},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed},
                             {"metadata", metadata_json(c)}});
  fs::create_directories(spec.out);
  const fs::path out = fs::path(spec.out) / "verify_report.json";
  write_file_atomic(out, rep.dump(2) + "\n");
  std::printf("report: %s\n", out.string().c_str());
  if (indeterminate) return 4;
  return all ? 0 : 1;
}

std::pair<double, double> table_window(const ModifiedSystem& m) {
  const Range r = range_of(m.desc);
  double lo, hi;
  if (!r.left_inf && !r.right_inf) {
    lo = r.x1;
    hi = r.x2;
  } else {
    const auto rule =
        build_quadrature(m.desc, [&](double x) { return weight_sq(m, x); }, 64);
    lo = rule.window.first;
    hi = rule.window.second;
  }
  const double margin = 1e-3 * (hi - lo);
  if (!r.left_inf) lo += margin;
  if (!r.right_inf) hi -= margin;
  return {lo, hi};
}

int cmd_table(const JobSpec& spec) {
  const SystemDescriptor d = parse_descriptor(spec);
  const std::vector<long> lv = parse_deletion(spec);
  const ModifiedSystem m = build_modified(d, lv, spec.force);
  const std::vector<long> levels = requested_levels(spec, m, 4);
  const auto [lo, hi] = table_window(m);
  const int grid = std::max(2, spec.grid);
  fs::create_directories(spec.out);
  const fs::path dir(spec.out);
  long skipped = 0;

  std::vector<Poly<double>> ps;
  ps.reserve(levels.size());
  for (long n : levels) {
    if (level_deleted(m, n))
      throw parameter_error("level " + std::to_string(n) + " is deleted; choose surviving levels");
    Poly<double> p = modified_poly(m, n);
    if (p.coeff(p.degree()) < 0.0) p = poly_scale(p, -1.0);
    ps.push_back(std::move(p));
  }
  const Poly<double> pmu = is_ordinary(d.fam) ? Poly<double>{} : modified_poly(m, m.del.mu);

  {
    std::string csv = is_ordinary(d.fam) ? "x,U\n" : "x,re_V,im_V\n";
    for (int i = 0; i < grid; ++i) {
      const double x = lo + (hi - lo) * i / (grid - 1);
      try {
        if (is_ordinary(d.fam)) {
          csv += g17(x) + "," + g17(modified_potential_U(m, x)) + "\n";
        } else {
          const Cplx v = dqm_modified_V(m, pmu, Cplx(x, 0.0));
          csv += g17(x) + "," + g17(v.real()) + "," + g17(v.imag()) + "\n";
        }
      } catch (const pole_error&) {
        ++skipped;
      }
    }
    write_file_atomic(dir / "potential.csv", csv);
  }

  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::string csv = "x,phi\n";
    for (int i = 0; i < grid; ++i) {
      const double x = lo + (hi - lo) * i / (grid - 1);
      try {
        double val;
        if (is_ordinary(d.fam)) {
          val = psibar(m, x) * poly_eval(ps[k], eta_real(d, x));
        } else {
          const double pv = poly_eval(ps[k], eta_real(d, x));
          const double sq = dqm_modified_eigenfunction_sq(m, ps[k], x);
          val = (pv < 0.0 ? -1.0 : 1.0) * std::sqrt(sq);
        }
        csv += g17(x) + "," + g17(val) + "\n";
      } catch (const pole_error&) {
        ++skipped;
      }
    }
    write_file_atomic(dir / ("eigenfunction_n" + std::to_string(levels[k]) + ".csv"), csv);
  }

  {
    std::string csv = "n,degree,coefficients_constant_first\n";
    for (std::size_t k = 0; k < levels.size(); ++k) {
      csv += std::to_string(levels[k]) + "," + std::to_string(ps[k].degree());
      for (double c : ps[k].coeff) csv += "," + g17(c);
      csv += "\n";
    }
    write_file_atomic(dir / "polynomials.csv", csv);
  }

  json meta;
  meta["schema"] = "kadel-table/1";
  meta["family"] = family_name(d.fam);
  meta["params"] = canonical_params(d);
  meta["delete"] = join_long(m.del.levels);
  meta["mu"] = m.del.mu;
  meta["grid"] = grid;
  meta["window"] = {lo, hi};
  meta["levels"] = levels;
  meta["skipped_rows"] = skipped;
  meta["E"] = json::object();
  for (long n : levels) meta["E"][std::to_string(n)] = energy(d, n);
  try {
    const auto rule = gram_rule(m, levels, 256);
    const auto g = gram_matrix(m, levels, rule);
    meta["h"] = json::object();
    for (std::size_t k = 0; k < levels.size(); ++k)
      meta["h"][std::to_string(levels[k])] = g(static_cast<Eigen::Index>(k),
                                               static_cast<Eigen::Index>(k));
  } catch (const std::exception& e) {
    meta["h"] = nullptr;
    meta["h_error"] = e.what();
  }
  write_file_atomic(dir / "metadata.json", meta.dump(2) + "\n");
  std::printf("tables written to %s\n", dir.string().c_str());
  return 0;
}

void add_common(CLI::App* cmd, JobSpec& spec) {
  cmd->add_option("--family", spec.family, "family tag")
      ->required()
      ->check(CLI::IsMember({"H", "L", "J", "MP", "CH", "W", "AW"}));
  cmd->add_option("--params", spec.params, "comma-separated k=v parameter assignments");
  cmd->add_option("--delete", spec.del, "comma-separated levels to delete");
  cmd->add_option("--ell", spec.ell, "delete the contiguous block 1..N");
  cmd->add_option("--levels", spec.levels, "levels to report/tabulate");
  cmd->add_option("--grid", spec.grid, "grid size for residuals and tables");
  cmd->add_option("--out", spec.out, "output directory");
  cmd->add_flag("--force", spec.force, "build even when the deletion is inadmissible");
  cmd->add_option("--tolerance", spec.tolerance, "override the eigen-equation tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krein-Adler deformations of solvable quantum systems"};
  app.require_subcommand(1);
  JobSpec spec;
  CLI::App* build = app.add_subcommand("build", "construct a system and print its summary");
  CLI::App* verify = app.add_subcommand("verify", "run the residual checks and write a report");
  CLI::App* table = app.add_subcommand("table", "write CSV tables and JSON metadata");
  add_common(build, spec);
  add_common(verify, spec);
  add_common(table, spec);
  CLI11_PARSE(app, argc, argv);
  try {
    if (build->parsed()) return cmd_build(spec);
    if (verify->parsed()) return cmd_verify(spec);
    return cmd_table(spec);
  } catch (const inadmissible_error& e) {
    std::fprintf(stderr, "inadmissible deletion: %s\n", e.what());
    return 2;
  } catch (const parameter_error& e) {
    std::fprintf(stderr, "parameter violation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
