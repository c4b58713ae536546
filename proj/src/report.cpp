#include "fraclie/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fraclie/oracle.hpp"
#include "fraclie/ratfun.hpp"

namespace fraclie {

namespace {

using json = nlohmann::ordered_json;

template <class F>
auto stage(Report& r, const std::string& name, F&& body) {
  auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      r.timing.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    } else {
      auto v = body();
      r.timing.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
      return v;
    }
  } catch (const Error& e) {
    throw Error("stage " + name + ": " + e.what());
  }
}

std::string equation_text(const PDESystem& sys, const Equation& eq, Style style = Style::text) {
  std::string dep = sys.names.dep_name(eq.dep);
  std::string rhs = to_string(simplify(eq.F + eq.H), sys.names, style);
  if (style == Style::latex) return "\\partial_t^{" + sys.names.alpha + "} " + dep + " &= " + rhs;
  return "Dt^" + sys.names.alpha + "(" + dep + ") = " + rhs;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string completeness(const Report& r) {
  std::vector<std::string> tpl;
  for (const auto& t : r.basis.templates) tpl.push_back(to_string(t, r.sys.names));
  return "complete relative to polynomial degree " + std::to_string(r.basis.poly_degree) + ", h-templates {" +
         join(tpl, ", ") + "} and the listed assumptions";
}

bool is_translation(const Generator& g) {
  if (!g.tau.is_zero()) return false;
  for (const auto& e : g.eta)
    if (!e.is_zero()) return false;
  int ones = 0;
  for (const auto& x : g.xi) {
    if (x.is_one()) ++ones;
    else if (!x.is_zero()) return false;
  }
  return ones == 1;
}

// kernel solution c_s(remaining x) t^(alpha-1) of a reduced system with zero right-hand sides
std::optional<std::vector<Expr>> kernel_solution(const PDESystem& sys, const PDESystem& reduced, int removed) {
  for (const auto& eq : reduced.equations)
    if (!eq.rhs.is_zero()) return std::nullopt;
  std::vector<Expr> args;
  for (int i = 0; i < sys.p(); ++i)
    if (i != removed) args.push_back(sys.x(i));
  auto al = to_exponent(sys.alpha());
  std::vector<Expr> sol;
  for (int s = 0; s < sys.q(); ++s) {
    std::string name = "C_" + sys.names.dep_name(s);
    Expr c = args.empty() ? Expr::param(name) : Expr::fn(name, args, {}, FnRole::opaque);
    sol.push_back(simplify(c * pow(sys.t(), *al - ExponentForm(1))));
  }
  return sol;
}

void reduce_all(Report& r) {
  const PDESystem& sys = r.sys;
  for (const auto& g : r.basis.generators) {
    ReductionResult red;
    red.generator = g.str(sys.names);
    if (is_translation(g)) {
      int slot = 0;
      while (!g.xi[size_t(slot)].is_one()) ++slot;
      PDESystem rs = translation_reduction(sys, g);
      red.kind = "translation";
      for (const auto& eq : rs.equations) red.lines.push_back(equation_text(rs, eq));
      if (auto sol = kernel_solution(sys, rs, slot)) {
        ExactCheck ec = verify_exact_solution(sys, *sol);
        CheckResult c;
        std::vector<std::string> parts;
        for (int s = 0; s < sys.q(); ++s)
          parts.push_back(sys.names.dep_name(s) + " = " + to_string((*sol)[size_t(s)], sys.names));
        c.name = "exact solution " + join(parts, ", ");
        c.ok = ec.ok;
        for (size_t s = 0; s < ec.residuals.size(); ++s)
          c.detail.push_back("residual " + sys.names.dep_name(int(s)) + ": " + to_string(ec.residuals[s], sys.names));
        r.checks.push_back(c);
      }
    } else {
      try {
        EKReduction ek = scaling_similarity(sys, g);
        red.kind = "scaling";
        red.lines = ek.similarity_text(sys.names);
        for (const auto& o : ek.operator_text(sys.names)) red.lines.push_back(o);
      } catch (const NotScaling&) {
        red.kind = "none";
      }
    }
    r.reductions.push_back(red);
  }
}

// numeric oracle against the symbolic power rule on each usable h-template
CheckResult oracle_check(const Report& r, unsigned seed) {
  const PDESystem& sys = r.sys;
  CheckResult c;
  c.name = "numeric oracle vs power rule (seed " + std::to_string(seed) + ")";
  std::mt19937 rng(seed);
  std::vector<Rational> alphas;
  if (sys.alpha_value) alphas.push_back(*sys.alpha_value);
  else
    for (int k = 0; k < 3; ++k) alphas.push_back(rat(long(rng() % 15) + 1, 16));
  const std::vector<double> grid = {0.5, 1.0, 2.0};
  AssumptionRegistry reg = sys.assumptions();
  for (const auto& tpl : r.basis.templates) {
    PowerSum ps, d;
    try {
      ps = PowerSum::from_expr(tpl, sys.t());
      d = rl_derivative(ps, sys.alpha(), reg);
    } catch (const Error&) {
      continue;
    }
    Expr dexpr = d.to_expr(sys.t());
    for (const Rational& al : alphas) {
      std::map<std::string, Rational> vals = {{sys.names.alpha, al}};
      for (int i = 0; i < sys.p(); ++i) vals[sys.names.space_name(i)] = rat(3, 2);
      std::vector<OracleValue> num = numeric_rl_oracle(numeric_terms(ps, vals, sys.names), al, grid);
      double worst = 0;
      for (size_t k = 0; k < grid.size(); ++k) {
        std::map<std::string, double> dv = {{sys.names.t, grid[k]}};
        for (const auto& [n, v] : vals) dv[n] = v.get_d();
        double exact = evaluate(dexpr, dv, sys.names);
        worst = std::max(worst, std::abs(exact - num[k].value) / std::max(1.0, std::abs(exact)));
      }
      bool ok = worst < 1e-8;
      c.ok = c.ok && ok;
      std::ostringstream os;
      os << to_string(tpl, sys.names) << " at " << sys.names.alpha << " = " << al.get_str() << ": max error "
         << worst << (ok ? "" : " (exceeds 1e-8)");
      c.detail.push_back(os.str());
    }
  }
  return c;
}

json generator_json(const PDESystem& sys, const Generator& g, const VerifyReport* cert) {
  json j;
  j["generator"] = g.str(sys.names);
  j["tau"] = to_string(g.tau, sys.names);
  json xi = json::object(), eta = json::object();
  for (int i = 0; i < sys.p(); ++i) xi[sys.names.space_name(i)] = to_string(g.xi[size_t(i)], sys.names);
  for (int s = 0; s < sys.q(); ++s) eta[sys.names.dep_name(s)] = to_string(g.eta[size_t(s)], sys.names);
  j["xi"] = xi;
  j["eta"] = eta;
  if (cert) j["certificate"] = {{"ok", cert->ok}, {"residuals", cert->residuals}};
  return j;
}

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '_': out += "\\_"; break;
      case '^': out += "\\^{}"; break;
      case '&': out += "\\&"; break;
      case '%': out += "\\%"; break;
      case '#': out += "\\#"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '\\': out += "\\textbackslash{}"; break;
      default: out += c;
    }
  }
  return out;
}

std::string emit_json(const Report& r) {
  const PDESystem& sys = r.sys;
  json j;
  j["schema"] = 1;
  json params = json::array();
  for (const auto& p : sys.params) {
    static const char* kinds[] = {"none", "nonzero", "positive", "interval"};
    json pj = {{"name", p.name}, {"assumption", kinds[int(p.assumption)]}};
    if (p.assumption == ParamDecl::Assumption::interval) pj["interval"] = {p.lo.get_str(), p.hi.get_str()};
    params.push_back(pj);
  }
  json eqs = json::array();
  for (const auto& eq : sys.equations) eqs.push_back(equation_text(sys, eq));
  j["system"] = {{"name", r.input_name}, {"alpha", sys.alpha_value ? sys.alpha_value->get_str() : sys.names.alpha},
                 {"space", sys.names.space}, {"deps", sys.names.deps}, {"params", params},
                 {"equations", eqs}, {"source", emit_system(sys)}};

  json integer = json::array(), frac = json::array(), reduced = json::array();
  for (const auto& e : r.det.integer_eqs)
    integer.push_back({{"equation", sys.names.dep_name(e.eq)}, {"monomial", to_string(e.monomial, sys.names)},
                       {"expr", to_string(e.expr, sys.names)}});
  for (const auto& e : r.det.frac_eqs) frac.push_back(to_string(e, sys.names));
  for (const auto& e : r.reduced_det) reduced.push_back(to_string(e, sys.names));
  j["determining"] = {{"branch", branch_name(r.det.branch)}, {"fractional", frac}, {"integer", integer},
                      {"reduced", reduced}};

  json branches = json::array();
  for (const auto& b : r.basis.branches)
    branches.push_back({{"branch", branch_name(b.branch)}, {"dimension", b.dimension}, {"contributes", b.contributes}});
  std::vector<std::string> tpl;
  for (const auto& t : r.basis.templates) tpl.push_back(to_string(t, sys.names));
  j["assumptions"] = {{"genericity", r.basis.assumptions}, {"poly_degree", r.basis.poly_degree},
                      {"h_templates", tpl}, {"branches", branches}, {"notes", r.basis.notes},
                      {"completeness", completeness(r)}};

  json basis = json::array();
  for (size_t i = 0; i < r.basis.generators.size(); ++i)
    basis.push_back(generator_json(sys, r.basis.generators[i], &r.basis.certificates[i]));
  j["basis"] = basis;

  json reds = json::array();
  for (const auto& red : r.reductions)
    reds.push_back({{"generator", red.generator}, {"kind", red.kind}, {"result", red.lines}});
  j["reductions"] = reds;

  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string emit_text(const Report& r) {
  const PDESystem& sys = r.sys;
  std::ostringstream os;
  os << "system " << r.input_name << "\n";
  for (const auto& eq : sys.equations) os << "  " << equation_text(sys, eq) << "\n";
  os << "\ndetermining system (" << r.det.integer_eqs.size() << " integer-order equations, " << r.reduced_det.size()
     << " after autoreduction)\n";
  for (const auto& e : r.det.frac_eqs) os << "  " << to_string(e, sys.names) << " = 0\n";
  for (const auto& e : r.reduced_det) os << "  " << to_string(e, sys.names) << " = 0\n";
  os << "\nassumptions\n";
  for (const auto& a : r.basis.assumptions) os << "  " << a << "\n";
  os << "\nbasis, dimension " << r.basis.dimension() << " (" << completeness(r) << ")\n";
  for (size_t i = 0; i < r.basis.generators.size(); ++i)
    os << "  X" << i + 1 << " = " << r.basis.generators[i].str(sys.names) << "\n";
  for (const auto& b : r.basis.branches)
    os << "  branch " << branch_name(b.branch) << ": null space " << b.dimension
       << (b.contributes ? ", contributes" : ", nothing new") << "\n";
  for (const auto& n : r.basis.notes) os << "  note: " << n << "\n";
  if (!r.reductions.empty()) {
    os << "\nreductions\n";
    for (const auto& red : r.reductions) {
      os << "  " << red.generator << " [" << red.kind << "]\n";
      for (const auto& l : red.lines) os << "    " << l << "\n";
    }
  }
  if (!r.checks.empty()) {
    os << "\nchecks\n";
    for (const auto& c : r.checks) {
      os << "  " << (c.ok ? "ok   " : "FAIL ") << c.name << "\n";
      for (const auto& d : c.detail) os << "       " << d << "\n";
    }
  }
  return os.str();
}

std::string emit_latex(const Report& r) {
  const PDESystem& sys = r.sys;
  std::ostringstream os;
  os << "\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n";
  os << "\\section*{System " << latex_escape(r.input_name) << "}\n\\begin{align*}\n";
  for (size_t i = 0; i < sys.equations.size(); ++i)
    os << equation_text(sys, sys.equations[i], Style::latex) << (i + 1 < sys.equations.size() ? " \\\\\n" : "\n");
  os << "\\end{align*}\n\\section*{Determining system}\n\\begin{align*}\n";
  std::vector<std::string> rows;
  for (const auto& e : r.det.frac_eqs) rows.push_back(to_string(e, sys.names, Style::latex) + " &= 0");
  for (const auto& e : r.reduced_det) rows.push_back(to_string(e, sys.names, Style::latex) + " &= 0");
  os << join(rows, " \\\\\n") << "\n\\end{align*}\n";
  os << "\\section*{Assumptions}\n\\begin{itemize}\n";
  for (const auto& a : r.basis.assumptions) os << "\\item \\texttt{" << latex_escape(a) << "}\n";
  os << "\\item " << latex_escape(completeness(r)) << "\n\\end{itemize}\n";
  os << "\\section*{Basis}\n";
  if (r.basis.generators.empty()) {
    os << "No generators.\n";
  } else {
    os << "\\begin{align*}\n";
    rows.clear();
    for (size_t i = 0; i < r.basis.generators.size(); ++i)
      rows.push_back("X_{" + std::to_string(i + 1) + "} &= " + r.basis.generators[i].str(sys.names, Style::latex));
    os << join(rows, " \\\\\n") << "\n\\end{align*}\n";
  }
  if (!r.reductions.empty()) {
    os << "\\section*{Reductions}\n\\begin{itemize}\n";
    for (const auto& red : r.reductions)
      os << "\\item \\texttt{" << latex_escape(red.generator) << "} (" << red.kind << "): \\texttt{"
         << latex_escape(join(red.lines, "; ")) << "}\n";
    os << "\\end{itemize}\n";
  }
  if (!r.checks.empty()) {
    os << "\\section*{Checks}\n\\begin{itemize}\n";
    for (const auto& c : r.checks)
      os << "\\item " << (c.ok ? "ok" : "FAIL") << ": \\texttt{" << latex_escape(c.name) << "}\n";
    os << "\\end{itemize}\n";
  }
  os << "\\end{document}\n";
  return os.str();
}

}  // namespace

PDESystem apply_bindings(const PDESystem& sys, const std::vector<std::pair<std::string, Expr>>& bindings) {
  PDESystem out = sys;
  for (const auto& [name, value] : bindings) {
    const FnDecl* fd = nullptr;
    for (const auto& f : sys.fns)
      if (f.name == name) fd = &f;
    for (auto& eq : out.equations) {
      Bindings b;
      if (fd) {
        for (const auto& app : fn_apps_of(eq.rhs, FnRole::opaque)) {
          if (app.name() != name) continue;
          if (app.children().size() != 1 || !app.children()[0].is(Kind::Jet))
            throw SemanticError("binding for " + name + " needs a single dependent-variable argument");
          Expr arg = app.children()[0];
          Expr v = value;
          // the declared argument name refers to the jet in the application
          Expr declared = sys.u(int(std::find(sys.names.deps.begin(), sys.names.deps.end(), fd->args.at(0)) -
                                    sys.names.deps.begin()));
          if (declared != arg) v = substitute(v, Bindings{{declared, arg}});
          for (int d : app.deriv())
            for (int k = 0; k < d; ++k) v = partial_derivative(v, arg);
          b[app] = v;
        }
      } else if (sys.param(name)) {
        b[Expr::param(name)] = value;
      } else {
        throw SemanticError("let binds '" + name + "', which is neither a parameter nor a declared function");
      }
      if (!b.empty()) eq.rhs = substitute(eq.rhs, b);
      split_rhs(eq);
    }
    if (fd) out.fns.erase(std::remove_if(out.fns.begin(), out.fns.end(), [&](const FnDecl& f) { return f.name == name; }),
                          out.fns.end());
  }
  return out;
}

Report run_pipeline(const PipelineConfig& cfg) {
  Report r;
  r.input_name = cfg.input_name;
  r.sys = stage(r, "parse", [&] { return parse_system(cfg.input_text); });
  SolverConfig sc = cfg.solver;
  stage(r, "templates", [&] {
    for (const auto& t : cfg.h_templates) sc.h_templates.push_back(parse_expr(t, r.sys));
  });
  r.det = stage(r, "determining", [&] { return build_determining_system(r.sys); });
  r.reduced_det = stage(r, "autoreduce", [&] {
    std::vector<Expr> v;
    for (const auto& e : r.det.integer_eqs) v.push_back(e.expr);
    return autoreduce(v);
  });
  r.basis = stage(r, "solve", [&] { return solve(r.sys, r.det, sc); });
  stage(r, "auxiliary", [&] {
    CheckResult c;
    c.name = "auxiliary series conditions up to k = 6 on both branches";
    for (Branch b : {Branch::zero, Branch::nonzero}) {
      AuxCheck a = check_aux_conditions(AnsatzGenerator::make(r.sys, b), r.sys, 6);
      c.ok = c.ok && a.ok;
      for (const auto& res : a.residuals)
        c.detail.push_back(branch_name(b) + " k=" + std::to_string(res.k) + " " + res.what + ": " +
                           to_string(res.residual, r.sys.names));
    }
    r.checks.push_back(c);
  });
  if (cfg.generator_text) {
    stage(r, "verify-generator", [&] {
      GeneratorSpec spec = parse_generator(*cfg.generator_text, r.sys);
      PDESystem bound = apply_bindings(r.sys, spec.bindings);
      Generator g{spec.tau, spec.xi, spec.eta};
      CheckResult c;
      c.name = "generator " + g.str(r.sys.names);
      try {
        VerifyReport v = verify_generator(bound, g);
        c.ok = v.ok;
        c.detail = v.residuals;
        if (v.ok) c.detail.push_back("all residuals are exactly zero");
      } catch (const ShapeViolation& e) {
        c.ok = false;
        c.detail.push_back(e.what());
      }
      r.checks.push_back(c);
    });
  }
  if (cfg.reduce) stage(r, "reduce", [&] { reduce_all(r); });
  if (cfg.oracle_check) stage(r, "oracle", [&] { r.checks.push_back(oracle_check(r, cfg.seed)); });
  return r;
}

std::string emit(const Report& r, Format f) {
  switch (f) {
    case Format::json: return emit_json(r);
    case Format::latex: return emit_latex(r);
    default: return emit_text(r);
  }
}

}  // namespace fraclie
