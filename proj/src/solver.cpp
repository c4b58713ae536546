#include "fraclie/solver.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "fraclie/ratfun.hpp"

namespace fraclie {

namespace {

// x-monomials of total degree <= d, by degree then lexicographically
std::vector<std::vector<int>> x_monomials(int p, int d) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= d; ++deg) {
    std::vector<int> m(size_t(p), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == p - 1) {
        m[size_t(i)] = left;
        out.push_back(m);
        return;
      }
      for (int v = left; v >= 0; --v) {
        m[size_t(i)] = v;
        rec(i + 1, left - v);
      }
    };
    if (p == 0) {
      if (deg == 0) out.push_back(m);
    } else {
      rec(0, deg);
    }
  }
  return out;
}

Expr x_power(const PDESystem& sys, const std::vector<int>& m) {
  Expr e(1);
  for (int i = 0; i < sys.p(); ++i) e *= pow(sys.x(i), ExponentForm(m[size_t(i)]));
  return simplify(e);
}

bool is_constant_column(const Expr& f) { return is_unknown_atom(f) && f.children().empty(); }

// Splits a term into (unknown constant, t/x/jet monomial, coefficient).
struct TermParts {
  Expr column, basis, coeff;
};

TermParts split_term(const Expr& term) {
  TermParts tp{Expr(0), Expr(1), Expr(1)};
  std::vector<Expr> fs = term.is(Kind::Product) ? term.children() : std::vector<Expr>{term};
  std::vector<Expr> basis, coeff;
  for (const auto& f : fs) {
    if (is_constant_column(f)) {
      if (!tp.column.is_zero()) throw NonPolynomial("equation is not linear in the unknown constants");
      tp.column = f;
    } else if (contains_kind(f, Kind::Indep) || contains_jet(f) || !fn_apps_of(f, FnRole::opaque).empty()) {
      basis.push_back(f);
    } else {
      coeff.push_back(f);
    }
  }
  tp.basis = simplify(Expr::product(basis));
  tp.coeff = simplify(Expr::product(coeff));
  return tp;
}

struct Rref {
  std::vector<std::vector<RatFun>> rows;
  std::vector<size_t> pivot_cols;
  std::vector<RatFun> pivots;
};

Rref rref(std::vector<std::vector<RatFun>> m, size_t ncols) {
  Rref out;
  size_t rank = 0;
  for (size_t c = 0; c < ncols && rank < m.size(); ++c) {
    size_t best = m.size();
    for (size_t r = rank; r < m.size(); ++r) {
      if (m[r][c].is_zero()) continue;
      if (best == m.size()) {
        best = r;
        continue;
      }
      const RatFun& a = m[r][c];
      const RatFun& b = m[best][c];
      if (std::make_pair(!a.is_constant(), a.weight()) < std::make_pair(!b.is_constant(), b.weight())) best = r;
    }
    if (best == m.size()) continue;
    std::swap(m[rank], m[best]);
    RatFun piv = m[rank][c];
    for (auto& v : m[rank]) v = v / piv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      RatFun f = m[r][c];
      for (size_t k = 0; k < ncols; ++k)
        if (!m[rank][k].is_zero()) m[r][k] = m[r][k] - f * m[rank][k];
    }
    out.pivot_cols.push_back(c);
    out.pivots.push_back(piv);
    ++rank;
  }
  m.resize(rank);
  out.rows = std::move(m);
  return out;
}

// Null-space basis of the row-reduced system.
std::vector<std::vector<RatFun>> null_space(const Rref& r, size_t ncols) {
  std::set<size_t> piv(r.pivot_cols.begin(), r.pivot_cols.end());
  std::vector<std::vector<RatFun>> out;
  for (size_t f = 0; f < ncols; ++f) {
    if (piv.count(f)) continue;
    std::vector<RatFun> v(ncols);
    v[f] = RatFun(1);
    for (size_t i = 0; i < r.pivot_cols.size(); ++i) v[r.pivot_cols[i]] = -r.rows[i][f];
    out.push_back(v);
  }
  return out;
}

bool provably_nonzero(const Expr& e, const PDESystem& sys, const AssumptionRegistry& reg) {
  std::vector<Expr> fs = e.is(Kind::Product) ? e.children() : std::vector<Expr>{e};
  for (const auto& f : fs) {
    if (f.is_number()) continue;
    Expr b = f.is(Kind::Power) ? f.base() : f;
    if (b.is(Kind::Param)) {
      const ParamDecl* p = sys.param(b.name());
      if (p && p->assumption != ParamDecl::Assumption::none) continue;
    }
    if (b.is(Kind::Gamma)) continue;
    auto ex = to_exponent(b);
    if (ex) {
      Sign s = reg.sign(*ex);
      if (s == Sign::positive || s == Sign::negative) continue;
    }
    return false;
  }
  return true;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct BranchSolve {
  std::vector<Generator> generators;
  std::vector<std::vector<RatFun>> null_vectors;
  std::vector<Expr> columns;
  std::vector<std::string> assumptions;
  std::vector<std::string> notes;
  int chi2_col = -1;
};

Expr instantiate(const Expr& e, const std::map<std::string, Expr>& body,
                 const std::map<std::string, Expr>& frac_body) {
  Bindings b;
  for (const auto& a : fn_apps_of(e, FnRole::unknown)) {
    if (a.children().empty()) continue;
    const auto& src = a.frac() >= 0 ? frac_body : body;
    auto it = src.find(a.name());
    if (it == src.end()) continue;
    Expr v = it->second;
    std::vector<int> d = a.deriv();
    for (size_t j = 0; j < d.size(); ++j)
      for (int k = 0; k < d[j]; ++k) v = partial_derivative(v, a.children()[j]);
    b[a] = v;
  }
  return b.empty() ? simplify(e) : substitute(e, b);
}

BranchSolve solve_branch(const PDESystem& sys, const DeterminingSystem& ds, Branch branch, int degree,
                         const std::vector<Expr>& templates) {
  BranchSolve out;
  const AnsatzGenerator& ans = ds.ans;
  AssumptionRegistry reg = sys.assumptions();
  const Expr al = sys.alpha();
  const Expr t = sys.t();

  Bindings branch_b;
  for (int s = 0; s < sys.q(); ++s) {
    const Expr& g = ans.gamma[size_t(s)];
    if (!g.is(Kind::Param)) continue;
    branch_b[g] = branch == Branch::zero ? Expr(0) : simplify((al - Expr(1)) / Expr(2));
  }
  if (branch == Branch::zero && !ans.chi2.is_zero()) branch_b[ans.chi2] = Expr(0);

  // columns
  out.columns.push_back(ans.chi1);
  if (branch != Branch::zero && !ans.chi2.is_zero()) {
    out.chi2_col = int(out.columns.size());
    out.columns.push_back(ans.chi2);
  }
  std::map<std::string, Expr> body, frac_body;
  auto poly = [&](const Expr& fn) {
    Expr e;
    for (const auto& m : x_monomials(sys.p(), degree)) {
      Expr c = unknown_constant(fn.name() + "@" + join(m));
      out.columns.push_back(c);
      e += c * x_power(sys, m);
    }
    body[fn.name()] = simplify(e);
  };
  for (const auto& x : ans.xi) poly(x);
  for (const auto& g : ans.g) poly(g);
  for (int s = 0; s < sys.q(); ++s)
    for (int i = 0; i < sys.q(); ++i)
      if (i != s) poly(ans.f[size_t(s)][size_t(i)]);

  // h templates with their fractional derivatives
  std::vector<std::pair<Expr, Expr>> usable;
  for (const auto& tpl : templates) {
    try {
      PowerSum ps = PowerSum::from_expr(tpl, t);
      usable.emplace_back(tpl, rl_derivative(ps, al, reg).to_expr(t));
    } catch (const Error& err) {
      out.notes.push_back("h-template " + to_string(tpl, sys.names) + " dropped: " + err.what());
    }
  }
  for (int s = 0; s < sys.q(); ++s) {
    Expr e, fe;
    for (size_t j = 0; j < usable.size(); ++j) {
      Expr c = unknown_constant(ans.h[size_t(s)].name() + "@" + std::to_string(j));
      out.columns.push_back(c);
      e += c * usable[j].first;
      fe += c * usable[j].second;
    }
    body[ans.h[size_t(s)].name()] = simplify(e);
    frac_body[ans.h[size_t(s)].name()] = simplify(fe);
  }

  std::map<Expr, size_t, ExprLess> col_index;
  for (size_t i = 0; i < out.columns.size(); ++i) col_index[out.columns[i]] = i;

  // rows keyed by (source equation, basis monomial)
  VarTable vt;
  std::map<std::pair<size_t, Expr>, std::vector<RatFun>, std::function<bool(const std::pair<size_t, Expr>&, const std::pair<size_t, Expr>&)>>
      rows([](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return compare(a.second, b.second) < 0;
      });
  std::vector<Expr> all_eqs;
  for (const auto& e : ds.integer_eqs) all_eqs.push_back(e.expr);
  for (const auto& e : ds.frac_eqs) all_eqs.push_back(e);
  std::set<std::string> seen_assume;
  for (size_t k = 0; k < all_eqs.size(); ++k) {
    Expr e = instantiate(substitute(all_eqs[k], branch_b), body, frac_body);
    if (e.is_zero()) continue;
    std::vector<Expr> bases;
    for (const auto& term : terms_of(e)) {
      TermParts tp = split_term(term);
      if (tp.column.is_zero()) throw NonPolynomial("term without unknown constant: " + to_string(term, sys.names));
      auto& row = rows[{k, tp.basis}];
      if (row.empty()) {
        row.assign(out.columns.size(), RatFun());
        bases.push_back(tp.basis);
      }
      size_t c = col_index.at(tp.column);
      row[c] = row[c] + vt.to_ratfun(tp.coeff);
    }
    // t-exponents that coincide for some order in (0,1) would merge rows
    for (size_t a = 0; a < bases.size(); ++a)
      for (size_t b = a + 1; b < bases.size(); ++b) {
        Expr q = simplify(bases[a] / bases[b]);
        std::vector<Expr> fs = q.is(Kind::Product) ? q.children() : std::vector<Expr>{q};
        if (fs.size() != 1 || !fs[0].is(Kind::Power) || fs[0].base() != t) continue;
        const ExponentForm& d = fs[0].exponent();
        if (d.is_constant() || d.terms().size() != 1) continue;
        const auto& [sym, c] = *d.terms().begin();
        Rational v = -d.constant() / c;
        if (sym == sys.names.alpha && !(v > 0 && v < 1)) continue;
        std::string text = sym + " != " + v.get_str();
        if (seen_assume.insert(text).second) out.assumptions.push_back(text);
      }
  }

  std::vector<std::vector<RatFun>> m;
  for (auto& [k, r] : rows) m.push_back(std::move(r));
  Rref red = rref(std::move(m), out.columns.size());
  for (const auto& p : red.pivots) {
    if (p.is_constant()) continue;
    Expr pe = simplify(vt.to_expr(p));
    if (provably_nonzero(pe, sys, reg)) continue;
    std::string text = to_string(pe, sys.names) + " != 0";
    if (seen_assume.insert(text).second) out.assumptions.push_back(text);
  }
  out.null_vectors = null_space(red, out.columns.size());

  // map null vectors back to generators
  Expr tau = substitute(ans.tau, branch_b);
  std::vector<Expr> xi, eta;
  for (const auto& x : ans.xi) xi.push_back(instantiate(x, body, frac_body));
  for (const auto& e : ans.eta) eta.push_back(instantiate(substitute(e, branch_b), body, frac_body));
  for (const auto& v : out.null_vectors) {
    Bindings b;
    for (size_t c = 0; c < out.columns.size(); ++c) b[out.columns[c]] = vt.to_expr(v[c]);
    Generator g;
    g.tau = rational_normal_form(substitute(tau, b));
    for (const auto& x : xi) g.xi.push_back(rational_normal_form(substitute(x, b)));
    for (const auto& e : eta) g.eta.push_back(rational_normal_form(substitute(e, b)));
    out.generators.push_back(g);
  }
  return out;
}

Expr component_of(const Generator& g, size_t c) {
  if (c == 0) return g.tau;
  if (c <= g.xi.size()) return g.xi[c - 1];
  return g.eta[c - 1 - g.xi.size()];
}

std::string coefficient_text(const Expr& c, const std::string& op, Style style, const Names& names) {
  if (c.is_one()) return op;
  std::string s = to_string(c, names, style);
  if (!c.is(Kind::Sum) && !s.empty() && s[0] == '-') return "-" + coefficient_text(simplify(-c), op, style, names);
  bool wrap = c.is(Kind::Sum) || (style != Style::latex && s.find('/') != std::string::npos);
  if (style == Style::latex) return (wrap ? "\\left(" + s + "\\right)" : s) + op;
  return (wrap ? "(" + s + ")" : s) + "*" + op;
}

}  // namespace

std::string Generator::str(const Names& names, Style style) const {
  std::vector<std::pair<Expr, std::string>> parts;
  auto op = [&](const std::string& v) { return style == Style::latex ? "\\partial_{" + v + "}" : "D" + v; };
  parts.emplace_back(tau, op(names.t));
  for (size_t i = 0; i < xi.size(); ++i) parts.emplace_back(xi[i], op(names.space_name(int(i))));
  for (size_t s = 0; s < eta.size(); ++s) parts.emplace_back(eta[s], op(names.dep_name(int(s))));
  std::string out;
  for (const auto& [c, o] : parts) {
    if (c.is_zero()) continue;
    std::string term = coefficient_text(c, o, style, names);
    bool neg = !term.empty() && term[0] == '-';
    if (out.empty()) out = term;
    else out += neg ? " - " + term.substr(1) : " + " + term;
  }
  return out.empty() ? "0" : out;
}

std::vector<Expr> default_h_templates(const PDESystem& sys) {
  const Expr t = sys.t();
  auto al = to_exponent(sys.alpha());
  std::vector<Expr> out = {Expr(1), pow(t, *al - ExponentForm(1))};
  for (int i = 0; i < sys.p(); ++i) out.push_back(simplify(sys.x(i) * pow(t, -*al)));
  for (int i = 0; i < sys.p(); ++i) out.push_back(simplify(sys.x(i) * pow(t, *al - ExponentForm(1))));
  return out;
}

std::vector<Generator> normalize_basis(const PDESystem& sys, const std::vector<Generator>& gens) {
  if (gens.empty()) return {};
  const size_t ncomp = 1 + size_t(sys.p() + sys.q());
  using Key = std::pair<size_t, Expr>;
  auto less = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first < b.first;
    return compare(a.second, b.second) < 0;
  };
  std::map<Key, size_t, decltype(less)> cols(less);
  VarTable vt;
  std::vector<std::map<Key, RatFun, decltype(less)>> entries;
  for (const auto& g : gens) {
    std::map<Key, RatFun, decltype(less)> row(less);
    for (size_t c = 0; c < ncomp; ++c) {
      for (const auto& term : terms_of(simplify(component_of(g, c)))) {
        std::vector<Expr> fs = term.is(Kind::Product) ? term.children() : std::vector<Expr>{term};
        std::vector<Expr> basis, coeff;
        for (const auto& f : fs)
          (contains_kind(f, Kind::Indep) || contains_jet(f) || !fn_apps_of(f, FnRole::opaque).empty() ? basis
                                                                                                       : coeff)
              .push_back(f);
        Key k{c, simplify(Expr::product(basis))};
        cols[k] = 0;
        row[k] = row[k] + vt.to_ratfun(simplify(Expr::product(coeff)));
      }
    }
    entries.push_back(std::move(row));
  }
  std::vector<Key> keys;
  for (auto& [k, i] : cols) {
    i = keys.size();
    keys.push_back(k);
  }
  std::vector<std::vector<RatFun>> m;
  for (const auto& row : entries) {
    std::vector<RatFun> r(keys.size());
    for (const auto& [k, v] : row) r[cols.at(k)] = v;
    m.push_back(r);
  }
  Rref red = rref(std::move(m), keys.size());
  std::vector<Generator> out;
  for (const auto& row : red.rows) {
    std::vector<Expr> comp(ncomp, Expr(0));
    for (size_t j = 0; j < keys.size(); ++j)
      if (!row[j].is_zero()) comp[keys[j].first] += vt.to_expr(row[j]) * keys[j].second;
    Generator g;
    g.tau = rational_normal_form(comp[0]);
    for (int i = 0; i < sys.p(); ++i) g.xi.push_back(rational_normal_form(comp[1 + size_t(i)]));
    for (int s = 0; s < sys.q(); ++s) g.eta.push_back(rational_normal_form(comp[1 + size_t(sys.p() + s)]));
    out.push_back(g);
  }
  return out;
}

VerifyReport verify_generator(const PDESystem& sys, const Generator& gen) {
  const Expr t = sys.t();
  AssumptionRegistry reg = sys.assumptions();
  auto shape = [&](bool ok, const std::string& what) {
    if (!ok) throw ShapeViolation(what);
  };
  auto free_of_tx = [&](const Expr& e) { return !contains_kind(e, Kind::Indep) && !contains_jet(e); };

  if (gen.xi.size() != size_t(sys.p()) || gen.eta.size() != size_t(sys.q()))
    throw ShapeViolation("component count does not match the system");
  PowerSum tp;
  try {
    tp = PowerSum::from_expr(gen.tau, t);
  } catch (const NonPolynomial&) {
    throw ShapeViolation("tau is not a polynomial in t");
  }
  for (const auto& term : tp.terms())
    shape((term.exp == ExponentForm(1) || term.exp == ExponentForm(2)) && free_of_tx(term.coeff),
          "tau must be chi2*t^2 + chi1*t");
  for (const auto& x : gen.xi) shape(!contains(x, t) && !contains_jet(x), "xi must depend on space variables only");
  std::vector<Expr> h;
  for (int s = 0; s < sys.q(); ++s) {
    const Expr& e = gen.eta[size_t(s)];
    for (const auto& j : jets_of(e))
      shape(j.jet_var().order() == 0 && !j.jet_var().is_fractional(), "eta depends on derivatives");
    Expr hs = e;
    for (int i = 0; i < sys.q(); ++i) {
      Expr d = partial_derivative(e, sys.u(i));
      for (int j = 0; j < sys.q(); ++j)
        shape(partial_derivative(d, sys.u(j)).is_zero(), "eta is not linear in the dependent variables");
      if (i == s) shape(free_of_tx(partial_derivative(d, t)), "coefficient of u_s is not g(x) + gamma*D_t(tau)");
      else shape(!contains(d, t), "cross coefficient depends on t");
      hs -= sys.u(i) * d;
    }
    h.push_back(simplify(hs));
  }

  VerifyReport rep;
  auto record = [&](int s, const std::string& where, const Expr& r) {
    if (is_zero_exact(r)) return;
    rep.ok = false;
    rep.residuals.push_back(sys.names.dep_name(s) + ":" + where + ": " + to_string(gamma_simplify(r), sys.names));
  };
  std::vector<Expr> dth;
  for (int s = 0; s < sys.q(); ++s) {
    PowerSum ps;
    try {
      ps = PowerSum::from_expr(h[size_t(s)], t);
    } catch (const NonPolynomial&) {
      throw ShapeViolation("u-free part of eta is not a power sum in t");
    }
    dth.push_back(rl_derivative(ps, sys.alpha(), reg).to_expr(t));
  }
  for (int s = 0; s < sys.q(); ++s) {
    Expr E = full_condition(sys, gen.tau, gen.xi, gen.eta, dth, s);
    CollectOptions opts;
    opts.opaque_factors = true;
    for (const auto& [m, c] : collect_jet_monomials(E, opts)) record(s, "[" + to_string(m, sys.names) + "]", c);
    for (int k = 1; k <= 3; ++k) {
      SeriesCoeffs sc = series_coeffs(gen.tau, gen.xi, gen.eta[size_t(s)], sys, s, k);
      for (int i = 0; i < sys.q(); ++i) record(s, "series k=" + std::to_string(k) + " " + sys.names.dep_name(i), sc.dep[size_t(i)]);
      for (int i = 0; i < sys.p(); ++i)
        record(s, "series k=" + std::to_string(k) + " " + sys.names.space_name(i), sc.space[size_t(i)]);
    }
  }
  return rep;
}

SolutionBasis solve(const PDESystem& sys, const DeterminingSystem& ds, const SolverConfig& cfg) {
  SolutionBasis out;
  out.poly_degree = cfg.poly_degree;
  for (const auto& t : cfg.h_templates.empty() ? default_h_templates(sys) : cfg.h_templates) {
    Expr c = simplify(t);
    if (std::find(out.templates.begin(), out.templates.end(), c) == out.templates.end()) out.templates.push_back(c);
  }
  out.assumptions = ds.assumptions;
  std::set<std::string> seen(out.assumptions.begin(), out.assumptions.end());
  std::set<std::string> seen_notes;

  std::vector<Branch> branches;
  if (ds.branch != Branch::symbolic) branches = {ds.branch};
  else if (cfg.branches == SolverConfig::Branches::zero) branches = {Branch::zero};
  else if (cfg.branches == SolverConfig::Branches::nonzero) branches = {Branch::nonzero};
  else branches = {Branch::zero, Branch::nonzero};

  std::vector<Generator> all;
  for (Branch b : branches) {
    BranchSolve bs = solve_branch(sys, ds, b, cfg.poly_degree, out.templates);
    if (cfg.degree_check) {
      BranchSolve hi = solve_branch(sys, ds, b, cfg.poly_degree + 1, out.templates);
      if (hi.null_vectors.size() != bs.null_vectors.size())
        throw DegreeInsufficient("branch " + branch_name(b) + ": null space dimension " +
                                 std::to_string(bs.null_vectors.size()) + " at degree " +
                                 std::to_string(cfg.poly_degree) + " but " + std::to_string(hi.null_vectors.size()) +
                                 " at degree " + std::to_string(cfg.poly_degree + 1));
    }
    for (const auto& a : bs.assumptions)
      if (seen.insert(branch_name(b) + ": " + a).second) out.assumptions.push_back(branch_name(b) + ": " + a);
    for (const auto& n : bs.notes)
      if (seen_notes.insert(n).second) out.notes.push_back(n);
    BranchResult br;
    br.branch = b;
    br.dimension = int(bs.null_vectors.size());
    if (b == Branch::nonzero) {
      for (const auto& v : bs.null_vectors)
        if (!v[size_t(bs.chi2_col)].is_zero()) br.contributes = true;
    } else {
      br.contributes = !bs.null_vectors.empty();
    }
    out.branches.push_back(br);
    if (br.contributes) all.insert(all.end(), bs.generators.begin(), bs.generators.end());
  }
  out.generators = normalize_basis(sys, all);
  for (const auto& g : out.generators) {
    VerifyReport r = verify_generator(sys, g);
    if (!r.ok) {
      std::string m;
      for (const auto& x : r.residuals) m += "\n  " + x;
      throw TemplateResidual("generator " + g.str(sys.names) + " fails verification:" + m);
    }
    out.certificates.push_back(r);
  }
  return out;
}

}  // namespace fraclie
