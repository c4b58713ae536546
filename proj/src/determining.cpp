#include "fraclie/determining.hpp"

#include <set>

#include "fraclie/ratfun.hpp"

namespace fraclie {

namespace {

// (atom, exponent) factors of a monomial expression
std::vector<std::pair<Expr, ExponentForm>> factors_of(const Expr& m) {
  std::vector<std::pair<Expr, ExponentForm>> out;
  std::vector<Expr> fs = m.is(Kind::Product) ? m.children() : std::vector<Expr>{m};
  for (const auto& f : fs) {
    if (f.is_number()) continue;
    if (f.is(Kind::Power)) out.emplace_back(f.base(), f.exponent());
    else out.emplace_back(f, ExponentForm(1));
  }
  return out;
}

// Value of a single symbol at which all differences vanish, if any.
std::optional<std::pair<std::string, Rational>> coincidence(const std::vector<ExponentForm>& diffs) {
  std::optional<std::pair<std::string, Rational>> hit;
  for (const auto& d : diffs) {
    if (d.is_zero()) continue;
    if (d.is_constant() || d.terms().size() != 1) return std::nullopt;
    const auto& [sym, c] = *d.terms().begin();
    Rational v = -d.constant() / c;
    if (hit && (hit->first != sym || hit->second != v)) return std::nullopt;
    hit = std::make_pair(sym, v);
  }
  return hit;
}

}  // namespace

Expr full_condition(const PDESystem& sys, const Expr& tau, const std::vector<Expr>& xi,
                    const std::vector<Expr>& eta, const std::vector<Expr>& dt_alpha_h, int s) {
  const Equation& eq = sys.equations[size_t(s)];
  const Expr rhs = eq.F + eq.H;
  const Expr T = partial_derivative(tau, sys.t());
  Expr e = dt_alpha_h[size_t(s)];
  for (int i = 0; i < sys.q(); ++i) {
    const Equation& ei = sys.equations[size_t(i)];
    e += partial_derivative(eta[size_t(s)], sys.u(i)) * (ei.F + ei.H);
  }
  e -= sys.alpha() * T * rhs;
  e -= tau * partial_derivative(rhs, sys.t());
  for (int i = 0; i < sys.p(); ++i) e -= xi[size_t(i)] * partial_derivative(rhs, sys.x(i));
  for (const auto& J : jets_of(eq.F)) {
    const JetVar& jv = J.jet_var();
    Expr dF = partial_derivative(eq.F, J);
    if (dF.is_zero()) continue;
    e -= eta_theta(xi, eta[size_t(jv.dep)], sys, jv.dep, jv.theta) * dF;
  }
  return simplify(e);
}

namespace {

std::vector<Expr> dt_alpha_h_opaque(const AnsatzGenerator& ans) {
  std::vector<Expr> out;
  for (const auto& h : ans.h) out.push_back(Expr::fn(h.name(), h.children(), {}, FnRole::unknown, 0));
  return out;
}

std::pair<Expr, Expr> split_jets(const Expr& e) {
  std::vector<Expr> with, without;
  for (const auto& t : terms_of(e)) (contains_jet(t) ? with : without).push_back(t);
  return {simplify(Expr::sum(with)), simplify(Expr::sum(without))};
}

}  // namespace

std::vector<Expr> invariance_condition(const PDESystem& sys, const AnsatzGenerator& ans) {
  std::vector<Expr> out;
  auto dh = dt_alpha_h_opaque(ans);
  for (int s = 0; s < sys.q(); ++s) out.push_back(split_jets(full_condition(sys, ans.tau, ans.xi, ans.eta, dh, s)).first);
  return out;
}

std::vector<Expr> h_condition(const PDESystem& sys, const AnsatzGenerator& ans) {
  std::vector<Expr> out;
  auto dh = dt_alpha_h_opaque(ans);
  for (int s = 0; s < sys.q(); ++s) out.push_back(split_jets(full_condition(sys, ans.tau, ans.xi, ans.eta, dh, s)).second);
  return out;
}

Separation separate(const Expr& cond, const PDESystem& sys, int eq) {
  Separation out;
  if (simplify(cond).is_zero()) return out;
  CollectOptions opts;
  opts.opaque_factors = true;
  auto coll = collect_jet_monomials(cond, opts);
  std::vector<Expr> monos;
  for (const auto& [m, c] : coll) {
    out.eqs.push_back({c, eq, m});
    monos.push_back(m);
  }
  // exponent coincidences that would merge two monomials
  std::set<std::string> seen;
  for (size_t a = 0; a < monos.size(); ++a) {
    auto fa = factors_of(monos[a]);
    for (size_t b = a + 1; b < monos.size(); ++b) {
      auto fb = factors_of(monos[b]);
      std::map<Expr, ExponentForm, ExprLess> diff;
      for (const auto& [atom, e] : fa) diff[atom] = diff[atom] + e;
      for (const auto& [atom, e] : fb) diff[atom] = diff[atom] - e;
      std::vector<ExponentForm> ds;
      for (const auto& [atom, d] : diff) ds.push_back(d);
      if (auto hit = coincidence(ds)) {
        std::string text = hit->first + " != " + hit->second.get_str();
        if (seen.insert(text).second) out.assumptions.push_back(text);
      }
    }
  }
  bool opaque = false;
  for (const auto& m : monos)
    if (!fn_apps_of(m, FnRole::opaque).empty()) opaque = true;
  if (opaque) {
    std::set<std::string> names;
    for (const auto& f : sys.fns) names.insert(f.name);
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    out.assumptions.push_back("products of " + list +
                              " and their derivatives with jet monomials are linearly independent");
  }
  return out;
}

DeterminingSystem build_determining_system(const PDESystem& sys, Branch b) {
  DeterminingSystem ds;
  ds.branch = b;
  ds.ans = AnsatzGenerator::make(sys, b);
  auto dh = dt_alpha_h_opaque(ds.ans);
  std::set<std::string> seen;
  for (int s = 0; s < sys.q(); ++s) {
    auto [jet_part, free_part] = split_jets(full_condition(sys, ds.ans.tau, ds.ans.xi, ds.ans.eta, dh, s));
    ds.frac_eqs.push_back(free_part);
    Separation sep = separate(jet_part, sys, s);
    for (auto& e : sep.eqs) ds.integer_eqs.push_back(std::move(e));
    for (auto& a : sep.assumptions)
      if (seen.insert(a).second) ds.assumptions.push_back(a);
  }
  return ds;
}

// ---- autoreduction ----

namespace {

// Unknown-atom terms: atom -> coefficient. Terms without an unknown atom go under the zero key.
std::map<Expr, Expr, ExprLess> linear_parts(const Expr& e) {
  std::map<Expr, Expr, ExprLess> out;
  for (const auto& t : terms_of(e)) {
    std::vector<Expr> fs = t.is(Kind::Product) ? t.children() : std::vector<Expr>{t};
    Expr atom(0);
    std::vector<Expr> rest;
    for (const auto& f : fs) {
      if (is_unknown_atom(f) && atom.is_zero()) atom = f;
      else rest.push_back(f);
    }
    out[atom] = out[atom] + Expr::product(rest);
  }
  for (auto& [k, v] : out) v = simplify(v);
  return out;
}

int derivative_order(const Expr& a) {
  int o = 0;
  for (int d : a.deriv()) o += d;
  return o;
}

bool is_derivative_of(const Expr& d, const Expr& a) {
  if (!is_unknown_atom(d) || !is_unknown_atom(a) || d.name() != a.name() || d.frac() != a.frac()) return false;
  if (d.children() != a.children()) return false;
  std::vector<int> dd = d.deriv(), da = a.deriv();
  dd.resize(d.children().size(), 0);
  da.resize(a.children().size(), 0);
  for (size_t i = 0; i < dd.size(); ++i)
    if (dd[i] < da[i]) return false;
  return true;
}

// Partial derivative of an expression by the difference of derivative orders.
Expr differentiate_to(const Expr& e, const Expr& from, const Expr& to) {
  std::vector<int> df = from.deriv(), dt = to.deriv();
  df.resize(from.children().size(), 0);
  dt.resize(to.children().size(), 0);
  Expr r = e;
  for (size_t i = 0; i < dt.size(); ++i)
    for (int k = df[i]; k < dt[i]; ++k) r = partial_derivative(r, from.children()[i]);
  return r;
}

std::vector<Expr> unknown_atoms(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& f : fn_apps_of(e, FnRole::unknown))
    if (f.frac() < 0) out.push_back(f);
  return out;
}

Expr rewrite(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& rule) {
  Bindings b;
  for (const auto& a : fn_apps_of(e, FnRole::unknown))
    if (auto r = rule(a)) b[a] = *r;
  return b.empty() ? e : substitute(e, b);
}

bool scalar_multiple(const Expr& a, const Expr& b) {
  VarTable vt;
  RatFun ra = vt.to_ratfun(a), rb = vt.to_ratfun(b);
  if (rb.is_zero()) return ra.is_zero();
  RatFun q = ra / rb;
  return q.is_constant() && !q.is_zero();
}

}  // namespace

std::vector<Expr> autoreduce(const std::vector<Expr>& input) {
  std::vector<Expr> eqs;
  for (const auto& e : input) {
    Expr s = simplify(e);
    if (!s.is_zero()) eqs.push_back(s);
  }
  auto lone_atom = [](const Expr& e) -> std::optional<Expr> {
    auto lp = linear_parts(e);
    if (lp.size() == 1 && !lp.begin()->first.is_zero()) return lp.begin()->first;
    return std::nullopt;
  };
  std::map<Expr, Expr, ExprLess> oriented;  // atom -> value; proper derivatives get rewritten
  for (int round = 0; round < 50; ++round) {
    std::vector<Expr> zeros;
    for (const auto& e : eqs)
      if (auto a = lone_atom(e)) zeros.push_back(*a);
    // orient derivative atoms; equations with fewer candidates go first
    std::vector<std::pair<size_t, std::vector<std::pair<Expr, Expr>>>> cands;
    for (size_t idx = 0; idx < eqs.size(); ++idx) {
      auto lp = linear_parts(eqs[idx]);
      if (lp.size() < 2) continue;
      std::vector<std::pair<Expr, Expr>> c;
      for (const auto& [atom, coeff] : lp) {
        if (atom.is_zero() || atom.children().empty() || derivative_order(atom) == 0) continue;
        if (contains_kind(coeff, Kind::Indep) || !unknown_atoms(coeff).empty()) continue;
        c.emplace_back(atom, coeff);
      }
      std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) {
        return derivative_order(a.first) > derivative_order(b.first);
      });
      cands.emplace_back(idx, c);
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    for (const auto& [idx, c] : cands) {
      for (const auto& [atom, coeff] : c) {
        bool taken = false;
        for (const auto& z : zeros)
          if (is_derivative_of(atom, z)) taken = true;
        for (const auto& [k, v] : oriented)
          if (is_derivative_of(atom, k) || is_derivative_of(k, atom)) taken = true;
        if (taken) continue;
        oriented[atom] = simplify(-(eqs[idx] - coeff * atom) / coeff);
        break;
      }
    }
    bool changed = false;
    std::vector<Expr> next;
    for (const auto& e : eqs) {
      auto own = lone_atom(e);
      auto rule = [&](const Expr& a) -> std::optional<Expr> {
        if (own && *own == a) {
          for (const auto& z : zeros)
            if (z != a && is_derivative_of(a, z)) return Expr(0);
          return std::nullopt;
        }
        for (const auto& z : zeros)
          if (is_derivative_of(a, z)) return Expr(0);
        for (const auto& [k, v] : oriented)
          if (a != k && is_derivative_of(a, k)) return differentiate_to(v, k, a);
        return std::nullopt;
      };
      Expr r = rewrite(e, rule);
      if (r != e) changed = true;
      if (r.is_zero()) continue;
      bool dup = false;
      for (const auto& n : next)
        if (scalar_multiple(r, n)) dup = true;
      if (dup) {
        changed = true;
        continue;
      }
      next.push_back(r);
    }
    eqs = std::move(next);
    if (!changed) break;
  }
  return eqs;
}

bool same_up_to_scaling(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool found = false;
    for (size_t j = 0; j < b.size() && !found; ++j)
      if (!used[j] && scalar_multiple(x, b[j])) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace fraclie
