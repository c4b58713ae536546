#include "fraclie/pde.hpp"

#include <algorithm>

#include "normal_form.hpp"

namespace fraclie {

int PDESystem::order() const {
  int k = 0;
  for (const auto& eq : equations)
    for (const auto& j : jets_of(eq.F)) {
      int o = 0;
      for (int v : j.jet_var().theta) o += v;
      k = std::max(k, o);
    }
  return k;
}

Expr PDESystem::alpha() const {
  if (alpha_value) return Expr(*alpha_value);
  return Expr::param(names.alpha);
}

std::vector<Expr> PDESystem::space_vars() const {
  std::vector<Expr> v;
  for (int i = 0; i < p(); ++i) v.push_back(x(i));
  return v;
}

AssumptionRegistry PDESystem::assumptions() const {
  AssumptionRegistry reg(names.alpha);
  for (const auto& p : params) {
    switch (p.assumption) {
      case ParamDecl::Assumption::positive:
        reg.declare(p.name, Interval{Rational(0), std::nullopt});
        break;
      case ParamDecl::Assumption::interval:
        reg.declare(p.name, Interval{p.lo, p.hi});
        break;
      default:
        break;
    }
  }
  return reg;
}

const ParamDecl* PDESystem::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

void split_rhs(Equation& eq) {
  std::vector<Expr> f, h;
  for (const auto& term : terms_of(eq.rhs)) (contains_jet(term) ? f : h).push_back(term);
  eq.F = simplify(Expr::sum(f));
  eq.H = simplify(Expr::sum(h));
}

std::vector<Diagnostic> validate_system(const PDESystem& sys) {
  std::vector<Diagnostic> out;
  if (int(sys.equations.size()) != sys.q())
    out.push_back({"EquationCount", std::to_string(sys.equations.size()) + " for " + std::to_string(sys.q())});
  if (sys.alpha_value && !(*sys.alpha_value > 0 && *sys.alpha_value < 1))
    out.push_back({"OrderOutOfRange", sys.alpha_value->get_str()});
  std::vector<bool> coupled(size_t(sys.p()), false);
  for (const auto& eq : sys.equations) {
    Expr all = eq.F + eq.H;
    for (const auto& j : jets_of(all)) {
      const JetVar& v = j.jet_var();
      if (v.t_order > 0) out.push_back({"TimeDerivativeOnRHS", to_string(j, sys.names)});
      if (v.is_fractional()) out.push_back({"FractionalJetOnRHS", to_string(j, sys.names)});
    }
    for (const auto& j : jets_of(eq.F)) {
      const auto& th = j.jet_var().theta;
      for (size_t i = 0; i < th.size() && i < coupled.size(); ++i)
        if (th[i] > 0) coupled[i] = true;
    }
    for (const auto& term : terms_of(eq.F))
      if (!contains_jet(term)) out.push_back({"SourceTermInF", to_string(term, sys.names)});
    if (contains_jet(eq.H)) out.push_back({"JetInH", sys.names.dep_name(eq.dep)});
  }
  for (int i = 0; i < sys.p(); ++i)
    if (!coupled[size_t(i)]) out.push_back({"MissingSpaceCoupling", sys.names.space_name(i)});
  return out;
}

TermClassification classify_terms(const PDESystem& sys) {
  using namespace detail;
  TermClassification tc;
  for (const auto& eq : sys.equations) {
    std::vector<ClassifiedTerm> row;
    for (const auto& [m, c] : normalize(eq.F)) {
      Monomial jet_part, rest;
      bool opaque = false;
      for (const auto& f : m) {
        if (contains_jet(f.atom)) jet_part.push_back(f);
        else rest.push_back(f);
        if (f.atom.is(Kind::Fn) && f.atom.role() == FnRole::opaque) opaque = true;
      }
      ClassifiedTerm ct;
      ct.term = term_expr(m, c);
      ct.coeff = term_expr(rest, c);
      ct.monomial = monomial_expr(jet_part);
      ct.linear = !opaque && jet_part.size() == 1 && jet_part[0].atom.is(Kind::Jet) && jet_part[0].exp.is_one();
      row.push_back(ct);
    }
    tc.eqs.push_back(std::move(row));
  }
  return tc;
}

std::vector<Expr> TermClassification::I(int s) const {
  std::vector<Expr> v;
  for (const auto& t : eqs.at(size_t(s))) v.push_back(t.monomial);
  return v;
}

std::vector<Expr> TermClassification::J(int s) const {
  std::vector<Expr> v;
  for (const auto& t : eqs.at(size_t(s)))
    if (t.linear) v.push_back(t.monomial);
  return v;
}

std::vector<Expr> TermClassification::I_minus_J(int s) const {
  std::vector<Expr> v;
  for (const auto& t : eqs.at(size_t(s)))
    if (!t.linear) v.push_back(t.monomial);
  return v;
}

}  // namespace fraclie
