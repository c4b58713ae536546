#include "fraclie/reduce.hpp"

#include <cctype>
#include <functional>

#include "fraclie/ratfun.hpp"

namespace fraclie {

namespace {

Expr rebuild(const Expr& e, const std::function<Expr(const Expr&)>& leaf) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Param:
      return e;
    case Kind::Indep:
    case Kind::Jet:
      return leaf(e);
    case Kind::Fn: {
      std::vector<Expr> args;
      for (const auto& a : e.children()) args.push_back(rebuild(a, leaf));
      return Expr::fn(e.name(), args, e.deriv(), e.role(), e.frac());
    }
    case Kind::Gamma:
      return Expr::gamma(rebuild(e.base(), leaf));
    case Kind::Power:
      return pow(rebuild(e.base(), leaf), e.exponent());
    case Kind::Product: {
      std::vector<Expr> c;
      for (const auto& x : e.children()) c.push_back(rebuild(x, leaf));
      return Expr::product(c);
    }
    case Kind::Sum: {
      std::vector<Expr> c;
      for (const auto& x : e.children()) c.push_back(rebuild(x, leaf));
      return Expr::sum(c);
    }
  }
  return e;
}

bool free_of_txu(const Expr& e) { return !contains_kind(e, Kind::Indep) && !contains_jet(e); }

// power of t with a general exponent, as text
std::string tpow_text(const Expr& base, const Expr& exp, const Names& names, Style style) {
  Expr e = rational_normal_form(exp);
  if (e.is_zero()) return to_string(base, names, style);
  std::string es = to_string(e, names, style);
  std::string b = to_string(base, names, style);
  if (style == Style::latex) return b + " " + names.t + "^{" + es + "}";
  bool simple = e.is_number() && e.number_value() > 0 && is_integer(e.number_value());
  return b + "*" + names.t + "^" + (simple ? es : "(" + es + ")");
}

}  // namespace

PDESystem translation_reduction(const PDESystem& sys, const Generator& gen) {
  int slot = -1;
  bool ok = gen.tau.is_zero();
  for (int i = 0; i < sys.p(); ++i) {
    const Expr& c = gen.xi[size_t(i)];
    if (c.is_one() && slot < 0) slot = i;
    else if (!c.is_zero()) ok = false;
  }
  for (const auto& e : gen.eta) ok = ok && e.is_zero();
  if (!ok || slot < 0) throw NotTranslation(gen.str(sys.names) + " is not a pure space translation");
  const Expr xs = sys.x(slot);
  for (const auto& eq : sys.equations)
    if (contains(eq.rhs, xs))
      throw NotTranslation("right-hand side depends explicitly on " + sys.names.space_name(slot));

  PDESystem out = sys;
  out.names.space.erase(out.names.space.begin() + slot);
  auto leaf = [&](const Expr& a) -> Expr {
    if (a.is(Kind::Indep)) {
      if (a.index() <= slot) return a;
      return Expr::indep(a.index() - 1, a.name());
    }
    const JetVar& j = a.jet_var();
    if (j.theta[size_t(slot)] > 0) return Expr(0);
    std::vector<int> th = j.theta;
    th.erase(th.begin() + slot);
    return Expr::jet(j.dep, th, j.t_order, j.frac_offset);
  };
  for (auto& eq : out.equations) {
    eq.rhs = simplify(rebuild(eq.rhs, leaf));
    split_rhs(eq);
  }
  return out;
}

EKReduction scaling_similarity(const PDESystem& sys, const Generator& gen) {
  auto fail = [&](const std::string& why) { throw NotScaling(gen.str(sys.names) + ": " + why); };
  EKReduction r;
  r.chi1 = rational_normal_form(gen.tau / sys.t());
  if (!free_of_txu(r.chi1) || r.chi1.is_zero()) fail("tau is not a nonzero multiple of t");
  for (int i = 0; i < sys.p(); ++i) {
    Expr a = rational_normal_form(gen.xi[size_t(i)] / sys.x(i));
    if (!free_of_txu(a)) fail("xi is not a multiple of " + sys.names.space_name(i));
    r.a.push_back(a);
  }
  for (int s = 0; s < sys.q(); ++s) {
    Expr b = rational_normal_form(gen.eta[size_t(s)] / sys.u(s));
    if (!free_of_txu(b)) fail("eta is not a multiple of " + sys.names.dep_name(s));
    r.b.push_back(b);
  }
  r.order = sys.alpha();
  for (const auto& a : r.a) {
    r.z_exp.push_back(rational_normal_form(-a / r.chi1));
    r.delta.push_back(a.is_zero() ? Expr(0) : rational_normal_form(r.chi1 / a));
  }
  for (const auto& b : r.b) {
    r.u_exp.push_back(rational_normal_form(-b / r.chi1));
    r.epsilon.push_back(rational_normal_form(Expr(1) + b / r.chi1 - r.order));
  }
  return r;
}

std::vector<Expr> EKReduction::invariance_residuals() const {
  // X(x t^e) = x t^e (chi1 e + a)
  std::vector<Expr> out;
  for (size_t i = 0; i < a.size(); ++i) out.push_back(rational_normal_form(chi1 * z_exp[i] + a[i]));
  for (size_t s = 0; s < b.size(); ++s) out.push_back(rational_normal_form(chi1 * u_exp[s] + b[s]));
  return out;
}

std::vector<std::string> EKReduction::similarity_text(const Names& names, Style style) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < z_exp.size(); ++i) {
    Expr x = Expr::indep(int(i) + 1, names.space_name(int(i)));
    out.push_back("z" + std::to_string(i + 1) + " = " + tpow_text(x, z_exp[i], names, style));
  }
  for (size_t s = 0; s < u_exp.size(); ++s) {
    std::string dn = names.dep_name(int(s));
    std::string U = dn;
    U[0] = char(std::toupper(U[0]));
    if (U == dn) U += "'";
    out.push_back(U + " = " + tpow_text(Expr::jet(int(s), std::vector<int>(z_exp.size(), 0)), u_exp[s], names, style));
  }
  return out;
}

std::vector<std::string> EKReduction::operator_text(const Names& names, Style style) const {
  std::vector<std::string> out;
  std::string d;
  for (size_t i = 0; i < delta.size(); ++i) d += (i ? ", " : "") + to_string(delta[i], names, style);
  for (size_t s = 0; s < epsilon.size(); ++s) {
    std::string e = to_string(epsilon[s], names, style), o = to_string(order, names, style);
    if (style == Style::latex)
      out.push_back("P^{" + e + ", " + o + "}_{" + d + "}");
    else
      out.push_back("P[eps=" + e + ", order=" + o + ", delta=(" + d + ")]");
  }
  return out;
}

ExactCheck verify_exact_solution(const PDESystem& sys, const std::vector<Expr>& sol) {
  if (sol.size() != size_t(sys.q())) throw SemanticError("one expression per dependent variable expected");
  const Expr t = sys.t();
  AssumptionRegistry reg = sys.assumptions();
  auto leaf = [&](const Expr& a) -> Expr {
    if (a.is(Kind::Indep)) return a;
    const JetVar& j = a.jet_var();
    if (j.is_fractional() || j.t_order > 0) throw SemanticError("time derivative on the right-hand side");
    Expr v = sol[size_t(j.dep)];
    for (int i = 0; i < sys.p(); ++i)
      for (int k = 0; k < j.theta[size_t(i)]; ++k) v = partial_derivative(v, sys.x(i));
    return v;
  };
  ExactCheck out;
  for (int s = 0; s < sys.q(); ++s) {
    PowerSum ps = PowerSum::from_expr(simplify(sol[size_t(s)]), t);
    Expr lhs = rl_derivative(ps, sys.alpha(), reg).to_expr(t);
    const Equation& eq = sys.equations[size_t(s)];
    Expr rhs = simplify(rebuild(eq.rhs, leaf));
    Expr r = gamma_simplify(simplify(lhs - rhs));
    bool zero = r.is_zero() || is_zero_exact(r);
    if (zero) r = Expr(0);
    out.ok = out.ok && zero;
    out.residuals.push_back(r);
  }
  return out;
}

}  // namespace fraclie
