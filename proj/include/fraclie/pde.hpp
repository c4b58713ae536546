#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclie/expr.hpp"
#include "fraclie/frac_calc.hpp"

namespace fraclie {

struct ParamDecl {
  enum class Assumption { none, nonzero, positive, interval };
  std::string name;
  Assumption assumption = Assumption::none;
  Rational lo, hi;
};

struct FnDecl {
  std::string name;
  std::vector<std::string> args;
};

// Dt^alpha u_dep = F + H, F collects the terms containing jets.
struct Equation {
  int dep = 0;
  Expr rhs, F, H;
};

struct PDESystem {
  Names names;
  std::optional<Rational> alpha_value;
  std::vector<ParamDecl> params;
  std::vector<FnDecl> fns;
  std::vector<Equation> equations;  // one per dependent, in dependent order

  int p() const { return int(names.space.size()); }
  int q() const { return int(names.deps.size()); }
  int order() const;  // highest space-derivative order in F

  Expr alpha() const;
  Expr t() const { return Expr::indep(0, names.t); }
  Expr x(int i) const { return Expr::indep(i + 1, names.space.at(size_t(i))); }  // 0-based
  Expr u(int s) const { return Expr::jet(s, std::vector<int>(size_t(p()), 0)); }
  Expr jet(int s, std::vector<int> theta) const { return Expr::jet(s, std::move(theta)); }
  std::vector<Expr> space_vars() const;
  AssumptionRegistry assumptions() const;
  const ParamDecl* param(const std::string& name) const;
};

// Splits rhs into F (terms with jets) and H.
void split_rhs(Equation& eq);

struct Diagnostic {
  std::string code;
  std::string detail;
  std::string str() const { return detail.empty() ? code : code + "(" + detail + ")"; }
};
std::vector<Diagnostic> validate_system(const PDESystem& sys);

struct ClassifiedTerm {
  Expr term;
  Expr coeff;     // free of jets
  Expr monomial;  // jet-bearing part
  bool linear = false;
};

struct TermClassification {
  std::vector<std::vector<ClassifiedTerm>> eqs;
  std::vector<Expr> I(int s) const;
  std::vector<Expr> J(int s) const;
  std::vector<Expr> I_minus_J(int s) const;
};
TermClassification classify_terms(const PDESystem& sys);

// ---- DSL ----

PDESystem parse_system(const std::string& text, bool validate = true);
std::string emit_system(const PDESystem& sys);

// Expression in the context of a system; extra names may be declared as params.
Expr parse_expr(const std::string& text, const PDESystem& ctx, const std::vector<std::string>& extra_params = {});

// Concrete generator file:  param c;  tau = ...;  xi[x] = ...;  eta[u] = ...;
struct GeneratorSpec {
  std::vector<std::string> params;
  Expr tau;
  std::vector<Expr> xi;
  std::vector<Expr> eta;
  std::vector<std::pair<std::string, Expr>> bindings;  // let NAME = EXPR; applied to the system
};
GeneratorSpec parse_generator(const std::string& text, const PDESystem& ctx);

}  // namespace fraclie
