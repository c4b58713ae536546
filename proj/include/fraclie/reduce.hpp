#pragma once

#include <string>
#include <vector>

#include "fraclie/solver.hpp"

namespace fraclie {

// Removes x_i: jets differentiated in x_i vanish, the remaining jets and
// space variables are renumbered. gen must be exactly D_{x_i}.
PDESystem translation_reduction(const PDESystem& sys, const Generator& gen);

// z_i = x_i t^(z_exp[i]), U_s = u_s t^(u_exp[s]) for t Dt + a_i x_i Dx_i + b_s u_s Du_s (up to chi1).
struct EKReduction {
  Expr chi1;
  std::vector<Expr> a, b;
  std::vector<Expr> z_exp;    // -a_i/chi1
  std::vector<Expr> u_exp;    // -b_s/chi1
  std::vector<Expr> delta;    // chi1/a_i, per space variable
  std::vector<Expr> epsilon;  // 1 + b_s/chi1 - alpha, per dependent
  Expr order;                 // alpha

  // X applied to z_i and U_s, divided by the monomial; zero by construction.
  std::vector<Expr> invariance_residuals() const;
  std::vector<std::string> similarity_text(const Names& names, Style style = Style::text) const;
  std::vector<std::string> operator_text(const Names& names, Style style = Style::text) const;
};

EKReduction scaling_similarity(const PDESystem& sys, const Generator& gen);

struct ExactCheck {
  bool ok = true;
  std::vector<Expr> residuals;  // Dt^alpha sol_s - (F_s + H_s)|sol, per equation
};

// sol_s are power sums in t whose coefficients may depend on the space variables.
ExactCheck verify_exact_solution(const PDESystem& sys, const std::vector<Expr>& sol);

}  // namespace fraclie
