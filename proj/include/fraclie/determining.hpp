#pragma once

#include <string>
#include <vector>

#include "fraclie/prolongation.hpp"

namespace fraclie {

struct DetEquation {
  Expr expr;      // == 0, affine in the unknown atoms
  int eq = 0;     // source equation
  Expr monomial;  // jet monomial it multiplied
};

struct DeterminingSystem {
  Branch branch = Branch::symbolic;
  AnsatzGenerator ans;
  std::vector<DetEquation> integer_eqs;
  std::vector<Expr> frac_eqs;  // one per equation, == 0
  std::vector<std::string> assumptions;
};

// Invariance expression of equation s on the solution space, for tau(t), xi(x)
// and eta linear in u. dt_alpha_h[s] stands for Dt^alpha of the u-free part of eta_s.
Expr full_condition(const PDESystem& sys, const Expr& tau, const std::vector<Expr>& xi,
                    const std::vector<Expr>& eta, const std::vector<Expr>& dt_alpha_h, int s);

// Jet-bearing part of the invariance expression, per equation.
std::vector<Expr> invariance_condition(const PDESystem& sys, const AnsatzGenerator& ans);
// Jet-free part, per equation. Contains the opaque Dt^alpha h_s.
std::vector<Expr> h_condition(const PDESystem& sys, const AnsatzGenerator& ans);

struct Separation {
  std::vector<DetEquation> eqs;
  std::vector<std::string> assumptions;
};
Separation separate(const Expr& cond, const PDESystem& sys, int eq = 0);

DeterminingSystem build_determining_system(const PDESystem& sys, Branch b = Branch::symbolic);

// Light autoreduction: vanishing atoms propagate to their derivatives, an
// equation solved for a lone derivative atom rewrites the others, duplicates
// up to a rational factor are dropped.
std::vector<Expr> autoreduce(const std::vector<Expr>& eqs);

// Same linear span and same equation set up to order and rational scaling.
bool same_up_to_scaling(const std::vector<Expr>& a, const std::vector<Expr>& b);

}  // namespace fraclie
