#pragma once

#include <string>
#include <vector>

#include "fraclie/determining.hpp"

namespace fraclie {

struct Generator {
  Expr tau;
  std::vector<Expr> xi;
  std::vector<Expr> eta;
  std::string str(const Names& names, Style style = Style::text) const;
};

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> residuals;  // "<eq>:<where>: <expr>" for every nonzero residual
};

struct SolverConfig {
  int poly_degree = 3;
  std::vector<Expr> h_templates;  // in t and space variables; empty selects the default library
  enum class Branches { both, zero, nonzero } branches = Branches::both;
  bool degree_check = true;
};

struct BranchResult {
  Branch branch;
  int dimension = 0;       // null-space dimension including generators shared with other branches
  bool contributes = false;
};

struct SolutionBasis {
  std::vector<Generator> generators;
  std::vector<VerifyReport> certificates;
  std::vector<std::string> assumptions;
  std::vector<std::string> notes;
  std::vector<BranchResult> branches;
  int poly_degree = 0;
  std::vector<Expr> templates;
  size_t dimension() const { return generators.size(); }
};

std::vector<Expr> default_h_templates(const PDESystem& sys);

// ds is usually built with Branch::symbolic; the requested branches are substituted here.
SolutionBasis solve(const PDESystem& sys, const DeterminingSystem& ds, const SolverConfig& cfg = {});

VerifyReport verify_generator(const PDESystem& sys, const Generator& gen);

// RREF over the coefficients of t, x, u monomials in (tau, xi, eta).
std::vector<Generator> normalize_basis(const PDESystem& sys, const std::vector<Generator>& gens);

}  // namespace fraclie
