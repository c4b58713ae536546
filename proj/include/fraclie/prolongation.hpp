#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclie/pde.hpp"

namespace fraclie {

// symbolic keeps chi2 and gamma_s free; zero sets chi2 = gamma_s = 0;
// nonzero keeps chi2 and sets gamma_s = (alpha - 1)/2.
enum class Branch { symbolic, zero, nonzero };
std::string branch_name(Branch b);

// tau = chi2 t^2 + chi1 t, xi_i(x),
// eta_s = [g_s(x) + gamma_s T] u_s + sum_{i != s} f_{s,i}(x) u_i + h_s(t,x),  T = D_t tau.
struct AnsatzGenerator {
  Branch branch = Branch::symbolic;
  Expr alpha;
  Expr chi1, chi2;
  std::vector<Expr> gamma;              // per dependent
  std::vector<Expr> xi;                 // per space variable
  std::vector<Expr> g;                  // per dependent
  std::vector<std::vector<Expr>> f;     // f[s][i], zero on the diagonal
  std::vector<Expr> h;                  // per dependent
  Expr tau, T;
  std::vector<Expr> eta;

  static AnsatzGenerator make(const PDESystem& sys, Branch b);
  // Replaces tau (T and eta are rebuilt). Used to probe corrupted generators.
  void set_tau(const Expr& new_tau, const PDESystem& sys);
  // Unknown function heads and constants, in column order.
  std::vector<Expr> unknowns() const;
};

// Nullary unknown constant.
Expr unknown_constant(const std::string& name);
bool is_unknown_atom(const Expr& e);

Expr eta_theta(const AnsatzGenerator& ans, const PDESystem& sys, int s, const std::vector<int>& theta);
// Same with concrete xi, eta.
Expr eta_theta(const std::vector<Expr>& xi, const Expr& eta_s, const PDESystem& sys, int s,
               const std::vector<int>& theta);

struct SeriesCoeffs {
  std::vector<Expr> dep;    // coefficient of Dt^(alpha-k) u_i
  std::vector<Expr> space;  // coefficient of Dt^(alpha-k) of the x_i derivative of u_s
};

struct EtaAlpha {
  Expr local;  // Dt^alpha h_s kept as an opaque fractional application
  std::map<int, SeriesCoeffs> series;
};

EtaAlpha eta_alpha_ansatz(const AnsatzGenerator& ans, const PDESystem& sys, int s, int k_max = 2);

// Series coefficient of order k for a generator with tau(t), xi(x) and eta linear in u.
SeriesCoeffs series_coeffs(const Expr& tau, const std::vector<Expr>& xi, const Expr& eta_s,
                           const PDESystem& sys, int s, int k);

// Truncation at n <= N of the part of Dt^alpha(eta) nonlinear in u and its t-derivatives.
Expr mu_truncated(const Expr& eta, int N, int q, const Expr& alpha, const Expr& t, int p);

struct AuxResidual {
  int k;
  int dep;
  std::string what;  // "u:<i>" or "x:<i>"
  Expr residual;
};

struct AuxCheck {
  bool ok = true;
  std::vector<AuxResidual> residuals;
  int first_failure() const { return residuals.empty() ? 0 : residuals.front().k; }
};

AuxCheck check_aux_conditions(const AnsatzGenerator& ans, const PDESystem& sys, int k_max);

}  // namespace fraclie
