#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fraclie/expr.hpp"
#include "fraclie/frac_calc.hpp"

namespace fraclie {

// Lanczos approximation, g = 7, 9 coefficients.
double lanczos_gamma(double x);

// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^a (1+x)^b.
struct GaussJacobi {
  std::vector<double> nodes, weights;
  static GaussJacobi make(int n, double a, double b);
};

struct OracleValue {
  double value = 0;
  double error = 0;  // difference between two resolutions
};

struct NumericTerm {
  double coeff;
  Rational gamma;
};

// Power-sum path: s = t*sigma, sigma = w^m, Gauss-Jacobi in w.
std::vector<OracleValue> numeric_rl_oracle(const std::vector<NumericTerm>& f, const Rational& alpha,
                                           const std::vector<double>& t_grid, int nodes = 64);
// Sampled path: Grunwald-Letnikov with Richardson extrapolation.
std::vector<OracleValue> numeric_rl_oracle(const std::function<double(double)>& f, const Rational& alpha,
                                           const std::vector<double>& t_grid, double step_fraction = 1.0 / 4096);

// Numeric evaluation of an expression; params and variables by name.
double evaluate(const Expr& e, const std::map<std::string, double>& values, const Names& names = {});

// Rational exponents of a power sum at concrete parameter values.
std::vector<NumericTerm> numeric_terms(const PowerSum& p, const std::map<std::string, Rational>& values,
                                       const Names& names = {});

Rational evaluate_exponent(const ExponentForm& f, const std::map<std::string, Rational>& values);

}  // namespace fraclie
