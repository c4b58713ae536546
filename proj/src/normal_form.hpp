#pragma once

#include <map>
#include <vector>

#include "fraclie/expr.hpp"

namespace fraclie::detail {

struct Factor {
  Expr atom;
  ExponentForm exp;
};

// Factors sorted by atom, atoms unique, exponents nonzero.
using Monomial = std::vector<Factor>;

int compare_monomial(const Monomial& a, const Monomial& b);
struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_monomial(a, b) < 0; }
};

// Expanded polynomial in atoms: monomial -> nonzero rational coefficient.
using NF = std::map<Monomial, Rational, MonoLess>;

NF normalize(const Expr& e);
NF nf_mul(const NF& a, const NF& b);
void nf_add(NF& acc, const NF& b, const Rational& scale = 1);
Expr to_tree(const NF& nf);
Expr monomial_expr(const Monomial& m);
Expr term_expr(const Monomial& m, const Rational& c);

Rational rpow(const Rational& r, long k);

}  // namespace fraclie::detail
