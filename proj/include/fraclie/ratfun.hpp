#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclie/expr.hpp"

namespace fraclie {

// Sparse multivariate polynomial over Q in integer-indexed variables.
class Poly {
 public:
  using Exps = std::vector<std::pair<int, int>>;  // (var, exponent > 0), sorted by var
  struct ExpsLess {
    bool operator()(const Exps& a, const Exps& b) const;
  };
  using Terms = std::map<Exps, Rational, ExpsLess>;

  Poly() = default;
  Poly(const Rational& c);  // NOLINT
  static Poly var(int v, int k = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;
  int max_var() const;
  int degree(int v) const;
  size_t size() const { return terms_.size(); }
  // leading term under lex order with higher variable indices dominating
  const std::pair<const Exps, Rational>& leading() const { return *terms_.rbegin(); }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& r) const;
  bool operator==(const Poly& o) const;

  std::map<int, Poly> coeffs(int v) const;  // by degree in v
  Poly pow(int k) const;

  // exact division; throws if b does not divide a
  static Poly divide(const Poly& a, const Poly& b);
  static Poly gcd(const Poly& a, const Poly& b);
  Poly monic() const;

 private:
  void add_term(const Exps& e, const Rational& c);
  Terms terms_;
};

class RatFun {
 public:
  RatFun() : num_(0), den_(1) {}
  RatFun(const Rational& c) : num_(c), den_(1) {}  // NOLINT
  RatFun(Poly n, Poly d);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }
  size_t weight() const { return num_.size() + den_.size(); }

  RatFun operator-() const;
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  bool operator==(const RatFun& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  Poly num_, den_;
};

// Maps atoms of an expression to polynomial variables. Gamma atoms with
// affine arguments are shifted to a canonical base with constant part in
// (0,1], so Gamma(a+1) and Gamma(a) share one variable.
class VarTable {
 public:
  int var_of(const Expr& atom);
  const Expr& atom(int v) const { return atoms_.at(size_t(v)); }
  size_t size() const { return atoms_.size(); }

  RatFun to_ratfun(const Expr& e);
  Expr to_expr(const RatFun& r) const;
  Expr to_expr(const Poly& p) const;

 private:
  std::vector<Expr> atoms_;
  std::map<Expr, int, ExprLess> index_;
};

// Exact zero test with Gamma recurrences and rational-function cancellation.
bool is_zero_exact(const Expr& e);

// Rational-function normal form of an expression (params, Gamma, opaque atoms).
Expr rational_normal_form(const Expr& e);

}  // namespace fraclie
