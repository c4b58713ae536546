#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclie/expr.hpp"

namespace fraclie {

// Open interval; a missing bound is infinite.
struct Interval {
  std::optional<Rational> lo, hi;
};

enum class Sign { negative, zero, positive, unknown };

// Sign oracle for exponent forms. The order symbol always lies in (0,1).
class AssumptionRegistry {
 public:
  explicit AssumptionRegistry(const std::string& alpha_name = "alpha");
  void declare(const std::string& sym, Interval iv);
  Sign sign(const ExponentForm& f) const;
  const std::map<std::string, Interval>& intervals() const { return intervals_; }

 private:
  std::map<std::string, Interval> intervals_;
};

struct PowerTerm {
  Expr coeff;  // free of t
  ExponentForm exp;
};

// sum_j c_j t^{gamma_j} with pairwise distinct exponents
class PowerSum {
 public:
  PowerSum() = default;
  static PowerSum from_expr(const Expr& e, const Expr& t);
  static PowerSum monomial(const Expr& coeff, const ExponentForm& exp);

  const std::vector<PowerTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  Expr to_expr(const Expr& t) const;
  void add(const Expr& coeff, const ExponentForm& exp);

 private:
  std::vector<PowerTerm> terms_;
};

Expr gen_binomial(const Expr& alpha, long k);

// Riemann-Liouville derivative of order alpha, termwise power rule.
PowerSum rl_derivative(const PowerSum& f, const Expr& alpha, const AssumptionRegistry& reg);
// Order alpha - k for k >= 1 is a fractional integral; needs exponents > -1.
PowerSum rl_shifted(const PowerSum& f, const Expr& alpha, long k, const AssumptionRegistry& reg);

// k-th classical t-derivative of a power sum
PowerSum power_sum_derivative(const PowerSum& f, long k);

Expr leibniz_expand(const PowerSum& u, const PowerSum& v, const Expr& alpha, long K,
                    const AssumptionRegistry& reg, const Expr& t);

Expr rl_series_truncated(const Expr& e, const Expr& alpha, long K, const Expr& t);

}  // namespace fraclie
