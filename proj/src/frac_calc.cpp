#include "fraclie/frac_calc.hpp"

#include <algorithm>

#include "normal_form.hpp"

namespace fraclie {

AssumptionRegistry::AssumptionRegistry(const std::string& alpha_name) {
  intervals_[alpha_name] = Interval{Rational(0), Rational(1)};
}

void AssumptionRegistry::declare(const std::string& sym, Interval iv) { intervals_[sym] = iv; }

Sign AssumptionRegistry::sign(const ExponentForm& f) const {
  if (f.is_zero()) return Sign::zero;
  if (f.is_constant()) return f.constant() > 0 ? Sign::positive : Sign::negative;
  std::optional<Rational> lo = f.constant(), hi = f.constant();
  for (const auto& [sym, c] : f.terms()) {
    auto it = intervals_.find(sym);
    Interval iv = it == intervals_.end() ? Interval{} : it->second;
    const auto& for_lo = c > 0 ? iv.lo : iv.hi;
    const auto& for_hi = c > 0 ? iv.hi : iv.lo;
    if (lo && for_lo) *lo += c * *for_lo;
    else lo.reset();
    if (hi && for_hi) *hi += c * *for_hi;
    else hi.reset();
  }
  // every bound is open and at least one symbol contributes, so equality is not attained
  if (lo && *lo >= 0) return Sign::positive;
  if (hi && *hi <= 0) return Sign::negative;
  return Sign::unknown;
}

// ---- power sums ----

PowerSum PowerSum::monomial(const Expr& coeff, const ExponentForm& exp) {
  PowerSum p;
  p.add(coeff, exp);
  return p;
}

void PowerSum::add(const Expr& coeff, const ExponentForm& exp) {
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const PowerTerm& t) { return t.exp == exp; });
  if (it != terms_.end()) {
    it->coeff = simplify(it->coeff + coeff);
    if (it->coeff.is_zero()) terms_.erase(it);
    return;
  }
  Expr c = simplify(coeff);
  if (c.is_zero()) return;
  auto pos = std::find_if(terms_.begin(), terms_.end(),
                          [&](const PowerTerm& t) { return exp.compare(t.exp) < 0; });
  terms_.insert(pos, PowerTerm{c, exp});
}

PowerSum PowerSum::from_expr(const Expr& e, const Expr& t) {
  using namespace detail;
  PowerSum p;
  for (const auto& [m, c] : normalize(e)) {
    ExponentForm x;
    Monomial rest;
    for (const auto& f : m) {
      if (f.atom == t) x = f.exp;
      else if (contains(f.atom, t)) throw NonPolynomial(to_string(f.atom) + " is not a power of t");
      else rest.push_back(f);
    }
    p.add(term_expr(rest, c), x);
  }
  return p;
}

Expr PowerSum::to_expr(const Expr& t) const {
  std::vector<Expr> terms;
  for (const auto& term : terms_) terms.push_back(term.coeff * Expr::power(t, term.exp));
  return simplify(Expr::sum(terms));
}

Expr gen_binomial(const Expr& alpha, long k) {
  if (k < 0) throw NegativeIndex("binomial index " + std::to_string(k));
  Expr c(1);
  for (long j = 1; j <= k; ++j) c = simplify(c * (alpha - Expr(j - 1)) * Expr(rat(1, j)));
  return c;
}

namespace {

ExponentForm order_form(const Expr& alpha) {
  auto f = to_exponent(alpha);
  if (!f) throw SemanticError("fractional order is not affine: " + to_string(alpha));
  return *f;
}

// c t^g -> c Gamma(g+1)/Gamma(g+1-nu) t^(g-nu)
PowerTerm power_rule(const PowerTerm& term, const ExponentForm& nu) {
  ExponentForm g1 = term.exp + ExponentForm(1);
  Expr c = term.coeff * Expr::gamma(from_exponent(g1)) / Expr::gamma(from_exponent(g1 - nu));
  return PowerTerm{gamma_simplify(c), term.exp - nu};
}

}  // namespace

PowerSum rl_derivative(const PowerSum& f, const Expr& alpha, const AssumptionRegistry& reg) {
  ExponentForm nu = order_form(alpha);
  PowerSum out;
  for (const auto& term : f.terms()) {
    ExponentForm d = term.exp - (nu - ExponentForm(1));
    switch (reg.sign(d)) {
      case Sign::zero:
        continue;
      case Sign::positive: {
        PowerTerm r = power_rule(term, nu);
        out.add(r.coeff, r.exp);
        break;
      }
      case Sign::negative:
        throw ExponentOutOfDomain("t^(" + term.exp.str() + ") lies below the order minus one");
      case Sign::unknown:
        throw UndecidableExponent("sign of " + d.str() + " is not decided by the declared assumptions");
    }
  }
  return out;
}

PowerSum rl_shifted(const PowerSum& f, const Expr& alpha, long k, const AssumptionRegistry& reg) {
  if (k == 0) return rl_derivative(f, alpha, reg);
  if (k < 0) throw NegativeIndex("shift " + std::to_string(k));
  ExponentForm nu = order_form(alpha) - ExponentForm(k);
  PowerSum out;
  for (const auto& term : f.terms()) {
    switch (reg.sign(term.exp + ExponentForm(1))) {
      case Sign::positive: {
        PowerTerm r = power_rule(term, nu);
        out.add(r.coeff, r.exp);
        break;
      }
      case Sign::unknown:
        throw UndecidableExponent("integrability of t^(" + term.exp.str() + ") is not decided");
      default:
        throw ExponentOutOfDomain("t^(" + term.exp.str() + ") is not integrable at 0");
    }
  }
  return out;
}

PowerSum power_sum_derivative(const PowerSum& f, long k) {
  PowerSum out;
  for (const auto& term : f.terms()) {
    Expr c = term.coeff;
    for (long j = 0; j < k; ++j) c = c * from_exponent(term.exp - ExponentForm(j));
    out.add(c, term.exp - ExponentForm(k));
  }
  return out;
}

Expr leibniz_expand(const PowerSum& u, const PowerSum& v, const Expr& alpha, long K,
                    const AssumptionRegistry& reg, const Expr& t) {
  if (K < 0) throw NegativeIndex("truncation order " + std::to_string(K));
  std::vector<Expr> terms;
  for (long k = 0; k <= K; ++k) {
    PowerSum du = power_sum_derivative(u, k);
    if (du.empty()) continue;
    PowerSum fv = rl_shifted(v, alpha, k, reg);
    terms.push_back(gen_binomial(alpha, k) * du.to_expr(t) * fv.to_expr(t));
  }
  return gamma_simplify(Expr::sum(terms));
}

Expr rl_series_truncated(const Expr& e, const Expr& alpha, long K, const Expr& t) {
  if (K < 0) throw NegativeIndex("truncation order " + std::to_string(K));
  auto a = order_form(alpha);
  std::vector<Expr> terms;
  Expr d = e;
  for (long k = 0; k <= K; ++k) {
    if (k > 0) d = total_derivative(d, t);
    Expr g = Expr::gamma(from_exponent(ExponentForm(k + 1) - a));
    terms.push_back(gen_binomial(alpha, k) * Expr::power(t, ExponentForm(k) - a) / g * d);
  }
  return gamma_simplify(Expr::sum(terms));
}

}  // namespace fraclie
