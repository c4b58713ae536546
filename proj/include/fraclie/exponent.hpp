#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <optional>
#include <string>

namespace fraclie {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

int compare(const Rational& a, const Rational& b);

// Exact Q-affine combination c0 + sum_k c_k * sym_k. Symbols are alpha and
// declared parameters, keyed by name.
class ExponentForm {
 public:
  ExponentForm() = default;
  ExponentForm(const Rational& c) : constant_(c) {}  // NOLINT
  ExponentForm(long c) : constant_(c) {}             // NOLINT
  static ExponentForm symbol(const std::string& name, const Rational& coeff = 1);

  const Rational& constant() const { return constant_; }
  Rational coeff(const std::string& sym) const;
  const std::map<std::string, Rational>& terms() const { return terms_; }

  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }
  bool is_one() const { return terms_.empty() && constant_ == 1; }
  bool is_integer() const { return terms_.empty() && fraclie::is_integer(constant_); }
  std::optional<long> as_integer() const;

  ExponentForm operator-() const;
  ExponentForm& operator+=(const ExponentForm& o);
  ExponentForm& operator-=(const ExponentForm& o);
  ExponentForm& operator*=(const Rational& r);
  friend ExponentForm operator+(ExponentForm a, const ExponentForm& b) { return a += b; }
  friend ExponentForm operator-(ExponentForm a, const ExponentForm& b) { return a -= b; }
  friend ExponentForm operator*(ExponentForm a, const Rational& r) { return a *= r; }
  friend ExponentForm operator*(const Rational& r, ExponentForm a) { return a *= r; }

  // Replace symbol `sym` by the affine form `value`.
  ExponentForm substitute(const std::string& sym, const ExponentForm& value) const;

  bool operator==(const ExponentForm& o) const { return compare(o) == 0; }
  int compare(const ExponentForm& o) const;

  std::string str() const;

 private:
  Rational constant_ = 0;
  std::map<std::string, Rational> terms_;
};

}  // namespace fraclie
