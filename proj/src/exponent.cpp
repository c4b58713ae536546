#include "fraclie/exponent.hpp"

#include <sstream>

namespace fraclie {

int compare(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

ExponentForm ExponentForm::symbol(const std::string& name, const Rational& coeff) {
  ExponentForm f;
  if (coeff != 0) f.terms_[name] = coeff;
  return f;
}

Rational ExponentForm::coeff(const std::string& sym) const {
  auto it = terms_.find(sym);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<long> ExponentForm::as_integer() const {
  if (!is_integer() || !constant_.get_num().fits_slong_p()) return std::nullopt;
  return constant_.get_num().get_si();
}

ExponentForm ExponentForm::operator-() const {
  ExponentForm r = *this;
  r *= -1;
  return r;
}

ExponentForm& ExponentForm::operator+=(const ExponentForm& o) {
  constant_ += o.constant_;
  for (const auto& [k, v] : o.terms_) {
    Rational& c = terms_[k];
    c += v;
    if (c == 0) terms_.erase(k);
  }
  return *this;
}

ExponentForm& ExponentForm::operator-=(const ExponentForm& o) { return *this += -o; }

ExponentForm& ExponentForm::operator*=(const Rational& r) {
  if (r == 0) {
    constant_ = 0;
    terms_.clear();
    return *this;
  }
  constant_ *= r;
  for (auto& [k, v] : terms_) v *= r;
  return *this;
}

ExponentForm ExponentForm::substitute(const std::string& sym, const ExponentForm& value) const {
  auto it = terms_.find(sym);
  if (it == terms_.end()) return *this;
  ExponentForm r = *this;
  Rational c = it->second;
  r.terms_.erase(sym);
  r += value * c;
  return r;
}

int ExponentForm::compare(const ExponentForm& o) const {
  if (int c = fraclie::compare(constant_, o.constant_)) return c;
  auto a = terms_.begin(), b = o.terms_.begin();
  for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
    if (a->first != b->first) return a->first < b->first ? -1 : 1;
    if (int c = fraclie::compare(a->second, b->second)) return c;
  }
  if (a != terms_.end()) return 1;
  if (b != o.terms_.end()) return -1;
  return 0;
}

std::string ExponentForm::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    Rational a = abs(v);
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    if (a != 1) os << a.get_str() << "*";
    os << k;
    first = false;
  }
  if (first) return constant_.get_str();
  if (constant_ != 0) os << (constant_ < 0 ? " - " : " + ") << Rational(abs(constant_)).get_str();
  return os.str();
}

}  // namespace fraclie
