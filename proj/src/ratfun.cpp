#include "fraclie/ratfun.hpp"

#include <algorithm>
#include <functional>

#include "normal_form.hpp"

namespace fraclie {

bool Poly::ExpsLess::operator()(const Exps& a, const Exps& b) const {
  auto i = a.rbegin(), j = b.rbegin();
  for (; i != a.rend() && j != b.rend(); ++i, ++j) {
    if (i->first != j->first) return i->first < j->first;
    if (i->second != j->second) return i->second < j->second;
  }
  return i == a.rend() && j != b.rend();
}

Poly::Poly(const Rational& c) {
  if (c != 0) terms_[{}] = c;
}

Poly Poly::var(int v, int k) {
  Poly p;
  if (k == 0) return Poly(1);
  p.terms_[{{v, k}}] = 1;
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Poly::constant_value() const {
  auto it = terms_.find({});
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::max_var() const {
  int m = -1;
  for (const auto& [e, c] : terms_)
    if (!e.empty()) m = std::max(m, e.back().first);
  return m;
}

int Poly::degree(int v) const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    for (const auto& [x, k] : e)
      if (x == v) d = std::max(d, k);
  return d;
}

void Poly::add_term(const Exps& e, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const { return scaled(-1); }

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

namespace {

Poly::Exps mul_exps(const Poly::Exps& a, const Poly::Exps& b) {
  Poly::Exps out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

// a / b as monomials, if b divides a
bool div_exps(const Poly::Exps& a, const Poly::Exps& b, Poly::Exps& out) {
  out.clear();
  size_t j = 0;
  for (const auto& [v, k] : a) {
    int sub = 0;
    if (j < b.size() && b[j].first < v) return false;
    if (j < b.size() && b[j].first == v) sub = b[j++].second;
    if (sub > k) return false;
    if (k - sub > 0) out.emplace_back(v, k - sub);
  }
  return j == b.size();
}

}  // namespace

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(mul_exps(ea, eb), ca * cb);
  return out;
}

Poly Poly::scaled(const Rational& r) const {
  Poly out;
  if (r == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * r);
  return out;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  for (; i != terms_.end(); ++i, ++j)
    if (i->first != j->first || i->second != j->second) return false;
  return true;
}

std::map<int, Poly> Poly::coeffs(int v) const {
  std::map<int, Poly> out;
  for (const auto& [e, c] : terms_) {
    Exps rest;
    int d = 0;
    for (const auto& [x, k] : e) {
      if (x == v) d = k;
      else rest.emplace_back(x, k);
    }
    out[d].add_term(rest, c);
  }
  return out;
}

Poly Poly::pow(int k) const {
  Poly out(1), b = *this;
  while (k > 0) {
    if (k & 1) out = out * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return out;
}

Poly Poly::divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (b.is_constant()) return a.scaled(Rational(1) / b.constant_value());
  Poly q, r = a;
  const auto& [lb, cb] = b.leading();
  Exps m;
  while (!r.is_zero()) {
    const auto& [lr, cr] = r.leading();
    if (!div_exps(lr, lb, m)) throw Error("inexact polynomial division");
    Poly t;
    t.terms_[m] = cr / cb;
    q += t;
    r -= t * b;
  }
  return q;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(Rational(1) / leading().second);
}

namespace {

Poly content(const Poly& p, int v) {
  Poly g;
  for (const auto& [d, c] : p.coeffs(v)) {
    g = Poly::gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return Poly(1);
  }
  return g;
}

Poly primitive(const Poly& p, int v) { return Poly::divide(p, content(p, v)); }

Poly prem(const Poly& a, const Poly& b, int v) {
  int db = b.degree(v);
  Poly lcb = b.coeffs(v).rbegin()->second;
  Poly r = a;
  while (!r.is_zero() && r.degree(v) >= db) {
    int dr = r.degree(v);
    Poly lcr = r.coeffs(v).rbegin()->second;
    r = lcb * r - lcr * Poly::var(v, dr - db) * b;
  }
  return r;
}

}  // namespace

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return a.monic();
  int v = std::max(a.max_var(), b.max_var());
  if (a.degree(v) == 0) return gcd(a, content(b, v));
  if (b.degree(v) == 0) return gcd(content(a, v), b);
  Poly ca = content(a, v), cb = content(b, v);
  Poly pa = divide(a, ca), pb = divide(b, cb);
  Poly c = gcd(ca, cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  while (true) {
    Poly r = prem(pa, pb, v);
    if (r.is_zero()) break;
    if (r.degree(v) == 0) {
      pb = Poly(1);
      break;
    }
    pa = pb;
    pb = primitive(r, v);
  }
  Poly g = pb.is_constant() ? Poly(1) : primitive(pb, v);
  return (c * g).monic();
}

// ---- rational functions ----

RatFun::RatFun(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (!den_.is_constant() && !num_.is_constant()) {
    Poly g = Poly::gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = Poly::divide(num_, g);
      den_ = Poly::divide(den_, g);
    }
  }
  Rational lc = den_.leading().second;
  if (lc != 1) {
    num_ = num_.scaled(Rational(1) / lc);
    den_ = den_.scaled(Rational(1) / lc);
  }
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
  return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  if (a.is_zero() || b.is_zero()) return RatFun();
  if (a.den_.is_constant() && b.den_.is_constant()) {
    RatFun r;
    r.num_ = a.num_ * b.num_;
    r.den_ = Poly(1);
    return r;
  }
  return RatFun(a.num_ * b.num_, a.den_ * b.den_);
}

RatFun operator/(const RatFun& a, const RatFun& b) {
  if (b.is_zero()) throw DivisionByZero("rational function division by zero");
  return RatFun(a.num_ * b.den_, a.den_ * b.num_);
}

// ---- bridge to expressions ----

int VarTable::var_of(const Expr& atom) {
  auto it = index_.find(atom);
  if (it != index_.end()) return it->second;
  int v = int(atoms_.size());
  atoms_.push_back(atom);
  index_.emplace(atom, v);
  return v;
}

namespace {

RatFun rf_pow(const RatFun& r, long k) {
  if (k >= 0) return RatFun(r.num().pow(int(k)), r.den().pow(int(k)));
  return RatFun(r.den().pow(int(-k)), r.num().pow(int(-k)));
}

mpz_class floor_of(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

}  // namespace

RatFun VarTable::to_ratfun(const Expr& e) {
  using namespace detail;
  std::function<RatFun(const Expr&, const ExponentForm&)> factor;
  auto gamma_of = [&](const ExponentForm& z) -> RatFun {
    Rational c0 = z.constant();
    if (z.is_constant() && is_integer(c0)) {
      if (c0 <= 0) throw DivisionByZero("Gamma at a pole");
      Rational f = 1;
      for (long j = 2; j < c0.get_num().get_si(); ++j) f *= j;
      return RatFun(f);
    }
    // shift so that the constant part of the base lies in (0,1]
    mpz_class m = -floor_of(Rational(-c0)) - 1;
    long mm = m.get_si();
    ExponentForm z0 = z - ExponentForm(Rational(m));
    RatFun out(Poly::var(var_of(Expr::gamma(from_exponent(z0)))), Poly(1));
    if (mm >= 0) {
      for (long j = 0; j < mm; ++j) out = out * to_ratfun(from_exponent(z0 + ExponentForm(j)));
    } else {
      for (long j = mm; j < 0; ++j) out = out / to_ratfun(from_exponent(z0 + ExponentForm(j)));
    }
    return out;
  };
  factor = [&](const Expr& atom, const ExponentForm& x) -> RatFun {
    if (auto k = x.as_integer()) {
      if (atom.is(Kind::Gamma)) {
        if (auto z = to_exponent(atom.base())) return rf_pow(gamma_of(*z), *k);
      }
      if (atom.is(Kind::Sum)) return rf_pow(to_ratfun(atom), *k);
      if (atom.is_number()) return RatFun(rpow(atom.number_value(), *k));
      return rf_pow(RatFun(Poly::var(var_of(atom)), Poly(1)), *k);
    }
    // t^(alpha-1) -> t^(-1) * [t^alpha]
    mpz_class fl = floor_of(x.constant());
    ExponentForm rest = x - ExponentForm(Rational(fl));
    RatFun r(Poly::var(var_of(Expr::power(atom, rest))), Poly(1));
    if (fl != 0) r = r * factor(atom, ExponentForm(Rational(fl)));
    return r;
  };
  RatFun acc;
  for (const auto& [m, c] : normalize(e)) {
    RatFun t(c);
    for (const auto& f : m) t = t * factor(f.atom, f.exp);
    acc = acc + t;
  }
  return acc;
}

Expr VarTable::to_expr(const Poly& p) const {
  std::vector<Expr> terms;
  for (const auto& [e, c] : p.terms()) {
    std::vector<Expr> f{Expr(c)};
    for (const auto& [v, k] : e) f.push_back(k == 1 ? atom(v) : Expr::power(atom(v), ExponentForm(k)));
    terms.push_back(Expr::product(f));
  }
  return simplify(Expr::sum(terms));
}

Expr VarTable::to_expr(const RatFun& r) const {
  Expr n = to_expr(r.num());
  if (r.den().is_constant()) return simplify(n * Expr(Rational(1) / r.den().constant_value()));
  return simplify(n * Expr::power(to_expr(r.den()), ExponentForm(-1)));
}

bool is_zero_exact(const Expr& e) {
  VarTable vt;
  return vt.to_ratfun(e).is_zero();
}

Expr rational_normal_form(const Expr& e) {
  VarTable vt;
  RatFun r = vt.to_ratfun(e);
  return vt.to_expr(r);
}

}  // namespace fraclie
