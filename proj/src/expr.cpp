#include "fraclie/expr.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

namespace fraclie {

class Node {
 public:
  Kind kind = Kind::Number;
  Rational number;
  std::string name;
  int index = 0;
  JetVar jet;
  FnRole role = FnRole::unknown;
  std::vector<int> deriv;
  int frac = -1;
  std::vector<Expr> children;
  ExponentForm exponent;
};

namespace {

std::shared_ptr<Node> make(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

const Expr& zero_expr() {
  static const Expr z = Expr::number(0);
  return z;
}

}  // namespace

int JetVar::order() const {
  int o = t_order;
  for (int v : theta) o += v;
  return o;
}

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& r) {
  auto n = make(Kind::Number);
  n->number = r;
  node_ = std::move(n);
}

Expr Expr::number(const Rational& r) { return Expr(r); }

Expr Expr::param(const std::string& name) {
  auto n = make(Kind::Param);
  n->name = name;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::indep(int index, const std::string& name) {
  auto n = make(Kind::Indep);
  n->index = index;
  n->name = name;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::jet(const JetVar& j) {
  if (j.frac_offset >= 0 && j.t_order > 0)
    throw FractionalChain("fractional jet with positive t-order");
  for (int v : j.theta)
    if (v < 0) throw NegativeIndex("negative jet multi-index");
  auto n = make(Kind::Jet);
  n->jet = j;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::jet(int dep, std::vector<int> theta, int t_order, int frac_offset) {
  return jet(JetVar{dep, std::move(theta), t_order, frac_offset});
}

Expr Expr::fn(const std::string& name, std::vector<Expr> args, std::vector<int> deriv, FnRole role,
              int frac) {
  if (deriv.empty()) deriv.assign(args.size(), 0);
  if (deriv.size() != args.size()) throw std::invalid_argument("derivative index arity mismatch");
  auto n = make(Kind::Fn);
  n->name = name;
  n->children = std::move(args);
  n->deriv = std::move(deriv);
  n->role = role;
  n->frac = frac;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::gamma(const Expr& arg) {
  auto n = make(Kind::Gamma);
  n->children = {arg};
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(const Expr& base, const ExponentForm& e) {
  auto n = make(Kind::Power);
  n->children = {base};
  n->exponent = e;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return Expr(1);
  if (factors.size() == 1) return factors[0];
  auto n = make(Kind::Product);
  n->children = std::move(factors);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return Expr(0);
  if (terms.size() == 1) return terms[0];
  auto n = make(Kind::Sum);
  n->children = std::move(terms);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->number == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Number && node_->number == 1; }
const Rational& Expr::number_value() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
int Expr::index() const { return node_->index; }
const JetVar& Expr::jet_var() const { return node_->jet; }
FnRole Expr::role() const { return node_->role; }
const std::vector<int>& Expr::deriv() const { return node_->deriv; }
int Expr::frac() const { return node_->frac; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
const Expr& Expr::base() const { return node_->children.empty() ? zero_expr() : node_->children[0]; }
const ExponentForm& Expr::exponent() const { return node_->exponent; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::sum({a, b});
}
Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr(Rational(-a.number_value()));
  return Expr::product({Expr(-1), a});
}
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::product({a, b});
}
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DivisionByZero("division by literal zero");
  return a * Expr::power(b, ExponentForm(-1));
}

Expr pow(const Expr& base, const ExponentForm& e) { return Expr::power(base, e); }

// ---- comparison ----

namespace {

int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_vec(const std::vector<int>& a, const std::vector<int>& b) {
  if (int c = cmp_int(long(a.size()), long(b.size()))) return c;
  for (size_t i = 0; i < a.size(); ++i)
    if (int c = cmp_int(a[i], b[i])) return c;
  return 0;
}

int cmp_children(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (int c = compare(a[i], b[i])) return c;
  return cmp_int(long(a.size()), long(b.size()));
}

int cmp_jet(const JetVar& a, const JetVar& b) {
  if (int c = cmp_int(a.dep, b.dep)) return c;
  int oa = 0, ob = 0;
  for (int v : a.theta) oa += v;
  for (int v : b.theta) ob += v;
  if (int c = cmp_int(oa, ob)) return c;
  // higher weight on earlier slots sorts first: u_x before u_y
  if (a.theta.size() == b.theta.size()) {
    for (size_t i = 0; i < a.theta.size(); ++i)
      if (int c = cmp_int(b.theta[i], a.theta[i])) return c;
  } else if (int c = cmp_vec(a.theta, b.theta)) {
    return c;
  }
  if (int c = cmp_int(a.t_order, b.t_order)) return c;
  return cmp_int(a.frac_offset, b.frac_offset);
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  const Node* x = a.raw();
  const Node* y = b.raw();
  if (x == y) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case Kind::Number:
      return compare(x->number, y->number);
    case Kind::Param:
      return x->name.compare(y->name) < 0 ? -1 : (x->name == y->name ? 0 : 1);
    case Kind::Indep:
      if (int c = cmp_int(x->index, y->index)) return c;
      return x->name.compare(y->name) < 0 ? -1 : (x->name == y->name ? 0 : 1);
    case Kind::Fn:
      if (x->name != y->name) return x->name < y->name ? -1 : 1;
      if (int c = cmp_int(int(x->role), int(y->role))) return c;
      if (int c = cmp_int(x->frac, y->frac)) return c;
      if (int c = cmp_vec(x->deriv, y->deriv)) return c;
      return cmp_children(x->children, y->children);
    case Kind::Gamma:
      return compare(x->children[0], y->children[0]);
    case Kind::Jet:
      return cmp_jet(x->jet, y->jet);
    case Kind::Power:
      if (int c = compare(x->children[0], y->children[0])) return c;
      return x->exponent.compare(y->exponent);
    case Kind::Product:
    case Kind::Sum:
      return cmp_children(x->children, y->children);
  }
  return 0;
}

// ---- names and printing ----

std::string Names::space_name(int i) const {
  if (i >= 0 && i < int(space.size())) return space[i];
  return "x" + std::to_string(i + 1);
}

std::string Names::dep_name(int s) const {
  if (s >= 0 && s < int(deps.size())) return deps[s];
  return "u" + std::to_string(s + 1);
}

namespace {

const std::set<std::string>& greek() {
  static const std::set<std::string> g = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta",
                                          "eta",   "theta", "lambda", "Lambda", "mu",    "nu",
                                          "xi",    "pi",    "rho",   "sigma", "tau",     "phi",
                                          "chi",   "psi",   "omega", "Gamma"};
  return g;
}

std::string latex_name(const std::string& n) {
  std::string head = n, tail;
  auto us = n.find('_');
  if (us != std::string::npos) {
    head = n.substr(0, us);
    tail = n.substr(us + 1);
    std::replace(tail.begin(), tail.end(), '_', ',');
  } else {
    size_t d = n.find_first_of("0123456789");
    if (d != std::string::npos && d > 0) {
      head = n.substr(0, d);
      tail = n.substr(d);
    }
  }
  if (greek().count(head)) head = "\\" + head;
  else if (head.size() > 1) head = "\\mathrm{" + head + "}";
  return tail.empty() ? head : head + "_{" + tail + "}";
}

class Printer {
 public:
  Printer(const Names& n, Style s) : names_(n), style_(s) {}

  std::string print(const Expr& e) {
    switch (e.kind()) {
      case Kind::Sum:
        return sum(e);
      case Kind::Product:
      case Kind::Power:
        return product(e);
      case Kind::Number:
        return number(e.number_value());
      default:
        return atom(e);
    }
  }

 private:
  const Names& names_;
  Style style_;

  bool latex() const { return style_ == Style::latex; }

  std::string number(const Rational& r) {
    if (latex() && !is_integer(r)) {
      std::string s = r < 0 ? "-" : "";
      Rational a = abs(r);
      return s + "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
    }
    return r.get_str();
  }

  std::string exponent(const ExponentForm& f) {
    std::string s = f.str();
    if (latex()) {
      std::ostringstream os;
      bool first = true;
      for (const auto& [k, v] : f.terms()) {
        Rational a = abs(v);
        if (!first) os << (v < 0 ? " - " : " + ");
        else if (v < 0) os << "-";
        if (a != 1) os << number(a);
        os << latex_name(k);
        first = false;
      }
      if (first) return number(f.constant());
      if (f.constant() != 0)
        os << (f.constant() < 0 ? " - " : " + ") << number(Rational(abs(f.constant())));
      return "{" + os.str() + "}";
    }
    if (f.is_integer() && f.constant() >= 0) return s;
    if (f.constant() == 0 && f.terms().size() == 1 && f.terms().begin()->second == 1) return s;
    return "(" + s + ")";
  }

  std::string sum(const Expr& e) {
    std::string out;
    bool first = true;
    for (const auto& t : e.children()) {
      auto [neg, body] = signed_term(t);
      if (first) out += neg ? "-" + body : body;
      else out += (neg ? " - " : " + ") + body;
      first = false;
    }
    return out;
  }

  // Returns (negative, magnitude rendering).
  std::pair<bool, std::string> signed_term(const Expr& t) {
    if (t.is_number()) {
      const Rational& r = t.number_value();
      return {r < 0, number(Rational(abs(r)))};
    }
    if (t.is(Kind::Product) && !t.children().empty() && t.children()[0].is_number() &&
        t.children()[0].number_value() < 0) {
      std::vector<Expr> f = t.children();
      f[0] = Expr(Rational(-f[0].number_value()));
      return {true, product(Expr::product(f))};
    }
    return {false, print_factor_context(t)};
  }

  std::string print_factor_context(const Expr& t) {
    if (t.is(Kind::Product) || t.is(Kind::Power)) return product(t);
    return print(t);
  }

  std::string wrap_base(const Expr& b) {
    std::string s = print(b);
    bool simple = b.is(Kind::Param) || b.is(Kind::Indep) || b.is(Kind::Jet) || b.is(Kind::Fn) ||
                  b.is(Kind::Gamma) || (b.is_number() && is_integer(b.number_value()) &&
                                        b.number_value() >= 0);
    if (style_ == Style::dsl && b.is(Kind::Jet) && b.jet_var().order() > 0) simple = true;
    return simple ? s : (latex() ? "\\left(" + s + "\\right)" : "(" + s + ")");
  }

  std::string power_factor(const Expr& base, const ExponentForm& e) {
    std::string b = wrap_base(base);
    if (e.is_one()) return b;
    return b + "^" + exponent(e);
  }

  std::string product(const Expr& e) {
    std::vector<Expr> factors = e.is(Kind::Product) ? e.children() : std::vector<Expr>{e};
    Rational coeff = 1;
    std::vector<std::string> num, den;
    for (const auto& f : factors) {
      if (f.is_number()) {
        coeff *= f.number_value();
      } else if (f.is(Kind::Power) && f.exponent().is_constant() && f.exponent().constant() < 0) {
        den.push_back(power_factor(f.base(), -f.exponent()));
      } else if (f.is(Kind::Power)) {
        num.push_back(power_factor(f.base(), f.exponent()));
      } else if (f.is(Kind::Sum)) {
        num.push_back(latex() ? "\\left(" + print(f) + "\\right)" : "(" + print(f) + ")");
      } else {
        num.push_back(print(f));
      }
    }
    std::string sign = coeff < 0 ? "-" : "";
    Rational a = abs(coeff);
    std::string p = a.get_num().get_str(), q = a.get_den().get_str();
    if (p != "1" || num.empty()) num.insert(num.begin(), p);
    if (q != "1") den.insert(den.begin(), q);
    std::string sep = latex() ? " " : "*";
    auto join = [&](const std::vector<std::string>& v) {
      std::string s;
      for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
      return s;
    };
    if (den.empty()) return sign + join(num);
    if (latex()) return sign + "\\frac{" + join(num) + "}{" + join(den) + "}";
    std::string d = join(den);
    if (den.size() > 1) d = "(" + d + ")";
    return sign + join(num) + "/" + d;
  }

  std::string jet_suffix(const JetVar& j) {
    std::string s;
    for (size_t i = 0; i < j.theta.size(); ++i)
      for (int k = 0; k < j.theta[i]; ++k) s += names_.space_name(int(i));
    for (int k = 0; k < j.t_order; ++k) s += names_.t;
    return s;
  }

  std::string frac_order(int k) {
    std::string a = latex() ? latex_name(names_.alpha) : names_.alpha;
    if (k == 0) return a;
    return (latex() ? "{" : "(") + a + " - " + std::to_string(k) + (latex() ? "}" : ")");
  }

  std::string jet(const JetVar& j) {
    std::string u = names_.dep_name(j.dep);
    if (style_ == Style::dsl) {
      std::string inner = u;
      for (int i = int(j.theta.size()) - 1; i >= 0; --i) {
        if (j.theta[i] == 0) continue;
        std::string op = "D" + names_.space_name(i);
        if (j.theta[i] > 1) op += "^" + std::to_string(j.theta[i]);
        inner = op + "(" + inner + ")";
      }
      if (j.t_order > 0) inner = "Dt^" + std::to_string(j.t_order) + "(" + inner + ")";
      if (j.is_fractional()) inner = "Dt^" + frac_order(j.frac_offset) + "(" + inner + ")";
      return inner;
    }
    std::string sfx = jet_suffix(j);
    std::string base = latex() ? latex_name(u) : u;
    if (!sfx.empty()) base += latex() ? "_{" + sfx + "}" : "_" + sfx;
    if (j.is_fractional()) {
      if (latex()) return "\\partial_t^{" + frac_order(j.frac_offset) + "}" + base;
      return "Dt^" + frac_order(j.frac_offset) + "(" + base + ")";
    }
    return base;
  }

  std::string fn(const Expr& e) {
    std::string args;
    for (size_t i = 0; i < e.children().size(); ++i)
      args += (i ? "," : "") + print(e.children()[i]);
    const auto& d = e.deriv();
    int total = 0;
    for (int v : d) total += v;
    std::string n = latex() ? latex_name(e.name()) : e.name();
    if (total > 0) {
      if (e.role() == FnRole::opaque && e.children().size() == 1 && total <= 3) {
        n += std::string(size_t(total), '\'');
      } else {
        std::string sfx;
        for (size_t i = 0; i < d.size(); ++i)
          for (int k = 0; k < d[i]; ++k) sfx += print(e.children()[i]);
        n = latex() ? "{" + n + "}_{," + sfx + "}" : n + "_{" + sfx + "}";
      }
    }
    std::string s = n + "(" + args + ")";
    if (e.frac() >= 0) {
      if (latex()) return "\\partial_t^{" + frac_order(e.frac()) + "}" + s;
      return "Dt^" + frac_order(e.frac()) + "(" + s + ")";
    }
    return s;
  }

  std::string atom(const Expr& e) {
    switch (e.kind()) {
      case Kind::Param:
      case Kind::Indep:
        return latex() ? latex_name(e.name()) : e.name();
      case Kind::Jet:
        return jet(e.jet_var());
      case Kind::Fn:
        return fn(e);
      case Kind::Gamma:
        return (latex() ? "\\Gamma\\left(" : "Gamma(") + print(e.base()) + (latex() ? "\\right)" : ")");
      default:
        return print(e);
    }
  }
};

}  // namespace

std::string to_string(const Expr& e, const Names& names, Style style) {
  return Printer(names, style).print(e);
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---- traversal helpers ----

namespace {

void visit(const Expr& e, const std::function<bool(const Expr&)>& f) {
  if (!f(e)) return;
  for (const auto& c : e.children()) visit(c, f);
}

}  // namespace

bool contains(const Expr& e, const Expr& atom) {
  bool found = false;
  visit(e, [&](const Expr& x) {
    if (found) return false;
    if (x == atom) found = true;
    return !found;
  });
  return found;
}

bool contains_kind(const Expr& e, Kind k) {
  bool found = false;
  visit(e, [&](const Expr& x) {
    if (x.kind() == k) found = true;
    return !found;
  });
  return found;
}

bool contains_jet(const Expr& e) { return contains_kind(e, Kind::Jet); }

bool contains_fractional(const Expr& e) {
  bool found = false;
  visit(e, [&](const Expr& x) {
    if ((x.is(Kind::Jet) && x.jet_var().is_fractional()) || (x.is(Kind::Fn) && x.frac() >= 0))
      found = true;
    return !found;
  });
  return found;
}

std::vector<Expr> jets_of(const Expr& e) {
  std::set<Expr, ExprLess> s;
  visit(e, [&](const Expr& x) {
    if (x.is(Kind::Jet)) s.insert(x);
    return true;
  });
  return {s.begin(), s.end()};
}

std::vector<Expr> fn_apps_of(const Expr& e, std::optional<FnRole> role) {
  std::set<Expr, ExprLess> s;
  visit(e, [&](const Expr& x) {
    if (x.is(Kind::Fn) && (!role || x.role() == *role)) s.insert(x);
    return true;
  });
  return {s.begin(), s.end()};
}

std::vector<std::string> params_of(const Expr& e) {
  std::set<std::string> s;
  visit(e, [&](const Expr& x) {
    if (x.is(Kind::Param)) s.insert(x.name());
    if (x.is(Kind::Power))
      for (const auto& [k, v] : x.exponent().terms()) s.insert(k);
    return true;
  });
  return {s.begin(), s.end()};
}

Expr from_exponent(const ExponentForm& f) {
  std::vector<Expr> terms;
  if (f.constant() != 0) terms.push_back(Expr(f.constant()));
  for (const auto& [k, v] : f.terms()) {
    Expr p = Expr::param(k);
    terms.push_back(v == 1 ? p : Expr(v) * p);
  }
  return simplify(Expr::sum(terms));
}

Expr jet_increment(const Expr& jet, int slot) {
  JetVar j = jet.jet_var();
  if (slot == 0) {
    if (j.is_fractional()) throw FractionalChain("t-derivative of a fractional jet");
    ++j.t_order;
  } else {
    if (int(j.theta.size()) < slot) j.theta.resize(size_t(slot), 0);
    ++j.theta[size_t(slot - 1)];
  }
  return Expr::jet(j);
}

}  // namespace fraclie
