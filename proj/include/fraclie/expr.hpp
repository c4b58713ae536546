#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraclie/errors.hpp"
#include "fraclie/exponent.hpp"

namespace fraclie {

// Order of the enumerators is the canonical order of node kinds.
enum class Kind { Number, Param, Indep, Fn, Gamma, Jet, Power, Product, Sum };

enum class FnRole { unknown, opaque };

struct JetVar {
  int dep = 0;              // 0-based dependent index
  std::vector<int> theta;   // space multi-index, one slot per space variable
  int t_order = 0;
  int frac_offset = -1;     // k >= 0 denotes Dt^(alpha-k) u_dep

  int order() const;
  bool is_fractional() const { return frac_offset >= 0; }
};

class Node;

class Expr {
 public:
  Expr();  // zero
  Expr(const Rational& r);  // NOLINT
  Expr(long v);             // NOLINT
  Expr(int v) : Expr(long(v)) {}  // NOLINT

  static Expr number(const Rational& r);
  static Expr param(const std::string& name);
  // index 0 is t, index i >= 1 is x_i
  static Expr indep(int index, const std::string& name);
  static Expr jet(const JetVar& j);
  static Expr jet(int dep, std::vector<int> theta, int t_order = 0, int frac_offset = -1);
  static Expr fn(const std::string& name, std::vector<Expr> args, std::vector<int> deriv = {},
                 FnRole role = FnRole::unknown, int frac = -1);
  static Expr gamma(const Expr& arg);
  static Expr power(const Expr& base, const ExponentForm& e);
  static Expr product(std::vector<Expr> factors);
  static Expr sum(std::vector<Expr> terms);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_zero() const;
  bool is_one() const;

  const Rational& number_value() const;
  const std::string& name() const;  // Param, Indep, Fn
  int index() const;                // Indep
  const JetVar& jet_var() const;
  FnRole role() const;
  const std::vector<int>& deriv() const;  // Fn
  int frac() const;                       // Fn
  const std::vector<Expr>& children() const;  // Fn args, Gamma arg, Power base, operands
  const Expr& base() const;                   // Power base, Gamma arg
  const ExponentForm& exponent() const;

  const Node* raw() const { return node_.get(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& base, const ExponentForm& e);

// Structural three-way comparison; total order.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Names used when rendering jets and variables.
struct Names {
  std::string t = "t";
  std::string alpha = "alpha";
  std::vector<std::string> space;
  std::vector<std::string> deps;
  std::string space_name(int i) const;  // 0-based
  std::string dep_name(int s) const;
};

enum class Style { text, dsl, latex };
std::string to_string(const Expr& e, const Names& names = {}, Style style = Style::text);
std::ostream& operator<<(std::ostream& os, const Expr& e);

// ---- kernel operations ----

Expr simplify(const Expr& e);
Expr expand(const Expr& e);  // alias of simplify; the canonical form is fully expanded

// Keys may be Param, Indep, Jet or Fn atoms.
using Bindings = std::map<Expr, Expr, ExprLess>;
Expr substitute(const Expr& e, const Bindings& b);

Expr partial_derivative(const Expr& e, const Expr& var);
Expr total_derivative(const Expr& e, const Expr& var);

struct CollectOptions {
  // Opaque function applications whose arguments are basis jets count as
  // monomial factors instead of raising NonPolynomial.
  bool opaque_factors = false;
};
std::map<Expr, Expr, ExprLess> collect_monomials(const Expr& e, const std::vector<Expr>& basis,
                                                  const CollectOptions& opts = {});
// collect over every jet occurring in e
std::map<Expr, Expr, ExprLess> collect_jet_monomials(const Expr& e, const CollectOptions& opts = {});

Expr gamma_simplify(const Expr& e);

// ---- helpers ----

bool contains(const Expr& e, const Expr& atom);
bool contains_kind(const Expr& e, Kind k);
bool contains_jet(const Expr& e);
bool contains_fractional(const Expr& e);
std::vector<Expr> jets_of(const Expr& e);  // sorted, unique
std::vector<Expr> fn_apps_of(const Expr& e, std::optional<FnRole> role = std::nullopt);
std::vector<std::string> params_of(const Expr& e);

// Affine view of an expression over rationals and parameters.
std::optional<ExponentForm> to_exponent(const Expr& e);
Expr from_exponent(const ExponentForm& f);

// Additive terms of the canonical form.
std::vector<Expr> terms_of(const Expr& e);

// Jet with the given index slot incremented; slot 0 is t.
Expr jet_increment(const Expr& jet, int slot);

}  // namespace fraclie
