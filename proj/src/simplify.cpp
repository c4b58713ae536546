#include <algorithm>
#include <functional>
#include <set>

#include "fraclie/expr.hpp"
#include "normal_form.hpp"

namespace fraclie {
namespace detail {

Rational rpow(const Rational& r, long k) {
  if (k < 0) {
    if (r == 0) throw DivisionByZero("zero raised to a negative power");
    return rpow(Rational(1) / r, -k);
  }
  Rational out = 1, b = r;
  while (k > 0) {
    if (k & 1) out *= b;
    b *= b;
    k >>= 1;
  }
  return out;
}

int compare_monomial(const Monomial& a, const Monomial& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = compare(a[i].atom, b[i].atom)) return c;
    if (int c = a[i].exp.compare(b[i].exp)) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

namespace {

NF nf_number(const Rational& r) {
  NF n;
  if (r != 0) n[{}] = r;
  return n;
}

NF nf_atom(const Expr& a, const ExponentForm& e = ExponentForm(1)) {
  if (e.is_zero()) return nf_number(1);
  NF n;
  n[Monomial{Factor{a, e}}] = 1;
  return n;
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? 1 : (j == b.size() ? -1 : compare(a[i].atom, b[j].atom));
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      ExponentForm e = a[i].exp + b[j].exp;
      if (!e.is_zero()) out.push_back(Factor{a[i].atom, e});
      ++i;
      ++j;
    }
  }
  return out;
}

NF nf_pow_int(const NF& b, long k);

// Folds rational atoms with integer exponents into the coefficient and
// expands sum atoms that reached a positive integer power.
NF fixup(Rational c, const Monomial& m) {
  Monomial keep;
  std::vector<std::pair<Expr, long>> expand_sums;
  for (const auto& f : m) {
    auto k = f.exp.as_integer();
    if (f.atom.is_number() && k) {
      c *= rpow(f.atom.number_value(), *k);
    } else if (f.atom.is(Kind::Sum) && k && *k > 0) {
      expand_sums.emplace_back(f.atom, *k);
    } else {
      keep.push_back(f);
    }
  }
  NF out;
  if (c == 0) return out;
  out[keep] = c;
  for (const auto& [s, k] : expand_sums) out = nf_mul(out, nf_pow_int(normalize(s), k));
  return out;
}

NF nf_pow_int(const NF& b, long k) {
  NF out = nf_number(1), base = b;
  while (k > 0) {
    if (k & 1) out = nf_mul(out, base);
    k >>= 1;
    if (k) base = nf_mul(base, base);
  }
  return out;
}

NF normalize_power(const Expr& base, const ExponentForm& e) {
  if (e.is_zero()) return nf_number(1);
  NF b = normalize(base);
  auto k = e.as_integer();
  if (b.empty()) {
    if (e.is_constant() && e.constant() <= 0) throw DivisionByZero("zero raised to a nonpositive power");
    return {};
  }
  if (b.size() == 1) {
    const auto& [m, c] = *b.begin();
    if (k) {
      Monomial nm = m;
      for (auto& f : nm) f.exp *= Rational(*k);
      return fixup(rpow(c, *k), nm);
    }
    Monomial nm;
    for (const auto& f : m) {
      if (f.exp.is_constant()) {
        nm.push_back(Factor{f.atom, e * f.exp.constant()});
      } else if (e.is_constant()) {
        nm.push_back(Factor{f.atom, f.exp * e.constant()});
      } else {
        return nf_atom(to_tree(b), e);
      }
    }
    if (c != 1) nm = merge(nm, Monomial{Factor{Expr(c), e}});
    std::sort(nm.begin(), nm.end(),
              [](const Factor& x, const Factor& y) { return compare(x.atom, y.atom) < 0; });
    return fixup(1, nm);
  }
  if (k && *k > 0) return nf_pow_int(b, *k);
  if (k) {
    // primitive base: leading coefficient 1
    Rational lead = b.begin()->second;
    NF prim;
    for (const auto& [m, c] : b) prim[m] = c / lead;
    NF out = nf_atom(to_tree(prim), e);
    for (auto& [m, c] : out) c *= rpow(lead, *k);
    return out;
  }
  return nf_atom(to_tree(b), e);
}

}  // namespace

void nf_add(NF& acc, const NF& b, const Rational& scale) {
  if (scale == 0) return;
  for (const auto& [m, c] : b) {
    auto it = acc.find(m);
    if (it == acc.end()) {
      acc.emplace(m, c * scale);
    } else {
      it->second += c * scale;
      if (it->second == 0) acc.erase(it);
    }
  }
}

NF nf_mul(const NF& a, const NF& b) {
  NF out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = merge(ma, mb);
      bool plain = true;
      for (const auto& f : m) {
        if ((f.atom.is_number() || f.atom.is(Kind::Sum)) && f.exp.is_integer() &&
            (f.atom.is_number() || f.exp.constant() > 0)) {
          plain = false;
          break;
        }
      }
      if (plain) {
        NF one;
        one[std::move(m)] = ca * cb;
        nf_add(out, one);
      } else {
        nf_add(out, fixup(ca * cb, m));
      }
    }
  }
  return out;
}

NF normalize(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return nf_number(e.number_value());
    case Kind::Param:
    case Kind::Indep:
    case Kind::Jet:
      return nf_atom(e);
    case Kind::Fn: {
      std::vector<Expr> args;
      args.reserve(e.children().size());
      for (const auto& a : e.children()) args.push_back(to_tree(normalize(a)));
      return nf_atom(Expr::fn(e.name(), args, e.deriv(), e.role(), e.frac()));
    }
    case Kind::Gamma:
      return nf_atom(Expr::gamma(to_tree(normalize(e.base()))));
    case Kind::Power:
      return normalize_power(e.base(), e.exponent());
    case Kind::Product: {
      NF acc = nf_number(1);
      for (const auto& c : e.children()) {
        acc = nf_mul(acc, normalize(c));
        if (acc.empty()) break;
      }
      return acc;
    }
    case Kind::Sum: {
      NF acc;
      for (const auto& c : e.children()) nf_add(acc, normalize(c));
      return acc;
    }
  }
  return {};
}

Expr monomial_expr(const Monomial& m) { return term_expr(m, 1); }

Expr term_expr(const Monomial& m, const Rational& c) {
  std::vector<Expr> f;
  f.reserve(m.size() + 1);
  if (c != 1 || m.empty()) f.push_back(Expr(c));
  for (const auto& x : m) f.push_back(x.exp.is_one() ? x.atom : Expr::power(x.atom, x.exp));
  return Expr::product(std::move(f));
}

Expr to_tree(const NF& nf) {
  std::vector<Expr> terms;
  terms.reserve(nf.size());
  for (const auto& [m, c] : nf) terms.push_back(term_expr(m, c));
  return Expr::sum(std::move(terms));
}

}  // namespace detail

using namespace detail;

Expr simplify(const Expr& e) { return to_tree(normalize(e)); }
Expr expand(const Expr& e) { return simplify(e); }

std::vector<Expr> terms_of(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& [m, c] : normalize(e)) out.push_back(term_expr(m, c));
  return out;
}

std::optional<ExponentForm> to_exponent(const Expr& e) {
  ExponentForm f;
  for (const auto& [m, c] : normalize(e)) {
    if (m.empty()) {
      f += ExponentForm(c);
    } else if (m.size() == 1 && m[0].atom.is(Kind::Param) && m[0].exp.is_one()) {
      f += ExponentForm::symbol(m[0].atom.name(), c);
    } else {
      return std::nullopt;
    }
  }
  return f;
}

// ---- substitution ----

namespace {

bool mentions(const Expr& value, const Expr& key) {
  if (contains(value, key)) return true;
  if (key.is(Kind::Param)) {
    for (const auto& p : params_of(value))
      if (p == key.name()) return true;
  }
  return false;
}

void check_acyclic(const Bindings& b) {
  std::vector<Expr> keys;
  for (const auto& [k, v] : b) keys.push_back(k);
  size_t n = keys.size();
  std::vector<std::vector<size_t>> adj(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (mentions(b.at(keys[i]), keys[j])) adj[i].push_back(j);
  std::vector<int> state(n, 0);
  std::function<void(size_t)> dfs = [&](size_t i) {
    state[i] = 1;
    for (size_t j : adj[i]) {
      if (state[j] == 1) throw CyclicBinding("binding for " + to_string(keys[i]) + " refers back to " + to_string(keys[j]));
      if (state[j] == 0) dfs(j);
    }
    state[i] = 2;
  };
  for (size_t i = 0; i < n; ++i)
    if (state[i] == 0) dfs(i);
}

Expr subst_rec(const Expr& e, const Bindings& b, const std::map<std::string, ExponentForm>& exps) {
  auto it = b.find(e);
  if (it != b.end()) return it->second;
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Param:
    case Kind::Indep:
    case Kind::Jet:
      return e;
    case Kind::Fn: {
      std::vector<Expr> args;
      for (const auto& a : e.children()) args.push_back(subst_rec(a, b, exps));
      return Expr::fn(e.name(), args, e.deriv(), e.role(), e.frac());
    }
    case Kind::Gamma:
      return Expr::gamma(subst_rec(e.base(), b, exps));
    case Kind::Power: {
      ExponentForm x = e.exponent();
      for (const auto& [name, v] : exps) x = x.substitute(name, v);
      return Expr::power(subst_rec(e.base(), b, exps), x);
    }
    case Kind::Product:
    case Kind::Sum: {
      std::vector<Expr> c;
      c.reserve(e.children().size());
      for (const auto& x : e.children()) c.push_back(subst_rec(x, b, exps));
      return e.is(Kind::Sum) ? Expr::sum(c) : Expr::product(c);
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& b) {
  if (b.empty()) return simplify(e);
  check_acyclic(b);
  std::map<std::string, ExponentForm> exps;
  std::set<std::string> used = {};
  for (const auto& p : params_of(e)) used.insert(p);
  for (const auto& [k, v] : b) {
    if (!k.is(Kind::Param) || !used.count(k.name())) continue;
    auto f = to_exponent(v);
    if (f) exps[k.name()] = *f;
  }
  // a parameter occurring in an exponent must map to an affine value
  std::function<void(const Expr&)> check = [&](const Expr& x) {
    if (x.is(Kind::Power)) {
      for (const auto& [name, c] : x.exponent().terms()) {
        auto it = b.find(Expr::param(name));
        if (it != b.end() && !exps.count(name))
          throw SemanticError("parameter " + name + " in an exponent bound to a non-affine value");
      }
    }
    for (const auto& c : x.children()) check(c);
  };
  check(e);
  return simplify(subst_rec(e, b, exps));
}

// ---- differentiation ----

namespace {

Expr d_raw(const Expr& e, const Expr& var) {
  switch (e.kind()) {
    case Kind::Number:
    case Kind::Param:
      return Expr(0);
    case Kind::Indep:
    case Kind::Jet:
      return e == var ? Expr(1) : Expr(0);
    case Kind::Fn: {
      std::vector<Expr> terms;
      const auto& args = e.children();
      for (size_t j = 0; j < args.size(); ++j) {
        Expr da = d_raw(args[j], var);
        if (da.is_zero()) continue;
        if (e.frac() >= 0 && var.is(Kind::Indep) && var.index() == 0)
          throw FractionalChain("t-derivative of a fractional application of " + e.name());
        std::vector<int> d = e.deriv();
        ++d[j];
        terms.push_back(da * Expr::fn(e.name(), args, d, e.role(), e.frac()));
      }
      return Expr::sum(terms);
    }
    case Kind::Gamma:
      if (contains(e.base(), var)) throw Error("derivative of Gamma with variable argument");
      return Expr(0);
    case Kind::Power: {
      if (!contains(e.base(), var)) return Expr(0);
      const ExponentForm& x = e.exponent();
      return from_exponent(x) * Expr::power(e.base(), x - ExponentForm(1)) * d_raw(e.base(), var);
    }
    case Kind::Product: {
      std::vector<Expr> terms;
      const auto& c = e.children();
      for (size_t i = 0; i < c.size(); ++i) {
        if (!contains(c[i], var)) continue;
        std::vector<Expr> f = c;
        f[i] = d_raw(c[i], var);
        terms.push_back(Expr::product(f));
      }
      return Expr::sum(terms);
    }
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& c : e.children())
        if (contains(c, var)) terms.push_back(d_raw(c, var));
      return Expr::sum(terms);
    }
  }
  return Expr(0);
}

}  // namespace

Expr partial_derivative(const Expr& e, const Expr& var) {
  if (!contains(e, var)) return Expr(0);
  return simplify(d_raw(e, var));
}

Expr total_derivative(const Expr& e, const Expr& var) {
  if (!var.is(Kind::Indep)) throw std::invalid_argument("total derivative needs an independent variable");
  int slot = var.index();
  auto jets = jets_of(e);
  std::vector<Expr> terms{d_raw(e, var)};
  for (const auto& j : jets) {
    if (slot == 0 && j.jet_var().is_fractional())
      throw FractionalChain("total t-derivative through a fractional jet");
    Expr dj = d_raw(e, j);
    terms.push_back(dj * jet_increment(j, slot));
  }
  return simplify(Expr::sum(terms));
}

// ---- monomial collection ----

std::map<Expr, Expr, ExprLess> collect_monomials(const Expr& e, const std::vector<Expr>& basis,
                                                  const CollectOptions& opts) {
  std::set<Expr, ExprLess> bs(basis.begin(), basis.end());
  auto has_basis = [&](const Expr& x) {
    for (const auto& j : jets_of(x))
      if (bs.count(j)) return true;
    return false;
  };
  std::map<Expr, NF, ExprLess> groups;
  for (const auto& [m, c] : normalize(e)) {
    Monomial key, coeff;
    for (const auto& f : m) {
      if (f.atom.is(Kind::Jet) && bs.count(f.atom)) {
        key.push_back(f);
      } else if (has_basis(f.atom)) {
        if (f.atom.is(Kind::Fn) && f.atom.role() == FnRole::opaque && opts.opaque_factors)
          key.push_back(f);
        else
          throw NonPolynomial(to_string(f.atom) + " is not polynomial in the basis jets");
      } else {
        coeff.push_back(f);
      }
    }
    NF one;
    one[coeff] = c;
    nf_add(groups[monomial_expr(key)], one);
  }
  std::map<Expr, Expr, ExprLess> out;
  for (const auto& [k, v] : groups)
    if (!v.empty()) out.emplace(k, to_tree(v));
  return out;
}

std::map<Expr, Expr, ExprLess> collect_jet_monomials(const Expr& e, const CollectOptions& opts) {
  return collect_monomials(e, jets_of(e), opts);
}

// ---- Gamma recurrence ----

namespace {

// (z)(z+1)...(z+m-1)
NF pochhammer(const ExponentForm& z, long m) {
  NF out;
  out[{}] = 1;
  for (long j = 0; j < m; ++j) out = nf_mul(out, normalize(from_exponent(z + ExponentForm(j))));
  return out;
}

struct GammaEntry {
  size_t pos;
  ExponentForm arg;
  long exp;
};

NF gamma_monomial(const Monomial& m, const Rational& c) {
  // class key: symbolic part plus fractional part of the constant
  std::map<std::string, std::vector<GammaEntry>> classes;
  std::vector<bool> drop(m.size(), false);
  for (size_t i = 0; i < m.size(); ++i) {
    const auto& f = m[i];
    if (!f.atom.is(Kind::Gamma)) continue;
    auto k = f.exp.as_integer();
    if (!k) continue;
    const Expr& a = f.atom.base();
    if (a.is_number() && (a.number_value() == 1 || a.number_value() == 2)) {
      drop[i] = true;
      continue;
    }
    auto z = to_exponent(a);
    if (!z) continue;
    Rational c0 = z->constant();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), c0.get_num_mpz_t(), c0.get_den_mpz_t());
    ExponentForm key = *z - ExponentForm(Rational(fl));
    classes[key.str()].push_back(GammaEntry{i, *z, *k});
  }
  NF factor;
  factor[{}] = 1;
  std::vector<long> remaining(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i)
    if (auto k = m[i].exp.as_integer()) remaining[i] = *k;
  for (auto& [key, entries] : classes) {
    for (auto& num : entries) {
      while (remaining[num.pos] > 0) {
        GammaEntry* best = nullptr;
        Rational best_d;
        for (auto& den : entries) {
          if (remaining[den.pos] >= 0) continue;
          Rational d = abs((num.arg - den.arg).constant());
          if (!best || d < best_d) {
            best = &den;
            best_d = d;
          }
        }
        if (!best) break;
        long d = (num.arg - best->arg).constant().get_num().get_si();
        if (d >= 0) {
          factor = nf_mul(factor, pochhammer(best->arg, d));
        } else {
          NF p = pochhammer(num.arg, -d);
          factor = nf_mul(factor, normalize(Expr::power(to_tree(p), ExponentForm(-1))));
        }
        --remaining[num.pos];
        ++remaining[best->pos];
      }
    }
  }
  Monomial rest;
  for (size_t i = 0; i < m.size(); ++i) {
    if (drop[i]) continue;
    if (m[i].atom.is(Kind::Gamma) && m[i].exp.is_integer()) {
      if (remaining[i] != 0) rest.push_back(Factor{m[i].atom, ExponentForm(remaining[i])});
    } else {
      rest.push_back(m[i]);
    }
  }
  NF base;
  base[rest] = c;
  return nf_mul(base, factor);
}

}  // namespace

Expr gamma_simplify(const Expr& e) {
  NF acc;
  for (const auto& [m, c] : normalize(e)) nf_add(acc, gamma_monomial(m, c));
  return to_tree(acc);
}

}  // namespace fraclie
