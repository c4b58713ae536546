#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "fraclie/pde.hpp"

namespace fraclie {
namespace {

struct Token {
  enum Type { ident, number, symbol, end } type = end;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) {
    size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k, ++i) {
        if (src[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '#') {
        while (i < src.size() && src[i] != '\n') advance(1);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
        tokens_.push_back({Token::ident, src.substr(i, j - i), line, col});
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        if (j < src.size() && src[j] == '.')
          throw SyntaxError("floating-point literals are not allowed", line, col);
        tokens_.push_back({Token::number, src.substr(i, j - i), line, col});
        advance(j - i);
      } else if (std::string("+-*/^(),;=[]").find(c) != std::string::npos) {
        tokens_.push_back({Token::symbol, std::string(1, c), line, col});
        advance(1);
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    tokens_.push_back({Token::end, "", line, col});
  }

  const Token& peek(size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at_end() const { return peek().type == Token::end; }
  bool accept(const std::string& s) {
    if ((peek().type == Token::symbol || peek().type == Token::ident) && peek().text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  Token expect(const std::string& s) {
    if (!accept(s)) fail("expected '" + s + "'");
    return tokens_[pos_ - 1];
  }
  Token expect_ident() {
    if (peek().type != Token::ident) fail("expected identifier");
    return next();
  }
  [[noreturn]] void fail(const std::string& m) const {
    const Token& t = peek();
    throw SyntaxError(m + (t.type == Token::end ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

[[noreturn]] void semantic(const Token& t, const std::string& m) {
  throw SemanticError(m + " (line " + std::to_string(t.line) + ", column " + std::to_string(t.col) + ")");
}

class Parser {
 public:
  Parser(Lexer& lx, PDESystem& sys) : lx_(lx), sys_(sys) {}

  std::set<std::string> extra_params;

  Expr expression() {
    Expr e = term();
    while (true) {
      if (lx_.accept("+")) e = e + term();
      else if (lx_.accept("-")) e = e - term();
      else return e;
    }
  }

  Rational signed_rational() {
    bool neg = lx_.accept("-");
    if (lx_.peek().type != Token::number) lx_.fail("expected number");
    Rational r(lx_.next().text);
    if (lx_.accept("/")) {
      if (lx_.peek().type != Token::number) lx_.fail("expected denominator");
      r /= Rational(lx_.next().text);
    }
    return neg ? Rational(-r) : r;
  }

 private:
  Lexer& lx_;
  PDESystem& sys_;

  Expr term() {
    Expr e = unary();
    while (true) {
      if (lx_.accept("*")) {
        e = e * unary();
      } else if (lx_.peek().text == "/" && lx_.peek().type == Token::symbol) {
        Token op = lx_.next();
        Expr d = unary();
        if (simplify(d).is_zero()) semantic(op, "division by zero");
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (lx_.accept("-")) return -unary();
    if (lx_.accept("+")) return unary();
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (lx_.peek().type == Token::symbol && lx_.peek().text == "^") {
      Token op = lx_.next();
      Expr ex = unary();  // right associative via recursion into unary -> power
      auto f = to_exponent(simplify(ex));
      if (!f) semantic(op, "exponent is not affine in the order and parameters");
      return Expr::power(b, *f);
    }
    return b;
  }

  std::optional<int> space_index(const std::string& n) const {
    for (int i = 0; i < sys_.p(); ++i)
      if (sys_.names.space[size_t(i)] == n) return i;
    return std::nullopt;
  }

  std::optional<int> dep_index(const std::string& n) const {
    for (int s = 0; s < sys_.q(); ++s)
      if (sys_.names.deps[size_t(s)] == n) return s;
    return std::nullopt;
  }

  const FnDecl* fn_decl(const std::string& n) const {
    for (const auto& f : sys_.fns)
      if (f.name == n) return &f;
    return nullptr;
  }

  bool is_param(const std::string& n) const { return sys_.param(n) || extra_params.count(n); }

  Expr primary() {
    Token tok = lx_.peek();
    if (tok.type == Token::number) {
      lx_.next();
      return Expr(Rational(tok.text));
    }
    if (lx_.accept("(")) {
      Expr e = expression();
      lx_.expect(")");
      return e;
    }
    if (tok.type != Token::ident) lx_.fail("expected expression");
    lx_.next();
    const std::string& n = tok.text;
    const Token& nx = lx_.peek();
    bool call = nx.type == Token::symbol && nx.text == "(";
    bool op_follows = call || (nx.type == Token::symbol && nx.text == "^");
    if (n.size() > 1 && n[0] == 'D' && op_follows) {
      std::string v = n.substr(1);
      if (v == sys_.names.t) semantic(tok, "time derivative on the right-hand side");
      if (auto i = space_index(v)) return derivative(*i);
    }
    if (n == "Gamma" && call) {
      lx_.expect("(");
      Expr a = expression();
      lx_.expect(")");
      return Expr::gamma(a);
    }
    if (const FnDecl* f = fn_decl(n)) {
      lx_.expect("(");
      std::vector<Expr> args{expression()};
      while (lx_.accept(",")) args.push_back(expression());
      lx_.expect(")");
      if (args.size() != f->args.size()) semantic(tok, "wrong number of arguments for " + n);
      return Expr::fn(n, args, {}, FnRole::opaque);
    }
    if (n == sys_.names.alpha && !sys_.names.alpha.empty()) return sys_.alpha();
    if (n == sys_.names.t) return sys_.t();
    if (auto i = space_index(n)) return sys_.x(*i);
    if (auto s = dep_index(n)) return sys_.u(*s);
    if (is_param(n)) return Expr::param(n);
    semantic(tok, "undeclared symbol '" + n + "'");
  }

  Expr derivative(int i) {
    long k = 1;
    if (lx_.accept("^")) {
      if (lx_.peek().type != Token::number) lx_.fail("expected derivative order");
      k = std::stol(lx_.next().text);
    }
    lx_.expect("(");
    Expr e = expression();
    lx_.expect(")");
    for (long j = 0; j < k; ++j) e = total_derivative(e, sys_.x(i));
    return e;
  }
};

std::vector<std::string> ident_list(Lexer& lx) {
  std::vector<std::string> out{lx.expect_ident().text};
  while (lx.accept(",")) out.push_back(lx.expect_ident().text);
  lx.expect(";");
  return out;
}

void check_fresh(const PDESystem& sys, const Token& t, const std::set<std::string>& seen) {
  if (seen.count(t.text)) semantic(t, "duplicate declaration of '" + t.text + "'");
  if (t.text == "Gamma") semantic(t, "'Gamma' is reserved");
  (void)sys;
}

}  // namespace

PDESystem parse_system(const std::string& text, bool validate) {
  Lexer lx(text);
  PDESystem sys;
  sys.names.alpha = "";
  std::set<std::string> seen = {"t"};
  bool have_alpha = false;
  std::vector<std::optional<Equation>> eqs;
  while (!lx.at_end()) {
    Token kw = lx.peek();
    if (lx.accept("param")) {
      Token name = lx.expect_ident();
      check_fresh(sys, name, seen);
      seen.insert(name.text);
      ParamDecl p;
      p.name = name.text;
      if (lx.accept("nonzero")) {
        p.assumption = ParamDecl::Assumption::nonzero;
      } else if (lx.accept("positive")) {
        p.assumption = ParamDecl::Assumption::positive;
      } else if (lx.accept("in")) {
        Parser ps(lx, sys);
        lx.expect("(");
        p.lo = ps.signed_rational();
        lx.expect(",");
        p.hi = ps.signed_rational();
        lx.expect(")");
        if (!(p.lo < p.hi)) semantic(name, "empty interval for '" + p.name + "'");
        p.assumption = ParamDecl::Assumption::interval;
      }
      lx.expect(";");
      sys.params.push_back(p);
    } else if (lx.accept("alpha")) {
      if (have_alpha) semantic(kw, "order declared twice");
      Token name = lx.expect_ident();
      check_fresh(sys, name, seen);
      seen.insert(name.text);
      sys.names.alpha = name.text;
      if (lx.accept("=")) {
        Parser ps(lx, sys);
        Rational v = ps.signed_rational();
        if (!(v > 0 && v < 1)) semantic(name, "fractional order " + v.get_str() + " outside (0,1)");
        sys.alpha_value = v;
      }
      lx.expect(";");
      have_alpha = true;
    } else if (lx.accept("space")) {
      if (!sys.names.space.empty()) semantic(kw, "space variables declared twice");
      for (const auto& n : ident_list(lx)) {
        if (seen.count(n)) semantic(kw, "duplicate declaration of '" + n + "'");
        seen.insert(n);
        sys.names.space.push_back(n);
      }
    } else if (lx.accept("dep")) {
      if (!sys.names.deps.empty()) semantic(kw, "dependent variables declared twice");
      for (const auto& n : ident_list(lx)) {
        if (seen.count(n)) semantic(kw, "duplicate declaration of '" + n + "'");
        seen.insert(n);
        sys.names.deps.push_back(n);
      }
      eqs.assign(sys.names.deps.size(), std::nullopt);
    } else if (lx.accept("fn")) {
      Token name = lx.expect_ident();
      check_fresh(sys, name, seen);
      seen.insert(name.text);
      FnDecl f{name.text, {}};
      lx.expect("(");
      f.args.push_back(lx.expect_ident().text);
      while (lx.accept(",")) f.args.push_back(lx.expect_ident().text);
      lx.expect(")");
      lx.expect(";");
      sys.fns.push_back(f);
    } else if (lx.peek().type == Token::ident && lx.peek().text == "Dt") {
      lx.next();
      if (sys.names.deps.empty()) semantic(kw, "equation before 'dep' declaration");
      if (sys.names.space.empty()) semantic(kw, "equation before 'space' declaration");
      lx.expect("^");
      Token ord = lx.peek();
      if (ord.type == Token::ident) {
        lx.next();
        if (!have_alpha) semantic(ord, "undeclared order '" + ord.text + "'");
        if (ord.text != sys.names.alpha) semantic(ord, "order '" + ord.text + "' is not the declared order");
      } else {
        Parser ps(lx, sys);
        bool paren = lx.accept("(");
        Rational v = ps.signed_rational();
        if (paren) lx.expect(")");
        if (!(v > 0 && v < 1)) semantic(ord, "fractional order " + v.get_str() + " outside (0,1)");
        if (have_alpha && (!sys.alpha_value || *sys.alpha_value != v))
          semantic(ord, "order differs from the declared order");
        if (!have_alpha) {
          sys.alpha_value = v;
          sys.names.alpha = "alpha";
          have_alpha = true;
        }
      }
      lx.expect("(");
      Token dep = lx.expect_ident();
      lx.expect(")");
      lx.expect("=");
      int s = -1;
      for (int i = 0; i < sys.q(); ++i)
        if (sys.names.deps[size_t(i)] == dep.text) s = i;
      if (s < 0) semantic(dep, "'" + dep.text + "' is not a dependent variable");
      if (eqs[size_t(s)]) semantic(dep, "second equation for '" + dep.text + "'");
      Parser ps(lx, sys);
      Equation eq;
      eq.dep = s;
      eq.rhs = simplify(ps.expression());
      lx.expect(";");
      split_rhs(eq);
      eqs[size_t(s)] = eq;
    } else {
      lx.fail("expected declaration or equation");
    }
  }
  if (!have_alpha) throw SemanticError("no fractional order declared");
  for (size_t s = 0; s < eqs.size(); ++s) {
    if (!eqs[s]) throw SemanticError("missing equation for '" + sys.names.deps[s] + "'");
    sys.equations.push_back(*eqs[s]);
  }
  if (sys.equations.empty()) throw SemanticError("no equations");
  if (validate) {
    auto diags = validate_system(sys);
    if (!diags.empty()) {
      std::string m;
      for (const auto& d : diags) m += (m.empty() ? "" : ", ") + d.str();
      throw SemanticError("invalid system: " + m);
    }
  }
  return sys;
}

std::string emit_system(const PDESystem& sys) {
  std::ostringstream os;
  for (const auto& p : sys.params) {
    os << "param " << p.name;
    switch (p.assumption) {
      case ParamDecl::Assumption::nonzero: os << " nonzero"; break;
      case ParamDecl::Assumption::positive: os << " positive"; break;
      case ParamDecl::Assumption::interval: os << " in (" << p.lo.get_str() << ", " << p.hi.get_str() << ")"; break;
      default: break;
    }
    os << ";\n";
  }
  os << "alpha " << sys.names.alpha;
  if (sys.alpha_value) os << " = " << sys.alpha_value->get_str();
  os << ";\n";
  os << "space ";
  for (size_t i = 0; i < sys.names.space.size(); ++i) os << (i ? ", " : "") << sys.names.space[i];
  os << ";\ndep ";
  for (size_t i = 0; i < sys.names.deps.size(); ++i) os << (i ? ", " : "") << sys.names.deps[i];
  os << ";\n";
  for (const auto& f : sys.fns) {
    os << "fn " << f.name << "(";
    for (size_t i = 0; i < f.args.size(); ++i) os << (i ? ", " : "") << f.args[i];
    os << ");\n";
  }
  Names dsl_names = sys.names;
  for (const auto& eq : sys.equations) {
    os << "Dt^" << sys.names.alpha << "(" << sys.names.dep_name(eq.dep) << ") = "
       << to_string(simplify(eq.F + eq.H), dsl_names, Style::dsl) << ";\n";
  }
  return os.str();
}

Expr parse_expr(const std::string& text, const PDESystem& ctx, const std::vector<std::string>& extra_params) {
  Lexer lx(text);
  PDESystem sys = ctx;
  Parser ps(lx, sys);
  ps.extra_params.insert(extra_params.begin(), extra_params.end());
  Expr e = ps.expression();
  if (!lx.at_end()) lx.fail("trailing input");
  return simplify(e);
}

GeneratorSpec parse_generator(const std::string& text, const PDESystem& ctx) {
  Lexer lx(text);
  PDESystem sys = ctx;
  GeneratorSpec g;
  g.tau = Expr(0);
  g.xi.assign(size_t(sys.p()), Expr(0));
  g.eta.assign(size_t(sys.q()), Expr(0));
  Parser ps(lx, sys);
  auto index_of = [&](const std::vector<std::string>& names, const Token& t) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == t.text) return i;
    semantic(t, "unknown variable '" + t.text + "'");
  };
  while (!lx.at_end()) {
    if (lx.accept("param")) {
      Token n = lx.expect_ident();
      g.params.push_back(n.text);
      ps.extra_params.insert(n.text);
      while (lx.accept(",")) {
        n = lx.expect_ident();
        g.params.push_back(n.text);
        ps.extra_params.insert(n.text);
      }
      lx.expect(";");
    } else if (lx.accept("let")) {
      Token n = lx.expect_ident();
      lx.expect("=");
      Expr v = simplify(ps.expression());
      lx.expect(";");
      g.bindings.emplace_back(n.text, v);
    } else if (lx.accept("tau")) {
      lx.expect("=");
      g.tau = simplify(ps.expression());
      lx.expect(";");
    } else if (lx.accept("xi")) {
      lx.expect("[");
      size_t i = index_of(sys.names.space, lx.expect_ident());
      lx.expect("]");
      lx.expect("=");
      g.xi[i] = simplify(ps.expression());
      lx.expect(";");
    } else if (lx.accept("eta")) {
      lx.expect("[");
      size_t s = index_of(sys.names.deps, lx.expect_ident());
      lx.expect("]");
      lx.expect("=");
      g.eta[s] = simplify(ps.expression());
      lx.expect(";");
    } else {
      lx.fail("expected 'param', 'let', 'tau', 'xi[..]' or 'eta[..]'");
    }
  }
  return g;
}

}  // namespace fraclie
