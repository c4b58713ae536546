#pragma once

#include <fstream>
#include <random>
#include <sstream>

#include "fraclie/expr.hpp"

namespace fraclie::testing {

inline Expr t() { return Expr::indep(0, "t"); }
inline Expr x() { return Expr::indep(1, "x"); }
inline Expr y() { return Expr::indep(2, "y"); }
inline Expr a() { return Expr::param("alpha"); }
inline Expr prm(const std::string& n) { return Expr::param(n); }
inline Expr u(std::vector<int> theta = {0, 0}, int dep = 0) { return Expr::jet(dep, std::move(theta)); }
inline Expr ux() { return u({1, 0}); }
inline Expr uy() { return u({0, 1}); }
inline ExponentForm alpha_exp(long c = 0) { return ExponentForm::symbol("alpha") + ExponentForm(c); }
inline Names xy_names() {
  Names n;
  n.space = {"x", "y"};
  n.deps = {"u"};
  return n;
}

inline std::string slurp(const std::string& name) {
  std::ifstream in(std::string(FRACLIE_SYSTEMS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random expressions over a 2-space-variable jet, without fractional jets.
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  Expr atom() {
    switch (pick(9)) {
      case 0: return t();
      case 1: return x();
      case 2: return y();
      case 3: return u();
      case 4: return ux();
      case 5: return uy();
      case 6: return u({1, 1});
      case 7: return prm("a");
      default: return Expr::fn("g", {x(), y()});
    }
  }

  Expr number() {
    long p = long(pick(7)) - 3;
    long q = long(pick(3)) + 1;
    return Expr(rat(p, q));
  }

  Expr gen(int depth) {
    if (depth == 0) return pick(4) == 0 ? number() : atom();
    switch (pick(5)) {
      case 0: {
        std::vector<Expr> c;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) c.push_back(gen(depth - 1));
        return Expr::sum(c);
      }
      case 1: {
        std::vector<Expr> c;
        for (int i = 0, n = 2 + pick(2); i < n; ++i) c.push_back(gen(depth - 1));
        return Expr::product(c);
      }
      case 2: {
        static const std::vector<ExponentForm> exps = {ExponentForm(2), ExponentForm(3), ExponentForm(-1),
                                                       ExponentForm::symbol("n"), alpha_exp(-1)};
        Expr b = pick(2) ? atom() : gen(depth - 1);
        const ExponentForm& e = exps[size_t(pick(int(exps.size())))];
        if (!e.is_integer() || e.constant() < 0) b = atom();  // keep away from 0^(-1)
        return Expr::power(b, e);
      }
      default:
        return gen(depth - 1);
    }
  }

  int pick(int n) { return int(rng_() % unsigned(n)); }

 private:
  std::mt19937 rng_;
};

}  // namespace fraclie::testing
