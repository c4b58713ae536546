#include <gtest/gtest.h>

#include "fraclie/determining.hpp"
#include "fraclie/ratfun.hpp"
#include "support.hpp"

using namespace fraclie;
using namespace fraclie::testing;

namespace {

Expr unk(const std::string& name, const std::vector<Expr>& args, std::vector<int> deriv = {}) {
  return Expr::fn(name, args, std::move(deriv), FnRole::unknown);
}

std::vector<Expr> exprs(const std::vector<DetEquation>& eqs) {
  std::vector<Expr> out;
  for (const auto& e : eqs) out.push_back(e.expr);
  return out;
}

}  // namespace

TEST(HCondition, Zk) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  AnsatzGenerator ans = AnsatzGenerator::make(sys, Branch::symbolic);
  std::vector<Expr> xy = {sys.t(), sys.x(0), sys.x(1)};
  Expr want = Expr::fn("h_u", xy, {}, FnRole::unknown, 0) + unk("h_u", xy, {0, 3, 0}) + unk("h_u", xy, {0, 1, 2});
  std::vector<Expr> got = h_condition(sys, ans);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_TRUE(simplify(got[0] - want).is_zero()) << to_string(got[0], sys.names);
}

TEST(HCondition, TelegraphFirstEquation) {
  PDESystem sys = parse_system(slurp("telegraph.fpde"));
  AnsatzGenerator ans = AnsatzGenerator::make(sys, Branch::symbolic);
  std::vector<Expr> tx = {sys.t(), sys.x(0)};
  Expr want = Expr::fn("h_u", tx, {}, FnRole::unknown, 0) - unk("h_v", tx, {0, 1});
  std::vector<Expr> got = h_condition(sys, ans);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_TRUE(simplify(got[0] - want).is_zero()) << to_string(got[0], sys.names);
  EXPECT_TRUE(simplify(got[1] - Expr::fn("h_v", tx, {}, FnRole::unknown, 0)).is_zero());
}

TEST(Separation, ReconstructsCondition) {
  for (const char* f : {"zk.fpde", "hs.fpde", "telegraph.fpde"}) {
    PDESystem sys = parse_system(slurp(f));
    DeterminingSystem ds = build_determining_system(sys);
    std::vector<Expr> cond = invariance_condition(sys, ds.ans);
    for (int s = 0; s < sys.q(); ++s) {
      Expr sum;
      for (const auto& e : ds.integer_eqs)
        if (e.eq == s) sum += e.expr * e.monomial;
      EXPECT_TRUE(simplify(sum - cond[size_t(s)]).is_zero()) << f << " eq " << s;
    }
  }
}

TEST(Separation, EquationsAreLinearInUnknowns) {
  for (const char* f : {"zk.fpde", "hs.fpde", "telegraph.fpde"}) {
    PDESystem sys = parse_system(slurp(f));
    DeterminingSystem ds = build_determining_system(sys);
    for (const auto& e : ds.integer_eqs) {
      Bindings once, twice;
      int k = 0;
      for (const auto& atom : fn_apps_of(e.expr, FnRole::unknown)) {
        Expr p = Expr::param("k" + std::to_string(k++));
        once[atom] = p;
        twice[atom] = Expr(2) * p;
      }
      EXPECT_TRUE(simplify(substitute(e.expr, twice) - Expr(2) * substitute(e.expr, once)).is_zero())
          << f << ": " << to_string(e.expr, sys.names);
      EXPECT_FALSE(contains_jet(e.expr));
    }
  }
}

TEST(Separation, RecordsGenericity) {
  PDESystem zk = parse_system(slurp("zk.fpde"));
  DeterminingSystem ds = build_determining_system(zk);
  EXPECT_NE(std::find(ds.assumptions.begin(), ds.assumptions.end(), "n != 1"), ds.assumptions.end());
  EXPECT_NE(std::find(ds.assumptions.begin(), ds.assumptions.end(), "n != 0"), ds.assumptions.end());
  PDESystem tel = parse_system(slurp("telegraph.fpde"));
  EXPECT_FALSE(build_determining_system(tel).assumptions.empty());
}

TEST(Golden, ZkMatchesHandSeparation) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  DeterminingSystem ds = build_determining_system(sys);
  std::vector<Expr> xy = {sys.x(0), sys.x(1)};
  std::vector<Expr> txy = {sys.t(), sys.x(0), sys.x(1)};
  Expr al = sys.alpha(), n = Expr::param("n"), gam = Expr::param("gamma_u");
  Expr T = Expr(2) * unknown_constant("chi2") * sys.t() + unknown_constant("chi1");
  Expr xi_x = unk("xi_x", xy, {1, 0});
  // xi_y = psi_x = g_x = g_y = h_x = 0, the t-linear relations, and the
  // u-coefficient and u-free parts of the last line separately
  std::vector<Expr> hand = {
      unk("xi_x", xy, {0, 1}),
      unk("xi_y", xy, {1, 0}),
      unk("g_u", xy, {1, 0}),
      unk("g_u", xy, {0, 1}),
      unk("h_u", txy, {0, 1, 0}),
      al * T - Expr(3) * xi_x,
      Expr(2) * unk("xi_y", xy, {0, 1}) + xi_x - al * T,
      n * unk("g_u", xy) - xi_x + (al + gam * n) * T,
      n * unk("h_u", txy),
  };
  std::vector<Expr> ours = autoreduce(exprs(ds.integer_eqs));
  std::vector<Expr> theirs = autoreduce(hand);
  EXPECT_TRUE(same_up_to_scaling(ours, theirs));
  EXPECT_EQ(ours.size(), 8u);
}

TEST(Golden, HsMatchesHandSeparation) {
  PDESystem sys = parse_system(slurp("hs.fpde"));
  DeterminingSystem ds = build_determining_system(sys);
  std::vector<Expr> xs = {sys.x(0)};
  std::vector<Expr> tx = {sys.t(), sys.x(0)};
  Expr al = sys.alpha(), g1 = Expr::param("gamma_u"), g2 = Expr::param("gamma_v");
  Expr T = Expr(2) * unknown_constant("chi2") * sys.t() + unknown_constant("chi1");
  Expr xi1 = unk("xi_x", xs, {1});
  std::vector<Expr> hand = {
      unk("f_u_v", xs),
      unk("f_v_u", xs),
      unk("h_u", tx),
      unk("h_v", tx),
      unk("g_u", xs, {1}),
      unk("g_v", xs, {1}),
      al * T - Expr(3) * xi1,
      (al + g1) * T + unk("g_u", xs) - xi1,
      (g1 - Expr(2) * g2 - al) * T + unk("g_u", xs) - Expr(2) * unk("g_v", xs) + xi1,
  };
  std::vector<Expr> ours = autoreduce(exprs(ds.integer_eqs));
  EXPECT_TRUE(same_up_to_scaling(ours, autoreduce(hand)));
  EXPECT_EQ(ours.size(), 9u);
}

TEST(Autoreduce, PropagatesZeros) {
  std::vector<Expr> xs = {x()};
  Expr f = unk("f", xs), g = unk("g", xs);
  std::vector<Expr> r = autoreduce({Expr(3) * f, unk("f", xs, {2}) + g, unk("g", xs, {1}) - g});
  EXPECT_TRUE(same_up_to_scaling(r, {f, g}));
}

TEST(Autoreduce, ScalingComparison) {
  std::vector<Expr> xs = {x()};
  Expr f = unk("f", xs), g = unk("g", xs);
  EXPECT_TRUE(same_up_to_scaling({f + g, g}, {Expr(-2) * g, Expr(3) * (f + g)}));
  EXPECT_FALSE(same_up_to_scaling({f + g, g}, {f, g}));
  EXPECT_FALSE(same_up_to_scaling({f}, {f, g}));
}
