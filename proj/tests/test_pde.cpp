#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fraclie/pde.hpp"
#include "support.hpp"

using namespace fraclie;
using namespace fraclie::testing;

namespace {

std::vector<std::string> strs(const std::vector<Expr>& v, const Names& n) {
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(to_string(e, n));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& d) {
  std::vector<std::string> out;
  for (const auto& x : d) out.push_back(x.str());
  return out;
}

}  // namespace

TEST(Dsl, ParsesZk) {
  PDESystem s = parse_system(slurp("zk.fpde"));
  EXPECT_EQ(s.p(), 2);
  EXPECT_EQ(s.q(), 1);
  EXPECT_EQ(s.order(), 3);
  EXPECT_FALSE(s.alpha_value);
  ASSERT_NE(s.param("n"), nullptr);
  EXPECT_EQ(s.param("n")->assumption, ParamDecl::Assumption::nonzero);
  Expr n = Expr::param("n");
  Expr F = -pow(s.u(0), ExponentForm::symbol("n")) * s.jet(0, {1, 0}) - s.jet(0, {3, 0}) - s.jet(0, {1, 2});
  EXPECT_EQ(s.equations[0].F, simplify(F));
  EXPECT_TRUE(s.equations[0].H.is_zero());
}

TEST(Dsl, SplitsSourceIntoH) {
  PDESystem s = parse_system("alpha a; space x; dep u; Dt^a(u) = Dx^2(u) + x*t + 3;");
  EXPECT_EQ(s.equations[0].F, s.jet(0, {2}));
  EXPECT_EQ(s.equations[0].H, simplify(s.x(0) * s.t() + Expr(3)));
}

TEST(Dsl, RoundTrip) {
  for (const char* f : {"zk.fpde", "hs.fpde", "telegraph.fpde", "telegraph_power.fpde"}) {
    PDESystem s = parse_system(slurp(f));
    std::string once = emit_system(s);
    PDESystem r = parse_system(once);
    EXPECT_EQ(emit_system(r), once) << f;
    ASSERT_EQ(r.equations.size(), s.equations.size());
    for (size_t i = 0; i < s.equations.size(); ++i) {
      EXPECT_EQ(r.equations[i].F, s.equations[i].F) << f;
      EXPECT_EQ(r.equations[i].H, s.equations[i].H) << f;
    }
  }
}

TEST(Dsl, NumericOrder) {
  PDESystem s = parse_system("alpha a = 1/2; space x; dep u; Dt^a(u) = Dx^2(u);");
  EXPECT_EQ(*s.alpha_value, rat(1, 2));
  EXPECT_EQ(s.alpha(), Expr(rat(1, 2)));
  EXPECT_THROW(parse_system("alpha a = 3/2; space x; dep u; Dt^a(u) = Dx^2(u);"), SemanticError);
}

TEST(Dsl, Errors) {
  EXPECT_THROW(parse_system("alpha a; space x; dep u; Dt^a(u) = 0.5*Dx(u);"), SyntaxError);
  EXPECT_THROW(parse_system("alpha a; space x; dep u; Dt^a(u) = Dt(u);"), SemanticError);
  EXPECT_THROW(parse_system("alpha a; space x; dep u; Dt^a(u) = w*Dx(u);"), SemanticError);
  EXPECT_THROW(parse_system("alpha a; space x; dep u; Dt^a(u) = u^x*Dx(u);"), SemanticError);
  EXPECT_THROW(parse_system("alpha a; space x; dep u, v; Dt^a(u) = Dx(v);"), SemanticError);
  EXPECT_THROW(parse_system("alpha a; space x; dep u; Dt^a(u) = Dx(u)"), SyntaxError);
  try {
    parse_system("alpha a;\nspace x;\ndep u;\nDt^a(u) = Dx(u) $;");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(Validate, MissingCoupling) {
  PDESystem s = parse_system("alpha a; space x, y; dep u; Dt^a(u) = Dx^2(u);", false);
  EXPECT_EQ(codes(validate_system(s)), std::vector<std::string>{"MissingSpaceCoupling(y)"});
  EXPECT_THROW(parse_system("alpha a; space x, y; dep u; Dt^a(u) = Dx^2(u);"), SemanticError);
}

TEST(Validate, TimeDerivativeOnRhs) {
  PDESystem s = parse_system("alpha a; space x; dep u; Dt^a(u) = Dx(u);");
  s.equations[0].rhs = s.equations[0].rhs + Expr::jet(0, {0}, 1);
  split_rhs(s.equations[0]);
  EXPECT_EQ(codes(validate_system(s)), std::vector<std::string>{"TimeDerivativeOnRHS(u_t)"});
}

TEST(Validate, ShippedSystemsAreClean) {
  for (const char* f : {"zk.fpde", "hs.fpde", "telegraph.fpde", "telegraph_power.fpde"})
    EXPECT_TRUE(validate_system(parse_system(slurp(f), false)).empty()) << f;
}

TEST(Classify, Zk) {
  PDESystem s = parse_system(slurp("zk.fpde"));
  TermClassification tc = classify_terms(s);
  EXPECT_EQ(strs(tc.I(0), s.names), (std::vector<std::string>{"u^n*u_x", "u_xxx", "u_xyy"}));
  EXPECT_EQ(strs(tc.J(0), s.names), (std::vector<std::string>{"u_xxx", "u_xyy"}));
  EXPECT_EQ(strs(tc.I_minus_J(0), s.names), (std::vector<std::string>{"u^n*u_x"}));
}

TEST(Classify, Hs) {
  PDESystem s = parse_system(slurp("hs.fpde"));
  TermClassification tc = classify_terms(s);
  EXPECT_EQ(strs(tc.I(0), s.names), (std::vector<std::string>{"u*u_x", "u_xxx", "v*v_x"}));
  EXPECT_EQ(strs(tc.J(0), s.names), (std::vector<std::string>{"u_xxx"}));
  EXPECT_EQ(strs(tc.I(1), s.names), (std::vector<std::string>{"u*v_x", "v_xxx"}));
  EXPECT_EQ(strs(tc.J(1), s.names), (std::vector<std::string>{"v_xxx"}));
}

TEST(Classify, OpaqueCoefficientIsNonlinear) {
  PDESystem s = parse_system(slurp("telegraph.fpde"));
  TermClassification tc = classify_terms(s);
  EXPECT_EQ(strs(tc.J(0), s.names), (std::vector<std::string>{"v_x"}));
  EXPECT_TRUE(tc.J(1).empty());
  EXPECT_EQ(tc.I(1).size(), 2u);
}

TEST(Generator, Parses) {
  PDESystem s = parse_system(slurp("telegraph_power.fpde"));
  GeneratorSpec g = parse_generator(slurp("telegraph_power.gen"), s);
  EXPECT_EQ(g.params, (std::vector<std::string>{"c2", "c3"}));
  EXPECT_EQ(g.tau, simplify(s.t() / s.alpha()));
  EXPECT_EQ(g.xi[0], simplify(Expr(2) * s.x(0) + prm("c3")));
  EXPECT_EQ(g.eta[0], s.u(0));
  EXPECT_THROW(parse_generator("eta[w] = 1;", s), SemanticError);
}
