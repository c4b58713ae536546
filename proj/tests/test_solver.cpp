#include <gtest/gtest.h>

#include "fraclie/ratfun.hpp"
#include "fraclie/solver.hpp"
#include "support.hpp"

using namespace fraclie;
using namespace fraclie::testing;

namespace {

struct Solved {
  PDESystem sys;
  SolutionBasis basis;
};

Solved run(const std::string& file, SolverConfig cfg = {}) {
  Solved s{parse_system(slurp(file)), {}};
  s.basis = solve(s.sys, build_determining_system(s.sys), cfg);
  return s;
}

Generator make(const Expr& tau, std::vector<Expr> xi, std::vector<Expr> eta) { return {tau, std::move(xi), std::move(eta)}; }

// dimension of the span of basis plus extra, over Q(params)
size_t span_dim(const PDESystem& sys, std::vector<Generator> gens) { return normalize_basis(sys, gens).size(); }

Generator zk_scaling(const PDESystem& sys) {
  Expr al = sys.alpha(), n = Expr::param("n");
  return make(sys.t(), {al * sys.x(0) / Expr(3), al * sys.x(1) / Expr(3)},
              {Expr(-2) * al * sys.u(0) / (Expr(3) * n)});
}

}  // namespace

TEST(Solve, ZkBasis) {
  Solved s = run("zk.fpde");
  const PDESystem& sys = s.sys;
  ASSERT_EQ(s.basis.dimension(), 3u);
  std::vector<Generator> expected = {make(Expr(0), {Expr(1), Expr(0)}, {Expr(0)}),
                                     make(Expr(0), {Expr(0), Expr(1)}, {Expr(0)}), zk_scaling(sys)};
  std::vector<Generator> both = s.basis.generators;
  both.insert(both.end(), expected.begin(), expected.end());
  EXPECT_EQ(span_dim(sys, both), 3u);
  for (const auto& c : s.basis.certificates) EXPECT_TRUE(c.ok);
}

TEST(Solve, HsBasis) {
  Solved s = run("hs.fpde");
  const PDESystem& sys = s.sys;
  ASSERT_EQ(s.basis.dimension(), 2u);
  Expr al = sys.alpha();
  std::vector<Generator> both = s.basis.generators;
  both.push_back(make(Expr(0), {Expr(1)}, {Expr(0), Expr(0)}));
  both.push_back(make(sys.t(), {al * sys.x(0) / Expr(3)},
                      {Expr(-2) * al * sys.u(0) / Expr(3), Expr(-2) * al * sys.u(1) / Expr(3)}));
  EXPECT_EQ(span_dim(sys, both), 2u);
}

TEST(Solve, TelegraphKeepsTimeDependentShift) {
  Solved s = run("telegraph.fpde");
  const PDESystem& sys = s.sys;
  ASSERT_EQ(s.basis.dimension(), 2u);
  std::vector<Generator> both = s.basis.generators;
  both.push_back(make(Expr(0), {Expr(1)}, {Expr(0), Expr(0)}));
  both.push_back(make(Expr(0), {Expr(0)}, {Expr(0), pow(sys.t(), to_exponent(sys.alpha()).value() - ExponentForm(1))}));
  EXPECT_EQ(span_dim(sys, both), 2u);
}

TEST(Solve, DegreeStable) {
  for (int d : {2, 3, 4}) {
    SolverConfig cfg;
    cfg.poly_degree = d;
    EXPECT_EQ(run("zk.fpde", cfg).basis.dimension(), 3u) << d;
  }
}

TEST(Solve, NonzeroBranchDoesNotContribute) {
  SolverConfig cfg;
  cfg.branches = SolverConfig::Branches::nonzero;
  for (const char* f : {"zk.fpde", "hs.fpde", "telegraph.fpde"}) {
    Solved s = run(f, cfg);
    ASSERT_EQ(s.basis.branches.size(), 1u);
    EXPECT_FALSE(s.basis.branches[0].contributes) << f;
    EXPECT_EQ(s.basis.dimension(), 0u) << f;
  }
}

TEST(Solve, RecordsGenericityAndNotes) {
  Solved s = run("zk.fpde");
  const auto& as = s.basis.assumptions;
  EXPECT_NE(std::find(as.begin(), as.end(), "n != 0"), as.end());
  EXPECT_EQ(s.basis.templates.size(), default_h_templates(s.sys).size());
}

TEST(Normalize, Examples) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  Generator dx2 = make(Expr(0), {Expr(2), Expr(0)}, {Expr(0)});
  Generator dxy = make(Expr(0), {Expr(1), Expr(1)}, {Expr(0)});
  std::vector<Generator> n = normalize_basis(sys, {dx2, dxy});
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0].str(sys.names), "Dx");
  EXPECT_EQ(n[1].str(sys.names), "Dy");
  EXPECT_TRUE(normalize_basis(sys, {}).empty());
  EXPECT_TRUE(normalize_basis(sys, {dx2, dx2}).size() == 1u);
}

TEST(Normalize, Idempotent) {
  Solved s = run("zk.fpde");
  std::vector<Generator> again = normalize_basis(s.sys, s.basis.generators);
  ASSERT_EQ(again.size(), s.basis.generators.size());
  for (size_t i = 0; i < again.size(); ++i)
    EXPECT_EQ(again[i].str(s.sys.names), s.basis.generators[i].str(s.sys.names));
}

TEST(Verify, AcceptsKnownGenerators) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  EXPECT_TRUE(verify_generator(sys, zk_scaling(sys)).ok);
  EXPECT_TRUE(verify_generator(sys, make(Expr(0), {Expr(0), Expr(1)}, {Expr(0)})).ok);
}

TEST(Verify, RejectsPerturbedGenerator) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  Generator g = zk_scaling(sys);
  g.eta[0] = simplify(g.eta[0] + sys.u(0) / Expr(7));
  VerifyReport r = verify_generator(sys, g);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.residuals.empty());

  Generator h = zk_scaling(sys);
  h.xi[1] = simplify(h.xi[1] + sys.x(0));
  EXPECT_FALSE(verify_generator(sys, h).ok);
}

TEST(Verify, ShapeViolations) {
  PDESystem sys = parse_system(slurp("zk.fpde"));
  EXPECT_THROW(verify_generator(sys, make(pow(sys.t(), 3), {Expr(0), Expr(0)}, {Expr(0)})), ShapeViolation);
  EXPECT_THROW(verify_generator(sys, make(Expr(0), {sys.t(), Expr(0)}, {Expr(0)})), ShapeViolation);
  EXPECT_THROW(verify_generator(sys, make(Expr(0), {Expr(0), Expr(0)}, {sys.u(0) * sys.u(0)})), ShapeViolation);
  EXPECT_THROW(verify_generator(sys, make(Expr(0), {Expr(0), Expr(0)}, {sys.jet(0, {1, 0})})), ShapeViolation);
  EXPECT_THROW(verify_generator(sys, make(Expr(0), {Expr(0)}, {Expr(0)})), ShapeViolation);
}

TEST(Verify, FractionalShiftIsSymmetryOfTelegraph) {
  PDESystem sys = parse_system(slurp("telegraph.fpde"));
  Expr shift = pow(sys.t(), to_exponent(sys.alpha()).value() - ExponentForm(1));
  EXPECT_TRUE(verify_generator(sys, make(Expr(0), {Expr(0)}, {Expr(0), shift})).ok);
  // a shift of u breaks the source term
  EXPECT_FALSE(verify_generator(sys, make(Expr(0), {Expr(0)}, {shift, Expr(0)})).ok);
}
