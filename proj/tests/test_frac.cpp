#include <gtest/gtest.h>

#include <cmath>

#include "fraclie/frac_calc.hpp"
#include "fraclie/oracle.hpp"
#include "fraclie/ratfun.hpp"
#include "support.hpp"

using namespace fraclie;
using namespace fraclie::testing;

namespace {

const AssumptionRegistry reg("alpha");

PowerSum tpow(const ExponentForm& e, const Expr& c = Expr(1)) { return PowerSum::monomial(c, e); }

// closed form of the power rule, evaluated with the C library gamma
double closed_form(double g, double al, double tt) {
  return std::tgamma(g + 1) / std::tgamma(g + 1 - al) * std::pow(tt, g - al);
}

}  // namespace

TEST(Binomial, Recurrence) {
  EXPECT_TRUE(gen_binomial(a(), 0).is_one());
  EXPECT_EQ(gen_binomial(a(), 1), a());
  EXPECT_EQ(gen_binomial(Expr(rat(1, 2)), 2), Expr(rat(-1, 8)));
  EXPECT_THROW(gen_binomial(a(), -1), NegativeIndex);
}

TEST(Binomial, IntegerOrderIsClassical) {
  for (long m = 0; m <= 6; ++m) {
    long classical = 1;
    for (long k = 0; k <= 8; ++k) {
      Expr c = gen_binomial(Expr(m), k);
      EXPECT_EQ(c, Expr(k <= m ? classical : 0)) << m << " " << k;
      classical = classical * (m - k) / (k + 1);
    }
  }
}

TEST(Binomial, AgreesWithGammaForm) {
  for (double al : {0.25, 0.5, 0.75}) {
    for (long k = 1; k <= 6; ++k) {
      double poly = evaluate(gen_binomial(a(), k), {{"alpha", al}});
      double gform = std::pow(-1.0, double(k - 1)) * al * std::tgamma(double(k) - al) /
                     (std::tgamma(1 - al) * std::tgamma(double(k) + 1));
      EXPECT_NEAR(poly, gform, 1e-12);
    }
  }
}

TEST(PowerRule, SquareAtHalf) {
  PowerSum r = rl_derivative(tpow(2), Expr(rat(1, 2)), reg);
  ASSERT_EQ(r.terms().size(), 1u);
  EXPECT_EQ(r.terms()[0].exp, ExponentForm(rat(3, 2)));
  EXPECT_TRUE(is_zero_exact(r.terms()[0].coeff - Expr::gamma(Expr(3)) / Expr::gamma(Expr(rat(5, 2)))));
}

TEST(PowerRule, KernelPowerVanishes) {
  EXPECT_TRUE(rl_derivative(tpow(alpha_exp(-1)), a(), reg).empty());
}

TEST(PowerRule, TimeIndependentFactor) {
  Expr f = Expr::fn("f", {x()});
  PowerSum r = rl_derivative(tpow(0, f), a(), reg);
  ASSERT_EQ(r.terms().size(), 1u);
  EXPECT_EQ(r.terms()[0].exp, -alpha_exp());
  EXPECT_EQ(r.terms()[0].coeff, simplify(f / Expr::gamma(Expr(1) - a())));
}

TEST(PowerRule, UndecidableAndOutOfDomain) {
  EXPECT_THROW(rl_derivative(tpow(-alpha_exp()), a(), reg), UndecidableExponent);
  EXPECT_THROW(rl_derivative(tpow(ExponentForm(-1)), a(), reg), ExponentOutOfDomain);
  EXPECT_THROW(rl_derivative(tpow(ExponentForm::symbol("m")), a(), reg), UndecidableExponent);
  AssumptionRegistry r2 = reg;
  r2.declare("m", Interval{Rational(0), std::nullopt});
  EXPECT_NO_THROW(rl_derivative(tpow(ExponentForm::symbol("m")), a(), r2));
}

TEST(PowerRule, Linearity) {
  Expr c1 = prm("c1"), c2 = prm("c2");
  PowerSum f = PowerSum::from_expr(c1 * pow(t(), 2) + c2 * pow(t(), alpha_exp()), t());
  PowerSum lhs = rl_derivative(f, a(), reg);
  PowerSum a1 = rl_derivative(tpow(2), a(), reg), a2 = rl_derivative(tpow(alpha_exp()), a(), reg);
  Expr rhs = c1 * a1.to_expr(t()) + c2 * a2.to_expr(t());
  EXPECT_EQ(lhs.to_expr(t()), simplify(rhs));
}

TEST(PowerRule, AgreesWithOracleOnGrid) {
  const std::vector<Rational> gammas = {rat(1, 2), 1, 2, rat(5, 2), 3};
  const std::vector<Rational> alphas = {rat(1, 4), rat(1, 2), rat(3, 4)};
  const std::vector<double> ts = {0.5, 1, 2};
  for (const auto& g : gammas) {
    for (const auto& al : alphas) {
      PowerSum r = rl_derivative(tpow(ExponentForm(g)), Expr(al), reg);
      auto numeric = numeric_rl_oracle({{1.0, g}}, al, ts);
      for (size_t i = 0; i < ts.size(); ++i) {
        double sym = evaluate(r.to_expr(t()), {{"t", ts[i]}});
        double ref = closed_form(g.get_d(), al.get_d(), ts[i]);
        EXPECT_NEAR(sym, ref, 1e-10 * std::max(1.0, std::abs(ref)));
        EXPECT_NEAR(numeric[i].value, sym, 1e-8) << g << " " << al << " " << ts[i];
      }
    }
  }
}

TEST(Leibniz, TerminatesExactly) {
  std::vector<ExponentForm> bs = {0, 1, 2, 3, alpha_exp(1)};
  for (long aa = 0; aa <= 4; ++aa) {
    for (const auto& b : bs) {
      Expr lhs = leibniz_expand(tpow(aa), tpow(b), a(), aa, reg, t());
      Expr rhs = rl_derivative(tpow(b + ExponentForm(aa)), a(), reg).to_expr(t());
      EXPECT_TRUE(is_zero_exact(lhs - rhs)) << aa << " " << b.str();
      for (double al : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        std::map<std::string, double> v = {{"alpha", al}, {"t", 1.3}};
        double l = evaluate(lhs, v), r = evaluate(rhs, v);
        EXPECT_NEAR(l, r, 1e-10 * std::max(1.0, std::abs(r)));
      }
    }
  }
}

TEST(Leibniz, UnitFactor) {
  Expr lhs = leibniz_expand(tpow(0), tpow(rat(3, 2)), a(), 5, reg, t());
  EXPECT_EQ(lhs, rl_derivative(tpow(rat(3, 2)), a(), reg).to_expr(t()));
}

TEST(Leibniz, LinearTimesOne) {
  Expr lhs = leibniz_expand(tpow(1), tpow(0), a(), 1, reg, t());
  Expr rhs = Expr::gamma(Expr(2)) / Expr::gamma(Expr(2) - a()) * pow(t(), ExponentForm(1) - alpha_exp());
  EXPECT_TRUE(is_zero_exact(lhs - rhs));
  // alpha/Gamma(2-alpha) + 1/Gamma(1-alpha) = 1/Gamma(2-alpha) at alpha = 1/2
  auto num = numeric_rl_oracle({{1.0, Rational(1)}}, rat(1, 2), {1.0});
  double l = evaluate(lhs, {{"alpha", 0.5}, {"t", 1.0}});
  EXPECT_NEAR(l, num[0].value, 1e-10);
}

TEST(Series, ConstantInput) {
  Expr s = rl_series_truncated(Expr(1), a(), 0, t());
  EXPECT_EQ(s, simplify(pow(t(), -alpha_exp()) / Expr::gamma(Expr(1) - a())));
}

TEST(Series, LinearInput) {
  Expr s = rl_series_truncated(t(), a(), 3, t());
  Expr ref = pow(t(), ExponentForm(1) - alpha_exp()) / Expr::gamma(Expr(2) - a());
  EXPECT_TRUE(is_zero_exact(s - ref));
  auto num = numeric_rl_oracle({{1.0, Rational(1)}}, rat(1, 2), {1.0});
  EXPECT_NEAR(evaluate(s, {{"alpha", 0.5}, {"t", 1.0}}), num[0].value, 1e-10);
}

TEST(Series, JetInput) {
  Expr s = rl_series_truncated(u(), a(), 1, t());
  Expr ut = Expr::jet(0, {0, 0}, 1);
  Expr ref = pow(t(), -alpha_exp()) / Expr::gamma(Expr(1) - a()) * u() +
             a() * pow(t(), ExponentForm(1) - alpha_exp()) / Expr::gamma(Expr(2) - a()) * ut;
  EXPECT_EQ(s, gamma_simplify(ref));
  EXPECT_THROW(rl_series_truncated(Expr::jet(0, {0, 0}, 0, 1), a(), 1, t()), FractionalChain);
}

TEST(Oracle, Lanczos) {
  for (double z : {0.1, 0.5, 1.0, 1.5, 2.5, 5.5, 10.0, 20.3})
    EXPECT_NEAR(lanczos_gamma(z) / std::tgamma(z), 1.0, 1e-13);
}

TEST(Oracle, SquareAtHalf) {
  auto v = numeric_rl_oracle({{1.0, Rational(2)}}, rat(1, 2), {1.0});
  EXPECT_NEAR(v[0].value, 1.504505556127350, 1e-8);
  EXPECT_LT(v[0].error, 1e-8);
}

TEST(Oracle, KernelPowerIsZero) {
  auto v = numeric_rl_oracle({{1.0, rat(-1, 2)}}, rat(1, 2), {0.5, 1.0, 2.0});
  for (const auto& x : v) EXPECT_NEAR(x.value, 0.0, 1e-6);
}

TEST(Oracle, ConstantInput) {
  auto v = numeric_rl_oracle({{1.0, Rational(0)}}, rat(1, 2), {1.0});
  EXPECT_NEAR(v[0].value, 0.5641895835477563, 1e-10);
}

TEST(Oracle, SingularInput) {
  EXPECT_THROW(numeric_rl_oracle({{1.0, Rational(-1)}}, rat(1, 2), {1.0}), SingularInput);
}

TEST(Oracle, GrunwaldAgreesOnGrid) {
  const std::vector<double> gammas = {0, 0.5, 1, 2, 2.5};
  const std::vector<Rational> alphas = {rat(1, 4), rat(1, 2), rat(3, 4)};
  const std::vector<double> ts = {0.5, 1, 2};
  for (double g : gammas) {
    for (const auto& al : alphas) {
      auto v = numeric_rl_oracle([g](double s) { return std::pow(s, g); }, al, ts);
      for (size_t i = 0; i < ts.size(); ++i)
        EXPECT_NEAR(v[i].value, closed_form(g, al.get_d(), ts[i]), 1e-4) << g << " " << al;
    }
  }
}

TEST(Oracle, GaussJacobiGridIncludingConstant) {
  const std::vector<Rational> gammas = {0, rat(1, 2), 1, 2, rat(5, 2)};
  const std::vector<Rational> alphas = {rat(1, 4), rat(1, 2), rat(3, 4)};
  const std::vector<double> ts = {0.5, 1, 2};
  for (const auto& g : gammas)
    for (const auto& al : alphas) {
      auto v = numeric_rl_oracle({{1.0, g}}, al, ts);
      for (size_t i = 0; i < ts.size(); ++i)
        EXPECT_NEAR(v[i].value, closed_form(g.get_d(), al.get_d(), ts[i]), 1e-8);
    }
}
