#include "fraclie/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace fraclie {

double lanczos_gamma(double x) {
  static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1 - x));
  x -= 1;
  double a = p[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += p[i] / (x + i);
  return std::sqrt(2 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

GaussJacobi GaussJacobi::make(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  double ab = a + b;
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + ab;
    J(k, k) = k == 0 ? (b - a) / (ab + 2) : (b * b - a * a) / (s * (s + 2));
    if (k + 1 < n) {
      double m = k + 1.0;
      double s1 = 2 * m + ab;
      double beta = 4 * m * (m + a) * (m + b) * (m + ab) / (s1 * s1 * (s1 + 1) * (s1 - 1));
      J(k, k + 1) = J(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  double mu0 = std::pow(2.0, ab + 1) * lanczos_gamma(a + 1) * lanczos_gamma(b + 1) / lanczos_gamma(ab + 2);
  GaussJacobi r;
  for (int k = 0; k < n; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    double v = es.eigenvectors()(0, k);
    r.weights.push_back(mu0 * v * v);
  }
  return r;
}

namespace {

// integral_0^1 (1-sigma)^(-alpha) sigma^gamma dsigma
double beta_integral(const Rational& gamma, double alpha, const GaussJacobi& rule) {
  long m = gamma.get_den().get_si();
  long p = Rational(gamma * m).get_num().get_si() + m - 1;  // exponent of w after the substitution
  double scale = std::pow(2.0, alpha - 1);
  double sum = 0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double w = (1 + rule.nodes[i]) / 2;
    double geo = 0, wp = 1;
    for (long j = 0; j < m; ++j, wp *= w) geo += wp;
    sum += rule.weights[i] * std::pow(geo, -alpha) * double(m) * std::pow(w, double(p));
  }
  return scale * sum;
}

}  // namespace

std::vector<OracleValue> numeric_rl_oracle(const std::vector<NumericTerm>& f, const Rational& alpha,
                                           const std::vector<double>& t_grid, int nodes) {
  double a = alpha.get_d();
  if (!(alpha > 0 && alpha < 1)) throw ExponentOutOfDomain("oracle order must lie in (0,1)");
  for (const auto& term : f)
    if (term.gamma <= -1) throw SingularInput("t-exponent " + term.gamma.get_str() + " is not integrable");
  GaussJacobi fine = GaussJacobi::make(nodes, -a, 0), coarse = GaussJacobi::make(nodes / 2, -a, 0);
  double g1a = lanczos_gamma(1 - a);
  std::vector<OracleValue> out;
  for (double t : t_grid) {
    OracleValue v;
    double coarse_sum = 0;
    for (const auto& term : f) {
      Rational factor_q = Rational(1) - alpha + term.gamma;
      if (factor_q == 0) continue;
      double factor = factor_q.get_d() * std::pow(t, Rational(term.gamma - alpha).get_d()) / g1a * term.coeff;
      v.value += factor * beta_integral(term.gamma, a, fine);
      coarse_sum += factor * beta_integral(term.gamma, a, coarse);
    }
    v.error = std::abs(v.value - coarse_sum);
    out.push_back(v);
  }
  return out;
}

namespace {

double grunwald(const std::function<double(double)>& f, double a, double t, long n) {
  double h = t / double(n);
  double w = 1, sum = 0;
  for (long j = 0; j <= n; ++j) {
    if (j > 0) w *= 1 - (a + 1) / double(j);
    double fv = f(t - double(j) * h);
    if (std::isfinite(fv)) sum += w * fv;
  }
  return sum * std::pow(h, -a);
}

}  // namespace

std::vector<OracleValue> numeric_rl_oracle(const std::function<double(double)>& f, const Rational& alpha,
                                           const std::vector<double>& t_grid, double step_fraction) {
  if (!(alpha > 0 && alpha < 1)) throw ExponentOutOfDomain("oracle order must lie in (0,1)");
  double a = alpha.get_d();
  long n = std::lround(1.0 / step_fraction);
  std::vector<OracleValue> out;
  for (double t : t_grid) {
    double d1 = grunwald(f, a, t, n), d2 = grunwald(f, a, t, 2 * n);
    out.push_back(OracleValue{2 * d2 - d1, std::abs(d2 - d1)});
  }
  return out;
}

double evaluate(const Expr& e, const std::map<std::string, double>& values, const Names& names) {
  auto lookup = [&](const std::string& n) {
    auto it = values.find(n);
    if (it == values.end()) throw Error("no numeric value for " + n);
    return it->second;
  };
  switch (e.kind()) {
    case Kind::Number:
      return e.number_value().get_d();
    case Kind::Param:
    case Kind::Indep:
      return lookup(e.name());
    case Kind::Jet:
    case Kind::Fn:
      return lookup(to_string(e, names));
    case Kind::Gamma:
      return lanczos_gamma(evaluate(e.base(), values, names));
    case Kind::Power: {
      double x = e.exponent().constant().get_d();
      for (const auto& [k, c] : e.exponent().terms()) x += c.get_d() * lookup(k);
      return std::pow(evaluate(e.base(), values, names), x);
    }
    case Kind::Product: {
      double r = 1;
      for (const auto& c : e.children()) r *= evaluate(c, values, names);
      return r;
    }
    case Kind::Sum: {
      double r = 0;
      for (const auto& c : e.children()) r += evaluate(c, values, names);
      return r;
    }
  }
  return 0;
}

Rational evaluate_exponent(const ExponentForm& f, const std::map<std::string, Rational>& values) {
  Rational r = f.constant();
  for (const auto& [k, c] : f.terms()) {
    auto it = values.find(k);
    if (it == values.end()) throw Error("no rational value for " + k);
    r += c * it->second;
  }
  return r;
}

std::vector<NumericTerm> numeric_terms(const PowerSum& p, const std::map<std::string, Rational>& values,
                                       const Names& names) {
  std::map<std::string, double> dv;
  for (const auto& [k, v] : values) dv[k] = v.get_d();
  std::vector<NumericTerm> out;
  for (const auto& term : p.terms())
    out.push_back(NumericTerm{evaluate(term.coeff, dv, names), evaluate_exponent(term.exp, values)});
  return out;
}

}  // namespace fraclie
