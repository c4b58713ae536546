#include "fraclie/prolongation.hpp"

#include <functional>

namespace fraclie {

namespace {

Expr d_t_times(Expr e, const Expr& t, long k) {
  for (long j = 0; j < k && !e.is_zero(); ++j) e = partial_derivative(e, t);
  return e;
}

Rational factorial(long n) {
  Rational r = 1;
  for (long j = 2; j <= n; ++j) r *= j;
  return r;
}

Expr unknown_fn(const std::string& name, std::vector<Expr> args) {
  return Expr::fn(name, std::move(args), {}, FnRole::unknown);
}

}  // namespace

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::zero: return "chi2=0";
    case Branch::nonzero: return "chi2!=0";
    default: return "symbolic";
  }
}

Expr unknown_constant(const std::string& name) { return unknown_fn(name, {}); }

bool is_unknown_atom(const Expr& e) { return e.is(Kind::Fn) && e.role() == FnRole::unknown; }

AnsatzGenerator AnsatzGenerator::make(const PDESystem& sys, Branch b) {
  AnsatzGenerator a;
  a.branch = b;
  a.alpha = sys.alpha();
  a.chi1 = unknown_constant("chi1");
  a.chi2 = b == Branch::zero ? Expr(0) : unknown_constant("chi2");
  std::vector<Expr> xs = sys.space_vars();
  std::vector<Expr> txs = {sys.t()};
  txs.insert(txs.end(), xs.begin(), xs.end());
  for (int i = 0; i < sys.p(); ++i) a.xi.push_back(unknown_fn("xi_" + sys.names.space_name(i), xs));
  for (int s = 0; s < sys.q(); ++s) {
    const std::string dn = sys.names.dep_name(s);
    switch (b) {
      case Branch::symbolic: a.gamma.push_back(Expr::param("gamma_" + dn)); break;
      case Branch::zero: a.gamma.push_back(Expr(0)); break;
      case Branch::nonzero: a.gamma.push_back(simplify((a.alpha - Expr(1)) / Expr(2))); break;
    }
    a.g.push_back(unknown_fn("g_" + dn, xs));
    std::vector<Expr> row;
    for (int i = 0; i < sys.q(); ++i)
      row.push_back(i == s ? Expr(0) : unknown_fn("f_" + dn + "_" + sys.names.dep_name(i), xs));
    a.f.push_back(row);
    a.h.push_back(unknown_fn("h_" + dn, txs));
  }
  a.set_tau(simplify(a.chi2 * pow(sys.t(), 2) + a.chi1 * sys.t()), sys);
  return a;
}

void AnsatzGenerator::set_tau(const Expr& new_tau, const PDESystem& sys) {
  tau = new_tau;
  T = partial_derivative(tau, sys.t());
  eta.clear();
  for (int s = 0; s < sys.q(); ++s) {
    Expr e = (g[size_t(s)] + gamma[size_t(s)] * T) * sys.u(s) + h[size_t(s)];
    for (int i = 0; i < sys.q(); ++i)
      if (i != s) e += f[size_t(s)][size_t(i)] * sys.u(i);
    eta.push_back(simplify(e));
  }
}

std::vector<Expr> AnsatzGenerator::unknowns() const {
  std::vector<Expr> out = {chi1};
  if (!chi2.is_zero()) out.push_back(chi2);
  out.insert(out.end(), xi.begin(), xi.end());
  out.insert(out.end(), g.begin(), g.end());
  for (size_t s = 0; s < f.size(); ++s)
    for (size_t i = 0; i < f[s].size(); ++i)
      if (i != s) out.push_back(f[s][i]);
  out.insert(out.end(), h.begin(), h.end());
  return out;
}

Expr eta_theta(const std::vector<Expr>& xi, const Expr& eta_s, const PDESystem& sys, int s,
               const std::vector<int>& theta) {
  Expr base = eta_s;
  std::vector<int> unit(size_t(sys.p()), 0);
  for (int i = 0; i < sys.p(); ++i) {
    unit[size_t(i)] = 1;
    base -= xi[size_t(i)] * sys.jet(s, unit);
    unit[size_t(i)] = 0;
  }
  base = simplify(base);
  for (int i = 0; i < sys.p(); ++i)
    for (int k = 0; k < theta[size_t(i)]; ++k) base = total_derivative(base, sys.x(i));
  for (int i = 0; i < sys.p(); ++i) {
    std::vector<int> th = theta;
    ++th[size_t(i)];
    base += xi[size_t(i)] * sys.jet(s, th);
  }
  return simplify(base);
}

Expr eta_theta(const AnsatzGenerator& ans, const PDESystem& sys, int s, const std::vector<int>& theta) {
  return eta_theta(ans.xi, ans.eta[size_t(s)], sys, s, theta);
}

SeriesCoeffs series_coeffs(const Expr& tau, const std::vector<Expr>& xi, const Expr& eta_s,
                           const PDESystem& sys, int s, int k) {
  const Expr al = sys.alpha();
  const Expr t = sys.t();
  SeriesCoeffs c;
  Expr ck = gen_binomial(al, k), ck1 = gen_binomial(al, k + 1);
  for (int i = 0; i < sys.q(); ++i) {
    Expr d = ck * d_t_times(partial_derivative(eta_s, sys.u(i)), t, k);
    if (i == s) d -= ck1 * d_t_times(tau, t, k + 1);
    c.dep.push_back(simplify(d));
  }
  for (int i = 0; i < sys.p(); ++i) c.space.push_back(simplify(-ck * d_t_times(xi[size_t(i)], t, k)));
  return c;
}

EtaAlpha eta_alpha_ansatz(const AnsatzGenerator& ans, const PDESystem& sys, int s, int k_max) {
  EtaAlpha out;
  const Equation& eq = sys.equations[size_t(s)];
  const Expr& hs = ans.h[size_t(s)];
  Expr local = Expr::fn(hs.name(), hs.children(), {}, FnRole::unknown, 0);
  for (int i = 0; i < sys.q(); ++i) {
    const Equation& ei = sys.equations[size_t(i)];
    local += partial_derivative(ans.eta[size_t(s)], sys.u(i)) * (ei.F + ei.H);
  }
  local -= ans.alpha * ans.T * (eq.F + eq.H);
  out.local = simplify(local);
  for (int k = 1; k <= k_max; ++k) out.series[k] = series_coeffs(ans.tau, ans.xi, ans.eta[size_t(s)], sys, s, k);
  return out;
}

AuxCheck check_aux_conditions(const AnsatzGenerator& ans, const PDESystem& sys, int k_max) {
  AuxCheck out;
  for (int k = 1; k <= k_max; ++k) {
    for (int s = 0; s < sys.q(); ++s) {
      SeriesCoeffs c = series_coeffs(ans.tau, ans.xi, ans.eta[size_t(s)], sys, s, k);
      for (int i = 0; i < sys.q(); ++i)
        if (!c.dep[size_t(i)].is_zero())
          out.residuals.push_back({k, s, "u:" + sys.names.dep_name(i), c.dep[size_t(i)]});
      for (int i = 0; i < sys.p(); ++i)
        if (!c.space[size_t(i)].is_zero())
          out.residuals.push_back({k, s, "x:" + sys.names.space_name(i), c.space[size_t(i)]});
    }
  }
  out.ok = out.residuals.empty();
  return out;
}

Expr mu_truncated(const Expr& eta, int N, int q, const Expr& alpha, const Expr& t, int p) {
  auto ufn = [&](int i) { return Expr::jet(i, std::vector<int>(size_t(p), 0)); };
  auto al_exp = to_exponent(alpha);
  if (!al_exp) throw SemanticError("order must be affine");

  // [sum_r (1/k!) C(k,r) (-u)^r d_t^m (u^(k-r))] for one dependent
  std::map<std::tuple<int, int, int>, Expr> bracket_cache;
  auto bracket = [&](int i, int k, int m) -> Expr {
    auto key = std::make_tuple(i, k, m);
    auto it = bracket_cache.find(key);
    if (it != bracket_cache.end()) return it->second;
    Expr u = ufn(i), acc;
    Rational binom = 1;
    for (int r = 0; r <= k; ++r) {
      if (r > 0) binom = binom * (k - r + 1) / r;
      Expr d = simplify(pow(u, ExponentForm(k - r)));
      for (int j = 0; j < m && !d.is_zero(); ++j) d = total_derivative(d, t);
      acc += Expr(Rational(binom / factorial(k))) * pow(-u, ExponentForm(r)) * d;
    }
    return bracket_cache[key] = simplify(acc);
  };

  Expr total;
  std::vector<int> m(size_t(q), 0);
  for (int n = 2; n <= N; ++n) {
    Expr pref = gen_binomial(alpha, n) * pow(t, ExponentForm(n) - *al_exp) /
                Expr::gamma(Expr(n + 1) - alpha);
    // enumerate m_1..m_q with 2 <= sum <= n
    std::function<void(int, int)> over_m = [&](int i, int used) {
      if (i == q) {
        if (used < 2) return;
        int m0 = n - used;
        Rational multi = factorial(n) / factorial(m0);
        for (int v : m) multi /= factorial(v);
        // enumerate k_i in [0, m_i] with sum >= 2
        std::function<void(int, int, Expr, Expr)> over_k = [&](int j, int ksum, Expr prod, Expr deta) {
          if (prod.is_zero() || deta.is_zero()) return;
          if (j == q) {
            if (ksum < 2) return;
            total += pref * Expr(multi) * prod * d_t_times(deta, t, m0);
            return;
          }
          Expr dj = deta;
          for (int k = 0; k <= m[size_t(j)]; ++k) {
            if (k > 0) dj = partial_derivative(dj, ufn(j));
            over_k(j + 1, ksum + k, simplify(prod * bracket(j, k, m[size_t(j)])), dj);
          }
        };
        over_k(0, 0, Expr(1), eta);
        return;
      }
      for (int v = 0; used + v <= n; ++v) {
        m[size_t(i)] = v;
        over_m(i + 1, used + v);
      }
      m[size_t(i)] = 0;
    };
    over_m(0, 0);
  }
  return gamma_simplify(simplify(total));
}

}  // namespace fraclie
