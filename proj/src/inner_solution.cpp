#include "ksspec/inner_solution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksspec/error.hpp"
#include "ksspec/ode.hpp"
#include "ksspec/special_functions.hpp"

namespace ksspec {

namespace {

// Coefficients a_k of phi = sum_k a_k r^{2k+2}, a_0 = 1.
std::vector<double> frobenius(double b, double alpha, int terms) {
  std::vector<double> a(terms, 0.0);
  a[0] = 1.0;
  auto g = [&](int m) { return 4.0 * (m % 2 ? -1.0 : 1.0) - (m == 0 ? b : 0.0); };
  auto u = [&](int m) { return 8.0 * (m + 1) * (m % 2 ? -1.0 : 1.0) - (m == 0 ? alpha : 0.0); };
  for (int K = 1; K < terms; ++K) {
    double acc = 0.0;
    for (int k = 0; k < K; ++k) acc += (g(K - 1 - k) * (2.0 * k + 2.0) + u(K - 1 - k)) * a[k];
    a[K] = -acc / (4.0 * K * (K + 1.0));
  }
  return a;
}

}  // namespace

double inner_alpha(const Parameters& p, int n, double alpha_bar) {
  return 2.0 * p.b * (1.0 - n + 1.0 / std::log(p.b) + alpha_bar);
}

InnerSolution solve_inner(const Parameters& p, int n, double alpha_bar, const InnerOptions& opt) {
  if (n < 0) fail(ErrorKind::Config, "solve_inner: n must be nonnegative");
  if (!(p.b > 0.0 && p.b <= 1e-2)) fail(ErrorKind::Config, "solve_inner: b must lie in (0, 1e-2]");
  if (!(p.R0 > opt.r_min * 10.0)) fail(ErrorKind::Config, "solve_inner: R0 too close to r_min");
  InnerSolution sol;
  sol.params = p;
  sol.n = n;
  sol.alpha_bar = alpha_bar;
  sol.alpha_tilde = 1.0 / std::log(p.b) + alpha_bar;
  sol.alpha = inner_alpha(p, n, alpha_bar);
  const double b = p.b, alpha = sol.alpha;

  auto grid = make_grid(opt.r_min, p.R0, opt.nodes);
  const auto& r = grid->nodes();

  // Variation of parameters: phi = A psi0 + B psi0_tilde, A0 phi = g := b r phi' + alpha phi,
  // dA/ds = -r k g / 2, dB/ds = r^2 g / 2 (s = ln r, k = (r^4 + 4 r^2 ln r - 1) / r).
  // phi(R0) = O(b) while phi = O(1) near r = 1; integrating (phi, phi') directly would lose
  // ~ zeta0^2 / b in relative accuracy, the (A, B) form keeps both pieces to full precision.
  const auto a = frobenius(b, alpha, 4);
  const double r0 = r.front(), x2 = r0 * r0;
  double f0 = 0.0, pw = 1.0;
  for (int k = 0; k < 4; ++k) {
    f0 += a[k] * pw;
    pw *= x2;
  }
  const Profiles pr0 = stationary_profiles(r0);
  const double B0 = 0.125 * (2.0 * b + alpha) * x2 * x2;  // B = int_0^r s g / 2 with g ~ (2b + alpha) s^2
  const double A0 = (f0 - B0 * pr0.psi0_tilde) / pr0.psi0;
  Rhs2 rhs = [b, alpha](const State2& y, State2& dy, double s) {
    const double x = std::exp(s), xx = x * x;
    const Profiles pr = stationary_profiles(x);
    const double f = y[0] * pr.psi0 + y[1] * pr.psi0_tilde;
    const double df = y[0] * pr.dpsi0 + y[1] * pr.dpsi0_tilde;
    const double g = b * x * df + alpha * f;
    const double k = (xx * xx + 4.0 * xx * s - 1.0) / x;
    dy[0] = -0.5 * x * k * g;
    dy[1] = 0.5 * xx * g;
  };
  std::vector<double> s(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) s[i] = std::log(r[i]);
  OdeTolerance tol;
  tol.rel = 1e-12;
  tol.abs = 1e-300;
  const auto ys = integrate_dense(rhs, {A0, B0}, s.front(), s, tol);

  std::vector<double> v(r.size()), dv(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Profiles pr = stationary_profiles(r[i]);
    v[i] = ys[i][0] * pr.psi0 + ys[i][1] * pr.psi0_tilde;
    dv[i] = ys[i][0] * pr.dpsi0 + ys[i][1] * pr.dpsi0_tilde;
  }

  const KernelTable& table = default_kernel_table();
  if (n + 1 > table.j_max) fail(ErrorKind::Config, "solve_inner: n exceeds the kernel table horizon");
  sol.leading_F = leading_expansion_F(p, n, table, grid);

  double scale = 1.0;
  if (opt.fit_to_F) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r.size() && r[i] <= 0.05; ++i) {
      num += v[i] * sol.leading_F[i];
      den += v[i] * v[i];
    }
    if (!(den > 0.0)) fail(ErrorKind::Numerical, "solve_inner: no nodes in the normalization window");
    scale = num / den;
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    v[i] *= scale;
    dv[i] *= scale;
  }
  sol.normalization = scale;
  sol.values = RadialGridFunction(grid, v);
  sol.dvalues = RadialGridFunction(grid, dv);
  sol.value_R0 = v.back();
  sol.dvalue_R0 = dv.back();

  std::vector<double> e(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    double g = 0.0, bj = b;
    for (int j = 0; j <= n; ++j, bj *= b) g -= cnj(n, j) * bj * table.grid->interpolate(table.T[j + 1].values, r[i]);
    e[i] = v[i] - sol.leading_F[i] - 2.0 * alpha_bar * g;
  }
  sol.residual_E = RadialGridFunction(grid, std::move(e));
  return sol;
}

double leading_expansion_F_at(const Parameters& p, int n, const KernelTable& table, double r) {
  if (n > table.j_max) fail(ErrorKind::Config, "leading_expansion_F: n exceeds the kernel table horizon");
  double acc = 0.0, bj = 1.0;
  for (int j = 0; j <= n; ++j, bj *= p.b) acc += cnj(n, j) * bj * table.grid->interpolate(table.T[j].values, r);
  return acc;
}

RadialGridFunction leading_expansion_F(const Parameters& p, int n, const KernelTable& table, GridPtr grid) {
  return RadialGridFunction::sample(grid, [&](double r) { return leading_expansion_F_at(p, n, table, r); });
}

std::pair<double, double> refined_series(const Parameters& p, int n, double r) {
  if (n != 0 && n != 1) fail(ErrorKind::Config, "refined_series: only n = 0 and n = 1 are available");
  const double b = p.b, lb = std::log(b);
  if (b * r * r > 50.0) fail(ErrorKind::Domain, "refined_series: b r^2 above 50");
  const double lr = std::log1p(r);
  double R = 0.0, S = 0.0;
  // t_i = (b r^2 / 2)^i / (2)_i; for n = 1 the (1)_{i-1} / i! factor is 1 / i.
  const double x = 0.5 * b * r * r;
  double t = 1.0;
  bool done = false;
  for (int i = 1; i <= 500; ++i) {
    t *= x / (i + 1.0);
    double dR, dS;
    if (n == 0) {
      dR = -0.5 * t * ((2.0 * lr - digamma(i + 2.0) - kEulerGamma) / lb + 1.0);
      dS = 0.5 * t * lr;
    } else {
      const double w = t / i;
      dR = -0.5 * w * ((2.0 * lr - 1.0 / i - digamma(i + 2.0) - kEulerGamma) / lb + 1.0 - 1.0 / lb);
      dS = i >= 2 ? -0.5 * w / b * lr : 0.0;
    }
    R += dR;
    S += dS;
    if (std::abs(dR) <= 1e-14 * std::abs(R) && std::abs(dS) <= 1e-14 * std::abs(S) && i > 2) {
      done = true;
      break;
    }
    if (t == 0.0) {
      done = true;
      break;
    }
  }
  if (!done) fail(ErrorKind::Numerical, "refined_series: 500 terms did not reach the tail tolerance");
  return {R, S};
}

int inner_zero_count(const InnerSolution& sol) { return sign_changes(sol.values.values); }

double inner_ode_residual(const InnerSolution& sol) {
  const auto& r = sol.values.nodes();
  const auto d2 = sol.values.grid->derivative(sol.dvalues.values);
  const double b = sol.params.b, alpha = sol.alpha;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < r.size(); ++i) {
    const double x = r[i], f = sol.values[i], df = sol.dvalues[i];
    const double drift = (-1.0 / x + 4.0 * x / (1.0 + x * x) - b * x) * df;
    const double res = d2[i] + drift + (U_of(x) - alpha) * f;
    const double scale = std::abs(d2[i]) + std::abs(drift) + std::abs(U_of(x) * f) + std::abs(alpha * f);
    if (scale > 0.0) worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

}  // namespace ksspec
