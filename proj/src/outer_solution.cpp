#include "ksspec/outer_solution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksspec/error.hpp"
#include "ksspec/ode.hpp"
#include "ksspec/special_functions.hpp"

namespace ksspec {

namespace {

double default_z_max(double theta, double z_max) { return z_max > 0.0 ? z_max : std::max(40.0, 20.0 * std::abs(theta)); }

double p0_apply(double b, double z, double q, double dq) {
  const double s = b + 2.0 * z;
  return -2.0 * b / s * dq + 4.0 * b / (s * s) * q;
}

}  // namespace

double outer_theta(const Parameters& p, int n, double alpha_bar) { return 1.0 - n + 1.0 / std::log(p.b) + alpha_bar; }

OuterSolution solve_outer(const Parameters& p, int n, double alpha_bar, const OuterOptions& opt) {
  if (!(p.b > 0.0 && p.b <= 1e-2)) fail(ErrorKind::Config, "solve_outer: b must lie in (0, 1e-2]");
  OuterSolution sol;
  sol.params = p;
  sol.n = n;
  sol.alpha_bar = alpha_bar;
  sol.theta = outer_theta(p, n, alpha_bar);
  sol.method = OuterMethod::backward_ode;
  const double theta = sol.theta, b = p.b;
  const double z_max = default_z_max(theta, opt.z_max);
  if (z_max < std::max(40.0, 20.0 * std::abs(theta)) * (1.0 - 1e-12))
    fail(ErrorKind::Config, "solve_outer: z_max below max(40, 20|theta|)");
  auto grid = make_grid(p.z0, z_max, opt.nodes);
  const auto& z = grid->nodes();

  // Seed from the full asymptotic expansion of U(theta, 2, z); only P0 is left unbalanced.
  const KummerEval seed = kummer_singular(theta, z_max);
  {
    const double d2 = (-(2.0 - z_max) * seed.derivative_z + theta * seed.value) / z_max;
    const double res = std::abs(p0_apply(b, z_max, seed.value, seed.derivative_z));
    const double scale = std::abs(z_max * d2) + std::abs((2.0 - z_max) * seed.derivative_z) + std::abs(theta * seed.value);
    if (!(res <= 1e-3 * scale)) fail(ErrorKind::Numerical, "solve_outer: seed residual too large at z_max");
  }
  const OuterPerturbation* pert = opt.perturbation;
  Rhs2 rhs = [b, theta, pert](const State2& y, State2& dy, double t) {
    const double x = std::exp(t), s = b + 2.0 * x;
    const double q = y[0], pq = y[1];
    double zz_q2 = -(2.0 - x) * pq + x * theta * q + 2.0 * b / s * pq - 4.0 * b * x / (s * s) * q;
    if (pert) zz_q2 -= 0.5 * (pert->dV(x) * q + pert->V(x) * pq / x);
    dy[0] = pq;
    dy[1] = pq + zz_q2;
  };
  std::vector<double> t(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) t[z.size() - 1 - i] = std::log(z[i]);
  OdeTolerance tol;
  tol.rel = 1e-11;
  tol.abs = 1e-300;
  const auto ys = integrate_dense(rhs, {seed.value, z_max * seed.derivative_z}, t.front(), t, tol);

  double scale = 1.0;
  if (opt.full) scale = gamma(theta);
  std::vector<double> q(z.size()), dq(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& y = ys[z.size() - 1 - i];
    q[i] = scale * y[0];
    dq[i] = scale * y[1] / z[i];
  }
  sol.scale = scale;
  sol.q_z0 = q.front();
  sol.dq_z0 = dq.front();
  sol.q = RadialGridFunction(grid, q);
  sol.dq = RadialGridFunction(grid, dq);
  if (opt.full) {
    const auto h = kummer_singular_grid(theta, z);
    std::vector<double> g(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g[i] = q[i] - scale * h[i].value;
    sol.correction_G = RadialGridFunction(grid, std::move(g));
  }
  return sol;
}

KummerInverse invert_kummer(double theta, GridPtr zgrid, const std::vector<double>& f) {
  const auto& z = zgrid->nodes();
  const std::size_t n = z.size();
  if (f.size() != n) fail(ErrorKind::Config, "invert_kummer: size mismatch");
  const double G = gamma(theta);
  const auto h = kummer_singular_grid(theta, z);
  std::vector<double> ht(n), dht(n), a(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const KummerEval m = kummer_regular(theta, z[i]);
    ht[i] = m.value;
    dht[i] = m.derivative_z;
    const double w = z[i] * std::exp(-z[i]);
    a[i] = ht[i] * f[i] * w;
    c[i] = h[i].value * f[i] * w;
  }
  const auto A = zgrid->cumulative(a);
  const auto C = zgrid->cumulative(c);
  KummerInverse out;
  out.value.resize(n);
  out.derivative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double B = C.back() - C[i];
    out.value[i] = -G * (h[i].value * A[i] + ht[i] * B);
    out.derivative[i] = -G * (h[i].derivative_z * A[i] + dht[i] * B);
  }
  return out;
}

std::vector<double> apply_kummer(double theta, GridPtr zgrid, const std::vector<double>& u,
                                 const std::vector<double>* du) {
  const auto& z = zgrid->nodes();
  const auto d1 = du ? *du : zgrid->derivative(u);
  const auto d2 = du ? zgrid->derivative(*du) : zgrid->second_derivative(u);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = kummer_residual(theta, z[i], u[i], d1[i], d2[i]);
  return out;
}

OuterSolution fixed_point_outer(const Parameters& p, int n, double alpha_bar, int sweeps, const OuterOptions& opt) {
  if (sweeps < 0 || sweeps > 3) fail(ErrorKind::Config, "fixed_point_outer: sweeps must lie in [0, 3]");
  OuterSolution sol;
  sol.params = p;
  sol.n = n;
  sol.alpha_bar = alpha_bar;
  sol.theta = outer_theta(p, n, alpha_bar);
  sol.method = OuterMethod::fixed_point;
  const double theta = sol.theta, b = p.b;
  auto grid = make_grid(p.z0, default_z_max(theta, opt.z_max), opt.nodes);
  const auto& z = grid->nodes();
  const double G = gamma(theta);
  const auto h = kummer_singular_grid(theta, z);
  std::vector<double> q(z.size()), dq(z.size()), f(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    q[i] = G * h[i].value;
    dq[i] = G * h[i].derivative_z;
  }
  for (int k = 0; k < sweeps; ++k) {
    for (std::size_t i = 0; i < z.size(); ++i) f[i] = p0_apply(b, z[i], q[i], dq[i]);
    const auto inv = invert_kummer(theta, grid, f);
    for (std::size_t i = 0; i < z.size(); ++i) {
      q[i] = G * h[i].value - inv.value[i];
      dq[i] = G * h[i].derivative_z - inv.derivative[i];
    }
  }
  std::vector<double> g(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) g[i] = q[i] - G * h[i].value;
  sol.scale = G;
  sol.q_z0 = q.front();
  sol.dq_z0 = dq.front();
  sol.q = RadialGridFunction(grid, std::move(q));
  sol.dq = RadialGridFunction(grid, std::move(dq));
  sol.correction_G = RadialGridFunction(grid, std::move(g));
  return sol;
}

int outer_zero_count(const OuterSolution& sol) { return sign_changes(sol.q.values); }

double outer_residual(const OuterSolution& sol) {
  const auto& z = sol.q.nodes();
  const auto d2 = sol.q.grid->derivative(sol.dq.values);
  const double b = sol.params.b, theta = sol.theta;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < z.size(); ++i) {
    const double q = sol.q[i], dq = sol.dq[i];
    const double res = z[i] * d2[i] + (2.0 - z[i]) * dq - theta * q + p0_apply(b, z[i], q, dq);
    const double scale = std::abs(z[i] * d2[i]) + std::abs((2.0 - z[i]) * dq) + std::abs(theta * q);
    if (scale > 0.0) worst = std::max(worst, std::abs(res) / scale);
  }
  return worst;
}

}  // namespace ksspec
