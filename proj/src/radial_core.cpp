#include "ksspec/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksspec/error.hpp"

namespace ksspec {

Parameters Parameters::make(double beta, double nu, double zeta0, int n_max, double delta) {
  Parameters p;
  p.beta = beta;
  p.nu = nu;
  p.b = beta * nu * nu;
  p.zeta0 = zeta0;
  p.R0 = zeta0 / std::sqrt(p.b);
  p.z0 = 0.5 * zeta0 * zeta0;
  p.n_max = n_max;
  p.delta = delta;
  p.validate();
  return p;
}

Parameters Parameters::from_b(double b, double zeta0, int n_max, double beta) {
  if (!(b > 0.0) || !(beta > 0.0)) fail(ErrorKind::Config, "Parameters: b and beta must be positive");
  Parameters p = make(beta, std::sqrt(b / beta), zeta0, n_max);
  p.b = b;
  p.R0 = zeta0 / std::sqrt(b);
  return p;
}

void Parameters::validate() const {
  if (!(beta > 0.0)) fail(ErrorKind::Config, "Parameters: beta must be positive");
  if (!(nu > 0.0 && nu < 1.0)) fail(ErrorKind::Config, "Parameters: nu must lie in (0, 1)");
  if (!(zeta0 > 0.0 && zeta0 <= 0.5)) fail(ErrorKind::Config, "Parameters: zeta0 must lie in (0, 0.5]");
  if (n_max < 0) fail(ErrorKind::Config, "Parameters: n_max must be nonnegative");
  if (!(delta > 0.0)) fail(ErrorKind::Config, "Parameters: delta must be positive");
}

double Parameters::log_b() const { return std::log(b); }

Profiles stationary_profiles(double r) {
  if (r < 0.0) fail(ErrorKind::Domain, "stationary_profiles: r must be nonnegative");
  const double r2 = r * r;
  const double s = 1.0 + r2;
  const double s2 = s * s;
  const double lr = r > 0.0 ? std::log(r) : 0.0;
  const double r2lr = r > 0.0 ? r2 * lr : 0.0;
  const double rlr = r > 0.0 ? r * lr : 0.0;
  Profiles p;
  p.U = 8.0 / s2;
  p.Q = 4.0 * r2 / s;
  p.psi0 = r2 / s2;
  p.dpsi0 = 2.0 * r * (1.0 - r2) / (s2 * s);
  const double N = r2 * r2 + 4.0 * r2lr - 1.0;
  const double dN = 4.0 * r2 * r + 8.0 * rlr + 4.0 * r;
  p.psi0_tilde = N / s2;
  p.dpsi0_tilde = (dN * s - 4.0 * r * N) / (s2 * s);
  return p;
}

double omega_nu(double zeta, double nu, double beta) {
  const double q = nu * nu + zeta * zeta;
  return q * q / 8.0 * std::exp(-0.5 * beta * zeta * zeta);
}

double rho0(double zeta, double beta) { return std::exp(-0.5 * beta * zeta * zeta); }

double log_omega_b(double r, double b) {
  const double s = 1.0 + r * r;
  return 2.0 * std::log(s) - std::log(8.0 * r) - 0.5 * b * r * r;
}

double omega_b(double r, double b) { return std::exp(log_omega_b(r, b)); }

double rho_b(double r, double b) { return (1.0 + r * r) / (std::sqrt(8.0) * r * r) * std::exp(-0.25 * b * r * r); }

double pointwise_bound_constant(const Parameters& p, int n, const std::vector<double>& r, const std::vector<double>& phi) {
  if (r.size() != phi.size()) fail(ErrorKind::Config, "pointwise_bound_constant: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double x = r[i], jr2 = 1.0 + x * x;
    const double env = x * x / (jr2 * jr2) * std::pow(1.0 + p.b * x * x, 0.5 * (2 * n + p.delta)) *
                       (n >= 1 ? 1.0 + 0.5 * std::log(jr2) : 1.0);
    worst = std::max(worst, std::abs(phi[i]) / env);
  }
  return worst;
}

RadialGridFunction partial_mass(const RadialGridFunction& f) {
  const auto& r = f.nodes();
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f[i] * r[i];
  auto m = f.grid->cumulative(g);
  // [0, r_0] with f frozen at f(r_0)
  const double head = 0.5 * f[0] * r[0] * r[0];
  for (double& x : m) x += head;
  return RadialGridFunction(f.grid, std::move(m));
}

RadialGridFunction apply_A0(const RadialGridFunction& f) {
  const auto& r = f.nodes();
  const auto d1 = f.grid->derivative(f.values);
  const auto d2 = f.grid->second_derivative(f.values);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = r[i];
    out[i] = d2[i] + (-1.0 / x + 4.0 * x / (1.0 + x * x)) * d1[i] + U_of(x) * f[i];
  }
  return RadialGridFunction(f.grid, std::move(out));
}

RadialGridFunction invert_A0(const RadialGridFunction& f, std::vector<double>* du) {
  const auto& g = *f.grid;
  const auto& r = g.nodes();
  if (!(g.front() < 1.0 && g.back() > 1.0)) fail(ErrorKind::Domain, "invert_A0: grid must contain r = 1");
  const std::size_t n = f.size();
  std::vector<double> kf(n), sf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = r[i], x2 = x * x;
    kf[i] = (x2 * x2 + 4.0 * x2 * std::log(x) - 1.0) / x * f[i];
    sf[i] = x * f[i];
  }
  const auto K = g.cumulative(kf);
  auto S = g.cumulative(sf);
  const double K1 = g.interpolate(K, 1.0);
  const double head = 0.25 * f[0] * r[0] * r[0];  // f ~ r^2 below r_0
  std::vector<double> u(n);
  if (du) du->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Profiles p = stationary_profiles(r[i]);
    const double A = K1 - K[i];
    const double B = S[i] + head;
    u[i] = 0.5 * (p.psi0 * A + p.psi0_tilde * B);
    if (du) (*du)[i] = 0.5 * (p.dpsi0 * A + p.dpsi0_tilde * B);
  }
  return RadialGridFunction(f.grid, std::move(u));
}

double cnj(int n, int j) {
  if (j < 0 || j > n) return 0.0;
  double c = 1.0;
  for (int k = 0; k < j; ++k) c *= 2.0 * (n - k);
  return c;
}

void tail_recurrence(int j_max, std::vector<double>& dhat, std::vector<double>& d, double d1) {
  dhat.assign(j_max + 1, 0.0);
  d.assign(j_max + 1, 0.0);
  if (j_max < 1) return;
  dhat[1] = -0.5;
  d[1] = d1;
  for (int i = 1; i < j_max; ++i) {
    dhat[i + 1] = -dhat[i] / (4.0 * i * (i + 1));
    const double a = (dhat[i] - 2.0 * i * d[i]) / (double(i) * i);
    const double b = (dhat[i] - (2.0 * i + 2.0) * d[i]) / ((i + 1.0) * (i + 1.0));
    d[i + 1] = 0.125 * (a - b);
  }
}

GridPtr default_kernel_grid(double r_max, std::size_t n) { return make_grid(1e-4, r_max, n); }

void fit_tail(const KernelTable& t, int j, double r_lo, double r_hi, double& dhat, double& d) {
  const auto& r = t.grid->nodes();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    const double x = std::log(r[i]);
    const double y = t.T[j][i] / std::pow(r[i], 2.0 * (j - 1));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) fail(ErrorKind::Numerical, "fit_tail: window holds fewer than 3 nodes");
  dhat = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  d = (sy - dhat * sx) / m;
}

KernelTable build_kernel_table(int j_max, GridPtr grid) {
  if (j_max < 0 || j_max > 6) fail(ErrorKind::Config, "build_kernel_table: j_max must lie in [0, 6]");
  KernelTable t;
  t.j_max = j_max;
  t.grid = grid;
  const auto& r = grid->nodes();
  t.T.push_back(RadialGridFunction::sample(grid, [](double x) { return stationary_profiles(x).psi0; }));
  std::vector<double> d0(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) d0[i] = stationary_profiles(r[i]).dpsi0;
  t.dT.push_back(d0);
  for (int j = 0; j < j_max; ++j) {
    std::vector<double> du;
    auto u = invert_A0(t.T[j], &du);
    for (auto& v : u.values) v = -v;
    for (auto& v : du) v = -v;
    t.T.push_back(std::move(u));
    t.dT.push_back(std::move(du));
  }
  for (int j = 0; j <= j_max; ++j) {
    std::vector<double> th(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) th[i] = r[i] * t.dT[j][i] - 2.0 * (j - 1) * t.T[j][i];
    t.Theta.emplace_back(grid, std::move(th));
  }
  t.A0inv_Theta0 = invert_A0(t.Theta[0]);

  tail_recurrence(std::max(j_max, 1), t.dhat, t.d);
  t.c.assign(j_max + 1, std::vector<double>(j_max + 1, 0.0));
  for (int n = 0; n <= j_max; ++n)
    for (int j = 0; j <= n; ++j) t.c[n][j] = cnj(n, j);

  t.dhat_fit.assign(j_max + 1, 0.0);
  t.d_fit.assign(j_max + 1, 0.0);
  const double r_hi = 0.5 * grid->back();
  for (int j = 1; j <= j_max; ++j) fit_tail(t, j, 0.1 * r_hi, r_hi, t.dhat_fit[j], t.d_fit[j]);
  for (int j = 1; j <= j_max; ++j) {
    if (std::abs(t.dhat_fit[j] - t.dhat[j]) > 0.05 * std::abs(t.dhat[j]))
      fail(ErrorKind::Numerical, "build_kernel_table: fitted dhat_" + std::to_string(j) + " = " +
                                     std::to_string(t.dhat_fit[j]) + " deviates from recurrence " +
                                     std::to_string(t.dhat[j]));
  }
  return t;
}

const KernelTable& default_kernel_table() {
  static const KernelTable table = build_kernel_table(6, default_kernel_grid());
  return table;
}

RadialGridFunction theta_profile(int j, const KernelTable& table) {
  if (j < 0 || j > table.j_max) fail(ErrorKind::Config, "theta_profile: j outside the table");
  return table.Theta[j];
}

double theta0_moment(const KernelTable& table) {
  const auto& r = table.grid->nodes();
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g[i] = r[i] * table.Theta[0][i];
  const double R = table.grid->back();
  // r Theta_0 = (r^2 T_0)', so [0, r_0] contributes r_0^2 T_0(r_0).
  return table.grid->integrate(g) + r[0] * r[0] * table.T[0][0] + 2.0 / (R * R);
}

}  // namespace ksspec
