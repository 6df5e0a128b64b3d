#include "ksspec/perturbation.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>
#include <string>

#include "ksspec/error.hpp"
#include "ksspec/ode.hpp"

namespace ksspec {

std::vector<double> log_weight_integral(const std::function<double(double)>& P, const std::vector<double>& x) {
  if (x.empty()) return {};
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = P(x[i]) / x[i];
  std::vector<double> out(x.size(), 0.5 * P(x[0]));
  if (x.size() < 7) {
    for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return out;
  }
  const RadialGrid g(x);
  const auto c = g.cumulative(f);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += c[i];
  return out;
}

PerturbationSpec make_perturbation(double nu, double beta, std::function<double(double)> P,
                                   std::function<double(double)> dP, double limit) {
  if (!(nu > 0.0 && nu <= 0.1)) fail(ErrorKind::Config, "perturbation: nu must lie in (0, 0.1]");
  PerturbationSpec s;
  s.nu = nu;
  s.nu_tilde = nu;
  s.beta = beta;
  s.P = std::move(P);
  s.dP = std::move(dP);
  // zeta from 1e-4 nu to beyond the spectrum grid's outer end
  auto grid = make_grid(1e-4 * nu, std::sqrt(2.0 * 80.0 / beta), 3000);
  const auto& z = grid->nodes();
  const double L = std::abs(std::log(nu)), n2 = nu * nu;
  std::vector<double> pv(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    pv[i] = s.P(z[i]);
    const double scale = L * (n2 + z[i] * z[i]) * (n2 + z[i] * z[i]) / (n2 * z[i] * z[i]);
    s.admissibility_M_P = std::max(s.admissibility_M_P, std::abs(pv[i]) * scale);
    s.admissibility_M = std::max(s.admissibility_M, (std::abs(pv[i]) + std::abs(z[i] * s.dP(z[i]))) * scale);
  }
  auto lw = log_weight_integral(s.P, z);
  std::vector<double> wb(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) wb[i] = omega_nu(z[i], nu, beta) * std::exp(lw[i]);
  s.P_grid = RadialGridFunction(grid, std::move(pv));
  s.log_weight_ratio = RadialGridFunction(grid, std::move(lw));
  s.weight_bar = RadialGridFunction(grid, std::move(wb));
  if (!(s.admissibility_M <= limit)) {
    std::ostringstream os;
    os << "perturbation: admissibility constant " << s.admissibility_M << " above " << limit;
    fail(ErrorKind::Invariant, os.str());
  }
  return s;
}

PerturbationSpec default_potential(double nu, double nu_tilde, double beta, double limit) {
  if (!(nu > 0.0 && nu <= 0.1 && nu_tilde > 0.0)) fail(ErrorKind::Config, "default_potential: nu out of range");
  const double L = std::abs(std::log(nu));
  if (std::abs(nu_tilde / nu - 1.0) > (1.0 + 1e-12) / L)
    fail(ErrorKind::Config, "default_potential: |nu_tilde / nu - 1| exceeds 1 / |ln nu|");
  const double a = nu * nu, t = nu_tilde * nu_tilde, c = 2.0 * (a - t);
  auto P = [a, t, c](double z) {
    const double z2 = z * z;
    return c * z2 / ((z2 + a) * (z2 + t));
  };
  // d/dz ln P = 2/z - 2z/(z^2 + a) - 2z/(z^2 + t)
  auto dP = [a, t, c](double z) {
    const double z2 = z * z;
    return c * 2.0 * z * (a * t - z2 * z2) / ((z2 + a) * (z2 + a) * (z2 + t) * (z2 + t));
  };
  PerturbationSpec s = make_perturbation(nu, beta, P, dP, limit);
  s.nu_tilde = nu_tilde;
  return s;
}

std::vector<State2> perturbed_ground_ratio(const Parameters& p, const PerturbationSpec& spec,
                                           const std::vector<double>& r) {
  const double nu = p.nu;
  auto E = [&](double x) {
    const double x2 = x * x, Pv = spec.P(nu * x);
    return nu * spec.dP(nu * x) / x + 2.0 * Pv * (1.0 - x2) / (x2 * (1.0 + x2));
  };
  // (h, v = r h') in s = ln r; (W h')' + W E h = 0 with r W'/W = -1 + 4/(1 + r^2) + P at b = 0.
  Rhs2 rhs = [&](const State2& y, State2& dy, double s) {
    const double x = std::exp(s);
    dy[0] = y[1];
    dy[1] = y[1] * (2.0 - 4.0 / (1.0 + x * x) - spec.P(nu * x)) - x * x * E(x) * y[0];
  };
  std::vector<double> t(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) t[i] = std::log(r[i]);
  const double x0 = r.front(), e0 = E(x0) * x0 * x0;
  OdeTolerance tol;
  tol.rel = 1e-12;
  tol.abs = 1e-300;
  return integrate_dense(rhs, {1.0 - e0 / 8.0, -e0 / 4.0}, t.front(), t, tol);
}

SturmOperator build_perturbed(const Parameters& p, const PerturbationSpec& spec, const SpectrumOptions& opt) {
  if (std::abs(spec.nu - p.nu) > 1e-12 * p.nu) fail(ErrorKind::Config, "build_perturbed: nu of spec and params differ");
  auto grid = spectrum_grid(p, opt);
  const auto& r = grid->nodes();
  const std::size_t n = r.size();
  const double nu = p.nu;
  // nodes and geometric midpoints interleaved
  std::vector<double> x(2 * n - 1), xz(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[2 * i] = r[i];
    if (i + 1 < n) x[2 * i + 1] = std::sqrt(r[i] * r[i + 1]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) xz[i] = nu * x[i];
  const auto lw = log_weight_integral(spec.P, xz);
  // The perturbation potential is O(1/|ln nu|) near r ~ 1 while the eigenvalue shift is O(b);
  // conjugating by the perturbed zero mode psi0 h keeps the discrete potential O(b).
  const auto hv = perturbed_ground_ratio(p, spec, x);
  GroundStateExtras ex;
  ex.log_weight_nodes.resize(n);
  ex.log_weight_mid.resize(n - 1);
  ex.potential.resize(n);
  ex.ground_ratio.resize(n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = hv[i][0];
    if (!(h > 0.0)) fail(ErrorKind::Numerical, "build_perturbed: perturbed zero mode is not positive");
    const double l = lw[i] + 2.0 * std::log(h);
    if (i % 2) {
      ex.log_weight_mid[i / 2] = l;
    } else {
      ex.log_weight_nodes[i / 2] = l;
      ex.potential[i / 2] = -p.b * hv[i][1] / h;
      ex.ground_ratio[i / 2] = h;
    }
  }
  return assemble_ground_state(p, grid, &ex);
}

StabilityReport stability_report(const Parameters& p, const PerturbationSpec& spec, int N, const SpectrumOptions& opt) {
  if (N < 0 || N > 4) fail(ErrorKind::Config, "stability_report: N must lie in [0, 4]");
  StabilityReport rep;
  rep.params = p;
  rep.N = N;
  const SturmOperator base = assemble_ground_state(p, spectrum_grid(p, opt));
  const SturmOperator pert = build_perturbed(p, spec, opt);
  rep.max_asymmetry = weighted_asymmetry(pert);
  const int k = N + 2;
  const SpectrumResult a = solve_spectrum(base, k);
  const SpectrumResult c = solve_spectrum(pert, k);
  const double nu2 = p.nu * p.nu, L = std::abs(std::log(p.nu));
  rep.min_gap_bar = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < k; ++i) rep.min_gap_bar = std::min(rep.min_gap_bar, (c.eigenvalues[i] - c.eigenvalues[i + 1]) / nu2);
  for (int i = 0; i <= N; ++i) {
    const double l0 = a.eigenvalues[i] / nu2, l1 = c.eigenvalues[i] / nu2;
    rep.lambda.push_back(l0);
    rep.lambda_bar.push_back(l1);
    rep.scaled_eigenvalue.push_back(std::abs(l1 - l0) * L * L / (2.0 * p.beta));
    // both in the unperturbed norm as f / psi0 on the same grid
    const auto& u = a.unknowns[i];
    std::vector<double> v = c.unknowns[i];
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= pert.ground_ratio[j];
    const double nu_ = std::sqrt(inner(base, u, u)), nv = std::sqrt(inner(base, v, v));
    const double sign = inner(base, u, v) < 0.0 ? -1.0 : 1.0;
    std::vector<double> d(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) d[j] = u[j] / nu_ - sign * v[j] / nv;
    const double dist = std::sqrt(inner(base, d, d));
    rep.eigenfunction_distance.push_back(dist);
    rep.scaled_eigenfunction.push_back(dist * std::sqrt(L));
  }
  return rep;
}

}  // namespace ksspec
