#include "ksspec/direct_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ksspec/error.hpp"

namespace ksspec {

namespace {

double log_ground_weight(double r, double b) {
  // ln(omega_b psi0^2) = ln(r^3 e^{-b r^2/2} / (8 (1 + r^2)^2))
  return 3.0 * std::log(r) - 0.5 * b * r * r - std::log(8.0) - 2.0 * std::log1p(r * r);
}

std::vector<double> midpoints(const std::vector<double>& r) {
  std::vector<double> m(r.size() - 1);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) m[i] = std::sqrt(r[i] * r[i + 1]);
  return m;
}

std::vector<double> cell_widths(const std::vector<double>& r, const std::vector<double>& mid) {
  const std::size_t n = r.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? r[0] : mid[i - 1];
    const double hi = i + 1 == n ? r[n - 1] : mid[i];
    w[i] = hi - lo;
  }
  return w;
}

// Solves (K + M(sigma - V)) x = rhs by the excess form of Gaussian elimination.
std::vector<double> shifted_solve(const SturmOperator& op, double sigma, const std::vector<double>& rhs) {
  const std::size_t n = op.mass.size();
  std::vector<double> piv(n), y(n), x(n);
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  double e = op.mass[0] * (sigma - op.potential[0]) + op.bc_left;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double c = op.flux[i - 1];
      double den = c + e;
      if (den == 0.0) den = tiny;
      e = op.mass[i] * (sigma - op.potential[i]) + c * e / den;
      if (i + 1 == n) e += op.bc_right;
    }
    double p = i + 1 < n ? op.flux[i] + e : e;
    if (p == 0.0) p = tiny;
    piv[i] = p;
    y[i] = rhs[i] + (i > 0 ? op.flux[i - 1] * y[i - 1] / piv[i - 1] : 0.0);
  }
  for (std::size_t k = n; k-- > 0;) x[k] = (y[k] + (k + 1 < n ? op.flux[k] * x[k + 1] : 0.0)) / piv[k];
  return x;
}

}  // namespace

GridPtr spectrum_grid(const Parameters& p, const SpectrumOptions& opt) {
  std::size_t n = opt.nodes;
  if (n == 0) n = p.nu <= 1e-5 * (1.0 + 1e-12) ? 8000 : 4000;
  const double r_max = std::sqrt(2.0 * opt.K / p.b);
  return make_grid(opt.r_min, r_max, n);
}

SturmOperator assemble_discretization(const Parameters& p, GridPtr grid) {
  const auto& r = grid->nodes();
  const std::size_t N = r.size();
  const auto mid = midpoints(r);
  std::vector<double> full_flux(N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) full_flux[i] = std::exp(log_omega_b(mid[i], p.b)) / (r[i + 1] - r[i]);
  const auto width = cell_widths(r, mid);

  SturmOperator op;
  op.params = p;
  op.grid = std::make_shared<const RadialGrid>(std::vector<double>(r.begin() + 1, r.end() - 1));
  const std::size_t n = N - 2;
  op.flux.assign(full_flux.begin() + 1, full_flux.end() - 1);
  op.mass.resize(n);
  op.potential.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = r[i + 1];
    op.mass[i] = std::exp(log_omega_b(x, p.b)) * width[i + 1];
    op.potential[i] = U_of(x);
  }
  op.bc_left = full_flux.front();
  op.bc_right = full_flux.back();
  op.ground_state = false;
  return op;
}

SturmOperator assemble_ground_state(const Parameters& p, GridPtr grid, const GroundStateExtras* extras) {
  const auto& r = grid->nodes();
  const std::size_t n = r.size();
  const auto mid = midpoints(r);
  const auto width = cell_widths(r, mid);
  SturmOperator op;
  op.params = p;
  op.grid = grid;
  op.flux.resize(n - 1);
  op.mass.resize(n);
  op.potential.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double lw = log_ground_weight(mid[i], p.b);
    if (extras && !extras->log_weight_mid.empty()) lw += extras->log_weight_mid[i];
    op.flux[i] = std::exp(lw) / (r[i + 1] - r[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double lw = log_ground_weight(r[i], p.b);
    if (extras && !extras->log_weight_nodes.empty()) lw += extras->log_weight_nodes[i];
    op.mass[i] = std::exp(lw) * width[i];
    const double x2 = r[i] * r[i];
    op.potential[i] = -2.0 * p.b * (1.0 - x2) / (1.0 + x2);
    if (extras && !extras->potential.empty()) op.potential[i] += extras->potential[i];
  }
  op.ground_state = true;
  if (extras) op.ground_ratio = extras->ground_ratio;
  return op;
}

int count_above(const SturmOperator& op, double lambda) {
  const std::size_t n = op.mass.size();
  int count = 0;
  double e = op.mass[0] * (lambda - op.potential[0]) + op.bc_left;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double c = op.flux[i - 1];
      double den = c + e;
      if (den == 0.0) den = std::numeric_limits<double>::min();
      e = op.mass[i] * (lambda - op.potential[i]) + c * e / den;
      if (i + 1 == n) e += op.bc_right;
    }
    const double p = i + 1 < n ? op.flux[i] + e : e;
    if (p < 0.0) ++count;
  }
  return count;
}

double weighted_asymmetry(const SturmOperator& op) {
  // (M A)_{i,i+1} = flux_i and (M A)_{i+1,i} = flux_i, assembled from the same stored value.
  double worst = 0.0;
  for (std::size_t i = 0; i < op.flux.size(); ++i) {
    const double upper = op.flux[i];
    const double lower = op.flux[i];
    worst = std::max(worst, std::abs(upper - lower));
  }
  return worst;
}

std::vector<double> apply_operator(const SturmOperator& op, const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ku = 0.0;
    if (i > 0) ku += op.flux[i - 1] * (u[i] - u[i - 1]);
    if (i + 1 < n) ku += op.flux[i] * (u[i] - u[i + 1]);
    if (i == 0) ku += op.bc_left * u[i];
    if (i + 1 == n) ku += op.bc_right * u[i];
    out[i] = -ku / op.mass[i] + op.potential[i] * u[i];
  }
  return out;
}

double inner(const SturmOperator& op, const std::vector<double>& u, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += op.mass[i] * u[i] * v[i];
  return acc;
}

double quadratic_form(const SturmOperator& op, const std::vector<double>& u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double d = u[i + 1] - u[i];
    acc -= op.flux[i] * d * d;
  }
  acc -= op.bc_left * u.front() * u.front() + op.bc_right * u.back() * u.back();
  for (std::size_t i = 0; i < u.size(); ++i) acc += op.mass[i] * op.potential[i] * u[i] * u[i];
  return acc;
}

SpectrumResult solve_spectrum(const SturmOperator& op, int k) {
  if (k < 1 || k > 10) fail(ErrorKind::Config, "solve_spectrum: k must lie in [1, 10]");
  const std::size_t n = op.mass.size();
  SpectrumResult res;
  res.params = op.params;
  res.nodes = n;
  res.r_max = op.grid->back();

  const double top = *std::max_element(op.potential.begin(), op.potential.end());
  const double scale = std::max({std::abs(top), op.params.b, 1e-300});
  const double hi0 = top + 1e-12 * scale;
  double step = scale;
  double lo0 = top - step;
  while (count_above(op, lo0) < k) {
    step *= 2.0;
    lo0 = top - step;
    if (step > 1e300) fail(ErrorKind::Numerical, "solve_spectrum: could not bracket the spectrum");
  }

  for (int j = 0; j < k; ++j) {
    double lo = lo0, hi = hi0;
    for (int it = 0; it < 400; ++it) {
      const double m = 0.5 * (lo + hi);
      if (count_above(op, m) > j)
        lo = m;
      else
        hi = m;
      if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
    }
    res.eigenvalues.push_back(0.5 * (lo + hi));
  }

  for (int j = 0; j < k; ++j) {
    const double lam = res.eigenvalues[j];
    const double sigma = lam + 1e-13 * scale;
    std::vector<double> u(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) u[i] += 0.1 * std::sin(0.37 * static_cast<double>(i));
    double prev_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8; ++it) {
      std::vector<double> rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = op.mass[i] * u[i];
      u = shifted_solve(op, sigma, rhs);
      const double nrm = std::sqrt(inner(op, u, u));
      if (!(nrm > 0.0) || !std::isfinite(nrm)) fail(ErrorKind::Numerical, "solve_spectrum: inverse iteration broke down");
      for (double& x : u) x /= nrm;
      const auto Au = apply_operator(op, u);
      std::vector<double> rv(n);
      for (std::size_t i = 0; i < n; ++i) rv[i] = Au[i] - lam * u[i];
      const double rr = std::sqrt(inner(op, rv, rv));
      if (it >= 2 && rr >= 0.5 * prev_res) {
        prev_res = std::min(prev_res, rr);
        break;
      }
      prev_res = rr;
    }
    // fix the sign: positive near the origin
    if (u[0] < 0.0)
      for (double& x : u) x = -x;
    res.residuals.push_back(prev_res);
    res.unknowns.push_back(u);
  }
  for (double rr : res.residuals)
    if (!(rr <= 1e-9)) fail(ErrorKind::Numerical, "solve_spectrum: inverse iteration stalled, residual " + std::to_string(rr));

  const auto& r = op.grid->nodes();
  for (int j = 0; j < k; ++j) {
    std::vector<double> f = res.unknowns[j];
    if (op.ground_state)
      for (std::size_t i = 0; i < n; ++i)
        f[i] *= stationary_profiles(r[i]).psi0 * (op.ground_ratio.empty() ? 1.0 : op.ground_ratio[i]);
    res.eigenvectors.emplace_back(op.grid, std::move(f));
  }
  res.gram.assign(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) res.gram[i][j] = inner(op, res.unknowns[i], res.unknowns[j]);
  return res;
}

SpectrumResult direct_spectrum(const Parameters& p, int k, const SpectrumOptions& opt) {
  return solve_spectrum(assemble_ground_state(p, spectrum_grid(p, opt)), k);
}

std::vector<double> construction_normalize(const SturmOperator& op, SpectrumResult& res) {
  const auto& r = op.grid->nodes();
  std::vector<double> scales;
  for (std::size_t j = 0; j < res.unknowns.size(); ++j) {
    double lead = op.ground_state ? res.unknowns[j][0] : res.unknowns[j][0] / (r[0] * r[0]);
    if (!op.ground_ratio.empty()) lead *= op.ground_ratio[0];
    const double s = 1.0 / lead;
    for (double& x : res.unknowns[j]) x *= s;
    for (double& x : res.eigenvectors[j].values) x *= s;
    scales.push_back(s);
  }
  const std::size_t k = res.unknowns.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) res.gram[i][j] *= scales[i] * scales[j];
  return scales;
}

Diagnostics spectral_diagnostics(const SturmOperator& op, SpectrumResult res, int N, int trials, std::uint64_t seed,
                                 const std::vector<double>& matched_alpha) {
  const int k = static_cast<int>(res.eigenvalues.size());
  if (k < N + 2) fail(ErrorKind::Config, "spectral_diagnostics: need at least N + 2 eigenpairs");
  const double b = op.params.b;
  const double L = std::abs(std::log(b));
  const double nu2 = b / op.params.beta;
  Diagnostics d;
  construction_normalize(op, res);
  for (int j = 0; j < k; ++j) d.norms.push_back(inner(op, res.unknowns[j], res.unknowns[j]));
  d.c0_ratio = d.norms[0] * 16.0 / L;
  if (k > 1) d.c1_ratio = d.norms[1] * 16.0 / (L * L);
  for (int j = 0; j + 1 < k; ++j) d.gaps_over_2b.push_back((res.eigenvalues[j] - res.eigenvalues[j + 1]) / (2.0 * b));
  for (std::size_t j = 0; j < matched_alpha.size() && j < res.eigenvalues.size(); ++j)
    d.matched_deviation.push_back(std::abs(res.eigenvalues[j] - matched_alpha[j]) * L * L / (2.0 * b));

  // Random smooth g (Gaussian bumps in ln r), projected onto the complement of span{phi_0..phi_N}.
  const auto& r = op.grid->nodes();
  const std::size_t n = r.size();
  const double s0 = std::log(r.front()), s1 = std::log(r.back());
  const int bumps = 24;
  const double width = (s1 - s0) / bumps;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double lam_next = res.eigenvalues[N + 1];
  d.gap_worst_excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(bumps);
    for (double& x : a) x = normal(rng);
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = std::log(r[i]);
      for (int m = 0; m < bumps; ++m) {
        const double c = s0 + (m + 0.5) * width;
        g[i] += a[m] * std::exp(-0.5 * (s - c) * (s - c) / (width * width));
      }
    }
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= N; ++j) {
        const auto& phi = res.unknowns[j];
        const double coef = inner(op, g, phi) / inner(op, phi, phi);
        for (std::size_t i = 0; i < n; ++i) g[i] -= coef * phi[i];
      }
    const double rq = quadratic_form(op, g) / inner(op, g, g);
    const double excess = (rq - lam_next) / nu2;
    d.gap_worst_excess = std::max(d.gap_worst_excess, excess);
    if (excess > 1e-8) ++d.gap_violations;
    ++d.gap_trials;
  }
  return d;
}

}  // namespace ksspec
