#include "ksspec/nonradial.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "ksspec/error.hpp"

namespace ksspec {

namespace {

constexpr double kPi = std::numbers::pi;

double angular(int k) { return k == 0 ? 2.0 * kPi : kPi; }

double Us(double r, double s) {
  const double d = s * s + r * r;
  return 8.0 * s * s / (d * d);
}
double dUs(double r, double s) {
  const double d = s * s + r * r;
  return -32.0 * s * s * r / (d * d * d);
}
// y.grad Phi_{U_s} = r d_r Phi_{U_s}
double y_grad_phiU(double r, double s) { return -4.0 * r * r / (s * s + r * r); }

double integrate_r(const RadialGrid& g, const std::vector<double>& f) {
  std::vector<double> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = f[i] * g[i];
  return g.integrate(h);
}

void check_same_support(const HarmonicField& u, const HarmonicField& v) {
  if (u.grid != v.grid || u.parts.size() != v.parts.size() || u.b != v.b || u.s != v.s)
    fail(ErrorKind::Config, "nonradial: fields live on different grids or harmonics");
  for (std::size_t j = 0; j < u.parts.size(); ++j)
    if (u.parts[j].k != v.parts[j].k || u.parts[j].i != v.parts[j].i)
      fail(ErrorKind::Config, "nonradial: fields live on different grids or harmonics");
}

std::vector<double> sqrt_rho(const RadialGrid& g, double b) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::exp(-0.25 * b * g[i] * g[i]);
  return w;
}

// Phi~ and its derivative for one part.
PoissonProfile truncated_part(const RadialGrid& g, double b, const HarmonicComponent& c) {
  const auto sr = sqrt_rho(g, b);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = c.a[i] * sr[i];
  PoissonProfile p = poisson_harmonic(c.k, g, f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phi = p.phi[i];
    p.phi[i] = phi / sr[i];
    p.dphi[i] = (p.dphi[i] + 0.5 * b * g[i] * phi) / sr[i];
  }
  return p;
}

}  // namespace

void HarmonicField::validate() const {
  if (!grid) fail(ErrorKind::Config, "HarmonicField: no grid");
  if (!(b >= 0.0) || !(s > 0.0)) fail(ErrorKind::Config, "HarmonicField: b must be >= 0 and s > 0");
  const RadialGrid& g = *grid;
  for (const auto& c : parts) {
    if (c.k < 1) fail(ErrorKind::Config, "HarmonicField: radial component (k = 0) not allowed");
    if (c.i != 1 && c.i != 2) fail(ErrorKind::Config, "HarmonicField: i must be 1 or 2");
    if (c.a.size() != g.size() || c.da.size() != g.size()) fail(ErrorKind::Config, "HarmonicField: size mismatch");
    double peak = 0.0, last = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g[i];
      const double v = (c.da[i] * c.da[i] + c.k * c.k * c.a[i] * c.a[i] / (r * r)) * std::exp(-0.5 * b * r * r) /
                       Us(r, s) * r;
      peak = std::max(peak, v);
      if (i + 1 == g.size()) last = v;
    }
    if (last > 1e-14 * peak) fail(ErrorKind::Config, "HarmonicField: profile does not decay on the grid");
  }
}

GridPtr nonradial_grid(double b, std::size_t n) {
  if (!(b > 0.0 && b <= 1e-2)) fail(ErrorKind::Config, "nonradial_grid: b must lie in (0, 1e-2]");
  return make_grid(1e-4, std::sqrt(140.0 / b), n, 0.5 / std::sqrt(b));
}

PoissonProfile poisson_harmonic(int k, const RadialGrid& g, const std::vector<double>& u) {
  if (k < 0) fail(ErrorKind::Config, "poisson_harmonic: k must be nonnegative");
  if (u.size() != g.size()) fail(ErrorKind::Config, "poisson_harmonic: size mismatch");
  const std::size_t n = g.size();
  const double r0 = g.front();
  std::vector<double> fin(n), ftail(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i];
    if (k == 0) {
      fin[i] = u[i] * r;
      ftail[i] = u[i] * std::log(r) * r;
    } else {
      fin[i] = u[i] * std::pow(r, 1.0 + k);
      ftail[i] = u[i] * std::pow(r, 1.0 - k);
    }
  }
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(ftail[i]) * g[i]);
  if (std::abs(ftail.back()) * g.back() > 1e-8 * peak)
    fail(ErrorKind::Numerical, "poisson_harmonic: tail integral does not converge on the grid");
  auto I = g.cumulative(fin);
  const auto T = g.tail_cumulative(ftail);
  // [0, r0] from u ~ c r^k
  const double head = u[0] * std::pow(r0, k + 2.0) / (2.0 * k + 2.0);
  for (double& x : I) x += head;
  PoissonProfile p;
  p.phi.resize(n);
  p.dphi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i];
    if (k == 0) {
      p.phi[i] = -std::log(r) * I[i] - T[i];
      p.dphi[i] = -I[i] / r;
    } else {
      const double rk = std::pow(r, k);
      p.phi[i] = (rk * T[i] + I[i] / rk) / (2.0 * k);
      p.dphi[i] = (rk * T[i] - I[i] / rk) / (2.0 * r);
    }
  }
  return p;
}

double poisson_residual(int k, const RadialGrid& g, const std::vector<double>& u, const PoissonProfile& p) {
  const auto d2 = g.derivative(p.dphi);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 2; i + 2 < g.size(); ++i) {
    const double r = g[i], t1 = d2[i], t2 = p.dphi[i] / r, t3 = k * k * p.phi[i] / (r * r);
    worst = std::max(worst, std::abs(t1 + t2 - t3 + u[i]));
    scale = std::max({scale, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(u[i])});
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

HarmonicField truncated_poisson(const HarmonicField& u) {
  HarmonicField out = u;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    PoissonProfile p = truncated_part(*u.grid, u.b, u.parts[j]);
    out.parts[j].a = std::move(p.phi);
    out.parts[j].da = std::move(p.dphi);
  }
  return out;
}

double truncated_identity_residual(const HarmonicField& u, const HarmonicField& phi) {
  check_same_support(u, phi);
  const RadialGrid& g = *u.grid;
  const double b = u.b;
  const auto sr = sqrt_rho(g, b);
  double worst = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    const auto& c = phi.parts[j];
    const auto& a = u.parts[j].a;
    const auto d2 = g.derivative(c.da);
    const int k = c.k;
    for (std::size_t i = 2; i + 2 < g.size(); ++i) {
      const double r = g[i];
      // Delta(sqrt(rho)) = (b^2 r^2 / 4 - b) sqrt(rho), hence the minus sign on b^2 r^2 / 4
      const double t[] = {d2[i], c.da[i] / r, -k * k * c.a[i] / (r * r), a[i], -b * r * c.da[i],
                          -(b - 0.25 * b * b * r * r) * c.a[i]};
      double sum = 0.0;
      for (double x : t) {
        sum += x;
        scale = std::max(scale, std::abs(x) * sr[i]);
      }
      worst = std::max(worst, std::abs(sum) * sr[i]);
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

HarmonicField M_apply(const HarmonicField& u, bool truncated) {
  const RadialGrid& g = *u.grid;
  HarmonicField out = u;
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    const auto& c = u.parts[j];
    const PoissonProfile p = truncated ? truncated_part(g, u.b, c) : poisson_harmonic(c.k, g, c.a);
    auto& w = out.parts[j];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double U = Us(g[i], u.s), dU = dUs(g[i], u.s);
      w.a[i] = c.a[i] / U - p.phi[i];
      w.da[i] = c.da[i] / U - c.a[i] * dU / (U * U) - p.dphi[i];
    }
  }
  return out;
}

double mixed_inner_product(const HarmonicField& u, const HarmonicField& v) {
  check_same_support(u, v);
  const RadialGrid& g = *u.grid;
  const HarmonicField w = M_apply(v, true);
  double acc = 0.0;
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < u.parts.size(); ++j) {
    for (std::size_t i = 0; i < g.size(); ++i)
      f[i] = u.parts[j].a[i] * w.parts[j].a[i] * std::exp(-0.5 * u.b * g[i] * g[i]);
    acc += angular(u.parts[j].k) * integrate_r(g, f);
  }
  return u.s * u.s * acc;
}

double gradient_norm(const HarmonicField& u) {
  const RadialGrid& g = *u.grid;
  double acc = 0.0;
  std::vector<double> f(g.size());
  for (const auto& c : u.parts) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g[i];
      f[i] = (c.da[i] * c.da[i] + c.k * c.k * c.a[i] * c.a[i] / (r * r)) * std::exp(-0.5 * u.b * r * r) / Us(r, u.s);
    }
    acc += angular(c.k) * integrate_r(g, f);
  }
  return u.s * u.s * acc;
}

double l2_omega_norm(const HarmonicField& u) {
  const RadialGrid& g = *u.grid;
  double acc = 0.0;
  std::vector<double> f(g.size());
  for (const auto& c : u.parts) {
    for (std::size_t i = 0; i < g.size(); ++i)
      f[i] = c.a[i] * c.a[i] * std::exp(-0.5 * u.b * g[i] * g[i]) / Us(g[i], u.s);
    acc += angular(c.k) * integrate_r(g, f);
  }
  return u.s * u.s * acc;
}

QuadraticForms quadratic_forms(const HarmonicField& u, bool direct) {
  const RadialGrid& g = *u.grid;
  const std::size_t n = g.size();
  const double b = u.b, s = u.s, pre = s * s;
  QuadraticForms q;
  q.full_direct = std::numeric_limits<double>::quiet_NaN();
  double full_direct = 0.0;
  std::vector<double> t[12];
  for (auto& v : t) v.resize(n);
  for (const auto& c : u.parts) {
    const PoissonProfile p = truncated_part(g, b, c);
    const double kk = double(c.k) * c.k, ang = angular(c.k) * pre;
    std::vector<double> w(n), dw(n), flux(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = g[i], r2 = r * r, U = Us(r, s), dU = dUs(r, s), rho = std::exp(-0.5 * b * r2);
      const double a = c.a[i], da = c.da[i], phi = p.phi[i], dphi = p.dphi[i];
      const double q0 = a / U, dq0 = da / U - a * dU / (U * U);
      w[i] = q0 - phi;
      dw[i] = dq0 - dphi;
      flux[i] = r * U * dw[i];
      const double yPU = y_grad_phiU(r, s);
      t[0][i] = (da * da + kk * a * a / r2) * rho / U;
      t[1][i] = -a * a * rho;
      t[2][i] = -2.0 * U * (dq0 * dphi + kk * q0 * phi / r2) * rho;
      t[3][i] = U * (dphi * dphi + kk * phi * phi / r2) * rho;
      t[4][i] = a * w[i] * rho;
      t[5][i] = -b * yPU * a * phi * rho + b * U * r * dphi * w[i] * rho;
      t[6][i] = (2.0 * b * U * r * dphi + (b + 0.25 * b * b * r2) * U * phi) * w[i] * rho;
      t[7][i] = U * (dw[i] * dw[i] + kk * w[i] * w[i] / r2) * rho + b * yPU * a * w[i] * rho +
                b * U * r * dphi * w[i] * rho;
    }
    double F[4];
    for (int m = 0; m < 4; ++m) F[m] = ang * integrate_r(g, t[m]);
    const double inner = ang * integrate_r(g, t[4]);
    const double G = ang * integrate_r(g, t[5]);
    const double Gp = ang * integrate_r(g, t[6]);
    const double ident = ang * integrate_r(g, t[7]) + 2.0 * b * inner;
    for (int m = 0; m < 4; ++m) q.F_terms[m] += F[m];
    const double Fk = F[0] + F[1] + F[2] + F[3];
    q.F += Fk;
    q.G += G;
    q.G_literal += Gp;
    q.inner_star += inner;
    q.full_identity += ident;
    q.grad_by_part.push_back(F[0]);
    q.full_by_part.push_back(Fk + G + 2.0 * b * inner);
    if (direct) {
      // L~u = (1/r)(r U w')' - U k^2 w / r^2 - b (r u' + 2u)
      const auto dflux = g.derivative(flux);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g[i], U = Us(r, s);
        const double L = dflux[i] / r - U * kk * w[i] / (r * r) - b * (r * c.da[i] + 2.0 * c.a[i]);
        t[8][i] = -L * w[i] * std::exp(-0.5 * b * r * r);
      }
      full_direct += ang * integrate_r(g, t[8]);
    }
  }
  q.grad_norm = q.F_terms[0];
  q.full = q.F + q.G + 2.0 * b * q.inner_star;
  if (direct) q.full_direct = full_direct;
  return q;
}

std::array<double, 2> translation_projections(const HarmonicField& u, bool with_sqrt_rho) {
  const RadialGrid& g = *u.grid;
  std::array<double, 2> out{0.0, 0.0};
  std::vector<double> f(g.size());
  for (const auto& c : u.parts) {
    if (c.k != 1) continue;
    for (std::size_t i = 0; i < g.size(); ++i)
      f[i] = c.a[i] * dUs(g[i], u.s) * (with_sqrt_rho ? std::exp(-0.25 * u.b * g[i] * g[i]) : 1.0);
    out[c.i - 1] += kPi * integrate_r(g, f);
  }
  return out;
}

void project_translations(HarmonicField& u, bool with_sqrt_rho) {
  const RadialGrid& g = *u.grid;
  const std::size_t n = g.size();
  std::vector<double> m(n), dm(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g[i], w = with_sqrt_rho ? std::exp(-0.25 * u.b * r * r) : 1.0;
    const double d = u.s * u.s + r * r;
    const double d2U = -32.0 * u.s * u.s * (d - 6.0 * r * r) / (d * d * d * d);
    m[i] = dUs(r, u.s) * w;
    dm[i] = (d2U - 0.5 * (with_sqrt_rho ? u.b : 0.0) * r * dUs(r, u.s)) * w;
    f[i] = m[i] * m[i];
  }
  const double mm = integrate_r(g, f);
  for (auto& c : u.parts) {
    if (c.k != 1) continue;
    for (std::size_t i = 0; i < n; ++i) f[i] = c.a[i] * m[i];
    const double coef = integrate_r(g, f) / mm;
    for (std::size_t i = 0; i < n; ++i) {
      c.a[i] -= coef * m[i];
      c.da[i] -= coef * dm[i];
    }
  }
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

HarmonicField random_field(double b, GridPtr grid, int K, std::mt19937_64& rng, double L_max) {
  if (K < 1 || K > 6) fail(ErrorKind::Config, "random_field: K must lie in [1, 6]");
  HarmonicField u;
  u.b = b;
  u.grid = grid;
  if (L_max <= 0.0) L_max = 2.0 / std::sqrt(b);
  L_max = std::max(L_max, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const RadialGrid& g = *grid;
  constexpr int knots = 10;
  for (int k = 1; k <= K; ++k) {
    for (int i = 1; i <= 2; ++i) {
      const double L = std::exp(std::log(L_max) * unif(rng));
      const double X = std::log1p(g.back()), h = X / (knots - 1);
      std::vector<double> coef(knots);
      for (double& x : coef) x = normal(rng);
      const boost::math::interpolators::cardinal_cubic_b_spline<double> S(coef.data(), coef.size(), 0.0, h);
      HarmonicComponent c;
      c.k = k;
      c.i = i;
      c.a.resize(g.size());
      c.da.resize(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = g[j], x = std::log1p(r);
        const double xc = std::min(x, X);
        const double sv = S(xc), ds = S.prime(xc) / (1.0 + r);
        const double damp = std::exp(-r / L), q = r / (1.0 + r);
        const double origin = std::pow(q, k), dorigin = k * std::pow(q, k - 1) / ((1.0 + r) * (1.0 + r));
        c.a[j] = sv * damp * origin;
        c.da[j] = ds * damp * origin - sv * damp * origin / L + sv * damp * dorigin;
      }
      u.parts.push_back(std::move(c));
    }
  }
  return u;
}

HarmonicField translation_mode(double b, GridPtr grid, bool with_sqrt_rho, double s) {
  HarmonicField u;
  u.b = b;
  u.s = s;
  u.grid = grid;
  const RadialGrid& g = *grid;
  HarmonicComponent c;
  c.a.resize(g.size());
  c.da.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i], w = with_sqrt_rho ? std::exp(-0.25 * b * r * r) : 1.0;
    const double d = s * s + r * r;
    const double d2U = -32.0 * s * s * (d - 6.0 * r * r) / (d * d * d * d);
    c.a[i] = dUs(r, s) * w;
    c.da[i] = (d2U - 0.5 * (with_sqrt_rho ? b : 0.0) * r * dUs(r, s)) * w;
  }
  u.parts.push_back(std::move(c));
  return u;
}

HarmonicField bump_field(double b, GridPtr grid, int k, double R) {
  HarmonicField u;
  u.b = b;
  u.grid = grid;
  const RadialGrid& g = *grid;
  HarmonicComponent c;
  c.k = k;
  c.a.assign(g.size(), 0.0);
  c.da.assign(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = (g[i] - 1.5 * R) / (0.5 * R);  // (-1, 1) on (R, 2R)
    if (std::abs(x) >= 1.0) continue;
    const double e = std::exp(-1.0 / (1.0 - x * x));
    c.a[i] = e;
    c.da[i] = e * (-2.0 * x / ((1.0 - x * x) * (1.0 - x * x))) / (0.5 * R);
  }
  u.parts.push_back(std::move(c));
  return u;
}

HarmonicField to_zeta_form(const HarmonicField& u, double nu) {
  if (u.s != 1.0) fail(ErrorKind::Config, "to_zeta_form: field is not in the y-variable form");
  HarmonicField z = u;
  std::vector<double> r = u.grid->nodes();
  for (double& x : r) x *= nu;
  z.grid = std::make_shared<const RadialGrid>(std::move(r));
  z.s = nu;
  z.b = u.b / (nu * nu);
  for (auto& c : z.parts)
    for (double& d : c.da) d /= nu;
  return z;
}

CoercivityReport coercivity_scan(double b, int K, int trials, std::uint64_t seed, std::size_t nodes) {
  if (K < 1 || K > 6) fail(ErrorKind::Config, "coercivity_scan: K must lie in [1, 6]");
  if (!(b > 0.0 && b <= 1e-2)) fail(ErrorKind::Config, "coercivity_scan: b must lie in (0, 1e-2]");
  if (trials < 1) fail(ErrorKind::Config, "coercivity_scan: need at least one trial");
  const auto t0 = std::chrono::steady_clock::now();
  CoercivityReport rep;
  rep.b = b;
  rep.K = K;
  rep.trials = trials;
  rep.seed = seed;
  rep.min_quotient = std::numeric_limits<double>::infinity();
  rep.max_quotient = -std::numeric_limits<double>::infinity();
  rep.min_inner_ratio = std::numeric_limits<double>::infinity();
  rep.min_quotient_by_K.assign(K, std::numeric_limits<double>::infinity());
  auto grid = nonradial_grid(b, nodes);
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    HarmonicField u = random_field(b, grid, K, rng);
    project_translations(u, true);
    u.validate();
    const QuadraticForms q = quadratic_forms(u, false);
    const double Q = q.full / q.grad_norm;
    sum += Q;
    if (Q < rep.min_quotient) {
      rep.min_quotient = Q;
      rep.argmin = t;
    }
    rep.max_quotient = std::max(rep.max_quotient, Q);
    double fk = 0.0, gk = 0.0;
    for (std::size_t j = 0; j < u.parts.size(); ++j) {
      fk += q.full_by_part[j];
      gk += q.grad_by_part[j];
      if (j % 2 == 1) {
        const int k = u.parts[j].k;
        rep.min_quotient_by_K[k - 1] = std::min(rep.min_quotient_by_K[k - 1], fk / gk);
      }
    }
    const double b4 = std::pow(b, 0.25);
    rep.max_G_constant = std::max(rep.max_G_constant, std::abs(q.G) / (b4 * q.grad_norm));
    rep.max_G_literal_constant = std::max(rep.max_G_literal_constant, std::abs(q.G_literal) / (b4 * q.grad_norm));
    rep.min_inner_ratio = std::min(rep.min_inner_ratio, q.inner_star / l2_omega_norm(u));
    rep.max_identity_mismatch = std::max(rep.max_identity_mismatch, std::abs(q.full - q.full_identity) / std::abs(q.full));
  }
  rep.mean_quotient = sum / trials;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<InequalityCheck> inequality_ratios(const HarmonicField& u) {
  const RadialGrid& g = *u.grid;
  const std::size_t n = g.size();
  const double b = u.b;
  // radial moments: A[m] = int u^2 r^m rho, B[m] = int |grad u|^2 r^m rho, and the same without rho
  auto moment = [&](bool grad, double m, bool gauss) {
    double acc = 0.0;
    std::vector<double> f(n);
    for (const auto& c : u.parts) {
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g[i];
        const double v = grad ? c.da[i] * c.da[i] + c.k * c.k * c.a[i] * c.a[i] / (r * r) : c.a[i] * c.a[i];
        f[i] = v * std::pow(r, m) * (gauss ? std::exp(-0.5 * b * r * r) : 1.0);
      }
      acc += angular(c.k) * integrate_r(g, f);
    }
    return acc;
  };
  std::vector<InequalityCheck> out;
  for (int k = 0; k <= 1; ++k) {
    const double lhs = b * (moment(false, 2.0 * k, true) + b * moment(false, 2.0 * k + 2.0, true));
    out.push_back({"genpoincare_k" + std::to_string(k), false, lhs / moment(true, 2.0 * k, true)});
  }
  const double h4 = moment(true, 0.0, true) + moment(true, 4.0, true);
  out.push_back({"hardyrho", false, b * b * (moment(false, 2.0, true) + moment(false, 6.0, true)) / h4});
  out.push_back({"hardyL2rho", false, (moment(false, 0.0, true) + moment(false, 2.0, true)) / h4});
  for (double alpha : {0.0, 0.5, 0.75, 1.5, 2.0}) {
    const double lhs = std::pow(b, alpha) * (moment(false, 0.0, true) + moment(false, 2.0 + 2.0 * alpha, true));
    std::ostringstream name;
    name << "generalisedhardy_alpha" << alpha;
    out.push_back({name.str(), false, lhs / h4});
  }
  out.push_back({"hardy_b0", false,
                 (moment(false, 0.0, false) + moment(false, 2.0, false)) /
                     (moment(true, 0.0, false) + moment(true, 4.0, false))});
  // b = 0 statements with the untruncated field
  HarmonicField u0 = u;
  u0.b = 0.0;
  u0.s = 1.0;
  {
    const HarmonicField w = M_apply(u0, false);
    double num = 0.0;
    std::vector<double> f(n);
    for (const auto& c : w.parts) {
      for (std::size_t i = 0; i < n; ++i) f[i] = Us(g[i], 1.0) * c.a[i] * c.a[i];
      num += angular(c.k) * integrate_r(g, f);
    }
    out.push_back({"contM", false, num / l2_omega_norm(u0)});
  }
  {
    HarmonicField p = u0;
    project_translations(p, false);
    const HarmonicField w = M_apply(p, false);
    double num = 0.0;
    std::vector<double> f(n);
    for (const auto& c : w.parts) {
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g[i];
        f[i] = Us(r, 1.0) * (c.da[i] * c.da[i] + c.k * c.k * c.a[i] * c.a[i] / (r * r));
      }
      num += angular(c.k) * integrate_r(g, f);
    }
    out.push_back({"coercivite_H1", true, num / gradient_norm(p)});
  }
  {
    HarmonicField p = u;
    project_translations(p, true);
    out.push_back({"coercivite_L2", true, mixed_inner_product(p, p) / l2_omega_norm(p)});
  }
  return out;
}

std::vector<InequalityCheck> functional_inequality_checks(double b, int samples, std::uint64_t seed,
                                                          std::size_t nodes) {
  if (samples < 1) fail(ErrorKind::Config, "functional_inequality_checks: need at least one sample");
  auto grid = nonradial_grid(b, nodes);
  std::vector<InequalityCheck> worst;
  for (int t = 0; t < samples; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    // L <= 10 keeps the b = 0 weights integrable on the grid
    const HarmonicField u = random_field(b, grid, 4, rng, 10.0);
    const auto r = inequality_ratios(u);
    if (worst.empty()) {
      worst = r;
      continue;
    }
    for (std::size_t j = 0; j < r.size(); ++j)
      worst[j].value = r[j].lower ? std::min(worst[j].value, r[j].value) : std::max(worst[j].value, r[j].value);
  }
  return worst;
}

}  // namespace ksspec
