#include "ksspec/matching.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "ksspec/error.hpp"
#include "ksspec/special_functions.hpp"

namespace ksspec {

namespace {

struct Interface {
  double phi, rdphi, q, zdq;
};

// Cheap solves for root finding: raw normalizations, few output nodes.
Interface interface_values(const Parameters& p, int n, double alpha_bar) {
  InnerOptions io;
  io.nodes = 16;
  io.fit_to_F = false;
  OuterOptions oo;
  oo.nodes = 16;
  oo.full = false;
  const InnerSolution in = solve_inner(p, n, alpha_bar, io);
  const OuterSolution out = solve_outer(p, n, alpha_bar, oo);
  return {in.value_R0, p.R0 * in.dvalue_R0, out.q_z0, p.z0 * out.dq_z0};
}

// Wronskian-type mismatch; same zeros as the log-derivative mismatch but no poles.
double cross_mismatch(const Interface& f) { return f.rdphi * f.q - 2.0 * f.phi * f.zdq; }

double bisect(const Parameters& p, int n, double lo, double hi, double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double m = 0.5 * (lo + hi);
    const double fm = cross_mismatch(interface_values(p, n, m));
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

// Series sum_{i >= i0} t_i g(i) with t_i = zeta^{2i} / ((2)_i 2^i) and optional 1/i.
template <class G>
double series(double zeta, int i0, bool over_i, G&& g) {
  const double x = 0.5 * zeta * zeta;
  double t = 1.0, acc = 0.0;
  for (int i = 0; i <= 400; ++i) {
    if (i > 0) t *= x / (i + 1.0);
    if (i < i0) continue;
    const double term = (over_i ? t / i : t) * g(i);
    acc += term;
    if (i > i0 + 2 && std::abs(term) <= 1e-17 * std::abs(acc)) break;
  }
  return acc;
}

}  // namespace

double mismatch_theta(const Parameters& p, int n, double alpha_bar) {
  const Interface f = interface_values(p, n, alpha_bar);
  if (std::abs(f.phi) < 1e-12 * std::abs(f.rdphi) || std::abs(f.q) < 1e-12 * std::abs(f.zdq))
    fail(ErrorKind::Numerical, "mismatch_theta: degenerate interface value");
  return f.rdphi / (2.0 * f.phi) - f.zdq / f.q;
}

double solve_alpha_bar(const Parameters& p, int n, const MatchOptions& opt, int* widenings) {
  if (opt.enforce_guard && p.b > 1e-4) fail(ErrorKind::Config, "solve_eigenvalue: b above the 1e-4 guard");
  const double L = std::abs(std::log(p.b));
  double C = opt.bracket_C;
  if (widenings) *widenings = 0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double w = C / (L * L);
    const int m = std::max(opt.scan_points, 3);
    std::vector<double> x(m), f(m);
    for (int i = 0; i < m; ++i) {
      x[i] = -w + 2.0 * w * i / (m - 1);
      f[i] = cross_mismatch(interface_values(p, n, x[i]));
    }
    int best = -1;
    for (int i = 0; i + 1 < m; ++i) {
      if (f[i] == 0.0) return x[i];
      if ((f[i] < 0.0) != (f[i + 1] < 0.0)) {
        const double mid = 0.5 * (x[i] + x[i + 1]);
        if (best < 0 || std::abs(mid) < std::abs(0.5 * (x[best] + x[best + 1]))) best = i;
      }
    }
    if (best >= 0) return bisect(p, n, x[best], x[best + 1], f[best], opt.tolerance);
    if (attempt == 0) {
      std::cerr << "warning: no sign change of the matching mismatch for n = " << n << ", widening the bracket\n";
      if (widenings) ++*widenings;
      C *= 2.0;
    } else {
      std::ostringstream os;
      os << "solve_eigenvalue: no sign change on the bracket, Theta endpoints " << mismatch_theta(p, n, -w) << ", "
         << mismatch_theta(p, n, w);
      fail(ErrorKind::Numerical, os.str());
    }
  }
  fail(ErrorKind::Numerical, "solve_eigenvalue: unreachable");
}

GluedFunction glue_eigenfunction(const InnerSolution& inner, const OuterSolution& outer) {
  const double b = inner.params.b;
  GluedFunction g;
  const double q0 = outer.q[0];
  if (q0 == 0.0) fail(ErrorKind::Numerical, "glue_eigenfunction: outer solution vanishes at z0");
  g.beta0 = inner.value_R0 / q0;
  std::vector<double> r = inner.values.nodes(), v = inner.values.values, dv = inner.dvalues.values;
  g.interface = r.size() - 1;
  const auto& z = outer.q.nodes();
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double x = std::sqrt(2.0 * z[i] / b);
    r.push_back(x);
    v.push_back(g.beta0 * outer.q[i]);
    dv.push_back(g.beta0 * outer.dq[i] * b * x);
  }
  const double right = g.beta0 * outer.dq[0] * b * inner.params.R0;
  g.derivative_jump = std::abs(inner.dvalue_R0 - right) / std::abs(inner.dvalue_R0);
  auto grid = std::make_shared<const RadialGrid>(std::move(r));
  g.phi = RadialGridFunction(grid, std::move(v));
  g.dphi = RadialGridFunction(grid, std::move(dv));
  return g;
}

MatchedEigenpair solve_eigenvalue(const Parameters& p, int n, const MatchOptions& opt) {
  MatchedEigenpair e;
  e.params = p;
  e.n = n;
  e.alpha_bar = solve_alpha_bar(p, n, opt, &e.bracket_widenings);
  const double lb = std::log(p.b);
  e.alpha_tilde = 1.0 / lb + e.alpha_bar;
  e.alpha = 2.0 * p.b * (1.0 - n + e.alpha_tilde);
  e.lambda = e.alpha / (p.nu * p.nu);
  e.theta = 1.0 - n + e.alpha_tilde;
  e.inner = solve_inner(p, n, e.alpha_bar);
  e.outer = solve_outer(p, n, e.alpha_bar);
  e.glued = glue_eigenfunction(e.inner, e.outer);
  e.beta0 = e.glued.beta0;
  e.mismatch_at_root = e.inner.dvalue_R0 * p.R0 / (2.0 * e.inner.value_R0) - p.z0 * e.outer.dq_z0 / e.outer.q_z0;
  if (opt.estimate_b_derivative) {
    const double h = 0.05;
    MatchOptions sub = opt;
    sub.estimate_b_derivative = false;
    sub.enforce_guard = false;
    const Parameters pp = Parameters::from_b(p.b * std::exp(h), p.zeta0, p.n_max, p.beta);
    const Parameters pm = Parameters::from_b(p.b * std::exp(-h), p.zeta0, p.n_max, p.beta);
    const double ap = 1.0 / std::log(pp.b) + solve_alpha_bar(pp, n, sub);
    const double am = 1.0 / std::log(pm.b) + solve_alpha_bar(pm, n, sub);
    e.b_dalpha_tilde = (ap - am) / (2.0 * h);
  }
  return e;
}

std::vector<double> MatchedEigenpair::zeta_nodes() const {
  std::vector<double> z = glued.phi.nodes();
  for (double& x : z) x *= params.nu;
  return z;
}

double refinement_constant(int n) { return std::log(2.0) - kEulerGamma - n; }

double predicted_eigenvalue(const Parameters& p, int n, int order) {
  const double lb = std::log(p.b);
  double a = 1.0 - n + 1.0 / lb;
  if (order == 2) {
    if (n > 1) fail(ErrorKind::Config, "predicted_eigenvalue: order 2 only for n = 0, 1");
    a += refinement_constant(n) / (lb * lb);
  } else if (order != 1) {
    fail(ErrorKind::Config, "predicted_eigenvalue: order must be 1 or 2");
  }
  return 2.0 * p.b * a;
}

double predicted_lambda_b_form(double beta, double nu, int n) {
  const double lb = std::log(beta) + 2.0 * std::log(nu);
  return 2.0 * beta * (1.0 - n + 1.0 / lb + refinement_constant(n) / (lb * lb));
}

double predicted_lambda_nu_form(double beta, double nu, int n) {
  const double ln = std::log(nu);
  return 2.0 * beta * (1.0 - n + 1.0 / (2.0 * ln) + (refinement_constant(n) - std::log(beta)) / (4.0 * ln * ln));
}

double H_n(int n, double zeta, const KernelTable& t) {
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) acc += cnj(n, i) * t.dhat[i] * std::pow(zeta, 2.0 * (i - 1));
  return acc;
}

double zdH_n(int n, double zeta, const KernelTable& t) {
  double acc = 0.0;
  for (int i = 2; i <= n; ++i) acc += cnj(n, i) * t.dhat[i] * 2.0 * (i - 1) * std::pow(zeta, 2.0 * (i - 1));
  return acc;
}

double K_n(int n, double zeta, const KernelTable& t) {
  const double lz = std::log(zeta);
  double acc = 1.0 / (zeta * zeta);
  for (int i = 1; i <= n; ++i) acc += cnj(n, i) * std::pow(zeta, 2.0 * (i - 1)) * (t.dhat[i] * lz + t.d[i]);
  return acc;
}

double zdK_n(int n, double zeta, const KernelTable& t) {
  const double lz = std::log(zeta);
  double acc = -2.0 / (zeta * zeta);
  for (int i = 1; i <= n; ++i)
    acc += cnj(n, i) * std::pow(zeta, 2.0 * (i - 1)) * (2.0 * (i - 1) * (t.dhat[i] * lz + t.d[i]) + t.dhat[i]);
  return acc;
}

double J0(double zeta) {
  const double lz = std::log(zeta);
  return 2.0 * lz - 1.0 + series(zeta, 1, false, [&](int i) { return 2.0 * lz - digamma(i + 2.0) - kEulerGamma; });
}

double zdJ0(double zeta) {
  const double lz = std::log(zeta);
  return 2.0 + series(zeta, 1, false, [&](int i) { return 2.0 * i * (2.0 * lz - digamma(i + 2.0) - kEulerGamma) + 2.0; });
}

double J1(double zeta) {
  const double lz = std::log(zeta), l2 = std::log(2.0);
  return 2.0 * lz - refinement_constant(1) -
         series(zeta, 1, true, [&](int i) { return 2.0 * lz - l2 - 1.0 / i - digamma(i + 2.0); });
}

double zdJ1(double zeta) {
  const double lz = std::log(zeta), l2 = std::log(2.0);
  return 2.0 - series(zeta, 1, true, [&](int i) { return 2.0 * i * (2.0 * lz - l2 - 1.0 / i - digamma(i + 2.0)) + 2.0; });
}

double G0_tilde(double zeta) {
  return series(zeta, 0, false, [](int) { return 1.0; });
}

double zdG0_tilde(double zeta) {
  return series(zeta, 1, false, [](int i) { return 2.0 * i; });
}

}  // namespace ksspec
