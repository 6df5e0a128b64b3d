#pragma once

#include <cstddef>
#include <utility>

#include "ksspec/grid.hpp"
#include "ksspec/radial_core.hpp"

namespace ksspec {

// Regular solution of (A0 - b r d_r) phi = alpha phi on (0, R0], alpha = 2b(1 - n + alpha_tilde).
struct InnerSolution {
  Parameters params;
  int n = 0;
  double alpha_bar = 0.0;
  double alpha_tilde = 0.0;
  double alpha = 0.0;
  RadialGridFunction values, dvalues;  // phi and phi' on the inner grid, last node R0
  double normalization = 1.0;          // r^2 coefficient at the origin
  RadialGridFunction leading_F;
  RadialGridFunction residual_E;       // phi - F_n - 2 alpha_bar sum_j b^{j+1}(-c_{n,j} T_{j+1})
  double value_R0 = 0.0, dvalue_R0 = 0.0;  // from the integrator's dense output
};

struct InnerOptions {
  double r_min = 1e-4;
  std::size_t nodes = 2400;  // fine enough for the differenced residual check at 1e-7
  // false: keep the raw Frobenius normalization phi ~ r^2 (used inside root finding)
  bool fit_to_F = true;
};

double inner_alpha(const Parameters& p, int n, double alpha_bar);

InnerSolution solve_inner(const Parameters& p, int n, double alpha_bar, const InnerOptions& opt = {});

// F_n = sum_j c_{n,j} b^j T_j sampled on `grid` (interpolated from the table).
RadialGridFunction leading_expansion_F(const Parameters& p, int n, const KernelTable& table, GridPtr grid);
double leading_expansion_F_at(const Parameters& p, int n, const KernelTable& table, double r);

// Explicit series of the refined inner expansion, n in {0, 1}:
// first = series part of R_n, second = series part of S_n.
std::pair<double, double> refined_series(const Parameters& p, int n, double r);

int inner_zero_count(const InnerSolution& sol);

// max |(A0 - b r d_r - alpha) phi| / (|phi''| + |phi'/r| + |U phi| + |alpha phi|), with phi''
// from differencing dvalues. Interior nodes only.
double inner_ode_residual(const InnerSolution& sol);

}  // namespace ksspec
