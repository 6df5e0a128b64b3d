#pragma once

#include <vector>

#include "ksspec/grid.hpp"
#include "ksspec/inner_solution.hpp"
#include "ksspec/outer_solution.hpp"
#include "ksspec/radial_core.hpp"

namespace ksspec {

// Logarithmic-derivative mismatch at the interface r = R0 (z = z0):
//   (r d_r phi_in)(R0) / (2 phi_in(R0)) - (z d_z q)(z0) / q(z0).
double mismatch_theta(const Parameters& p, int n, double alpha_bar);

struct GluedFunction {
  RadialGridFunction phi, dphi;  // r-variable, on (r_min, r(z_max)]
  std::size_t interface = 0;     // index of R0 in phi
  double beta0 = 0.0;
  double derivative_jump = 0.0;  // |phi'(R0-) - phi'(R0+)| / |phi'(R0-)|
};

GluedFunction glue_eigenfunction(const InnerSolution& inner, const OuterSolution& outer);

struct MatchOptions {
  double bracket_C = 50.0;  // root bracket +-C / |ln b|^2
  int scan_points = 41;
  double tolerance = 1e-12;
  bool estimate_b_derivative = true;
  bool enforce_guard = true;  // b <= 1e-4
};

struct MatchedEigenpair {
  Parameters params;
  int n = 0;
  double alpha_bar = 0.0;
  double alpha_tilde = 0.0;
  double alpha = 0.0;   // r-variable eigenvalue 2b(1 - n + alpha_tilde)
  double lambda = 0.0;  // zeta-variable eigenvalue alpha / nu^2
  double theta = 0.0;
  double beta0 = 0.0;
  double mismatch_at_root = 0.0;
  double b_dalpha_tilde = 0.0;  // b d_b alpha_tilde by centered differences (0 if not estimated)
  int bracket_widenings = 0;
  InnerSolution inner;
  OuterSolution outer;
  GluedFunction glued;
  std::vector<double> zeta_nodes() const;  // zeta = nu r for the nodes of glued.phi
};

double solve_alpha_bar(const Parameters& p, int n, const MatchOptions& opt = {}, int* widenings = nullptr);
MatchedEigenpair solve_eigenvalue(const Parameters& p, int n, const MatchOptions& opt = {});

// Closed-form laws. order 1: 2b(1 - n + 1/ln b); order 2 adds 2b e_n / |ln b|^2 (n <= 1).
double refinement_constant(int n);  // e_n = ln 2 - gamma - n
double predicted_eigenvalue(const Parameters& p, int n, int order);
// zeta-variable forms of the same law: with ln b and with ln nu, ln beta split out.
double predicted_lambda_b_form(double beta, double nu, int n);
double predicted_lambda_nu_form(double beta, double nu, int n);

// Matching coefficient functions of zeta0 (tail constants from `table`).
double H_n(int n, double zeta, const KernelTable& table);
double K_n(int n, double zeta, const KernelTable& table);
double zdH_n(int n, double zeta, const KernelTable& table);  // zeta d_zeta H_n
double zdK_n(int n, double zeta, const KernelTable& table);
double J0(double zeta);
double J1(double zeta);
double G0_tilde(double zeta);
double zdJ0(double zeta);
double zdJ1(double zeta);
double zdG0_tilde(double zeta);

}  // namespace ksspec
