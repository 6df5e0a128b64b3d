#pragma once

#include <functional>
#include <vector>

#include "ksspec/direct_spectrum.hpp"
#include "ksspec/grid.hpp"
#include "ksspec/ode.hpp"
#include "ksspec/radial_core.hpp"

namespace ksspec {

// Perturbed operator A^zeta + (1/zeta) d_zeta(P .), stated in zeta; P(zeta) must vanish like zeta^2 at 0.
struct PerturbationSpec {
  double nu = 0.0, nu_tilde = 0.0, beta = 0.5;
  std::function<double(double)> P, dP;  // P(zeta) and dP/dzeta
  // Sampled on a zeta grid for reporting.
  RadialGridFunction P_grid;
  RadialGridFunction log_weight_ratio;  // ln(omega_bar / omega_nu) = int_0^zeta P(s)/s ds
  RadialGridFunction weight_bar;        // omega_bar_nu
  // max (|P| + |zeta P'|) |ln nu| (nu^2 + zeta^2)^2 / (nu^2 zeta^2) on the grid, and the same with |P| alone.
  double admissibility_M = 0.0;
  double admissibility_M_P = 0.0;
};

inline constexpr double kAdmissibilityLimit = 20.0;

// Wraps an arbitrary P; fails with Invariant if admissibility_M exceeds `limit`.
PerturbationSpec make_perturbation(double nu, double beta, std::function<double(double)> P,
                                   std::function<double(double)> dP, double limit = kAdmissibilityLimit);
// P = (Q_nu_tilde - Q_nu) / 2 = 2 zeta^2 (nu^2 - nu_tilde^2) / ((zeta^2 + nu^2)(zeta^2 + nu_tilde^2)).
PerturbationSpec default_potential(double nu, double nu_tilde, double beta = 0.5, double limit = kAdmissibilityLimit);

// int_0^x P(s)/s ds at increasing points x (zeta units), the first piece from P ~ c s^2.
std::vector<double> log_weight_integral(const std::function<double(double)>& P, const std::vector<double>& x);

// Positive ratio h = psi0_bar / psi0 of the perturbed b = 0 zero mode, (h, r h') at increasing r.
std::vector<State2> perturbed_ground_ratio(const Parameters& p, const PerturbationSpec& spec,
                                           const std::vector<double>& r);

// g-form assembly on the default spectrum grid with f = psi0 h g: weight omega_bar (psi0 h)^2,
// potential -b r (psi0 h)'/(psi0 h). Equivalent to adding P_r'/r + 2P(1 - r^2)/(r^2(1 + r^2)) to V_b.
SturmOperator build_perturbed(const Parameters& p, const PerturbationSpec& spec, const SpectrumOptions& opt = {});

struct StabilityReport {
  Parameters params;
  int N = 0;
  std::vector<double> lambda, lambda_bar;   // zeta units
  std::vector<double> scaled_eigenvalue;    // |lambda_bar - lambda| |ln nu|^2 / (2 beta)
  std::vector<double> eigenfunction_distance;  // relative L^2(omega_nu / zeta) distance
  std::vector<double> scaled_eigenfunction;    // distance * sqrt|ln nu|
  double min_gap_bar = 0.0;  // smallest lambda_bar_n - lambda_bar_{n+1} over the computed modes
  double max_asymmetry = 0.0;
};

StabilityReport stability_report(const Parameters& p, const PerturbationSpec& spec, int N,
                                 const SpectrumOptions& opt = {});

}  // namespace ksspec
