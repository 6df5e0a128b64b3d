#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ksspec/grid.hpp"

namespace ksspec {

// u(y) = sum over parts of a(r) Y^{(k,i)}, Y = cos(k theta) (i = 1) or sin(k theta) (i = 2).
struct HarmonicComponent {
  int k = 1;
  int i = 1;
  std::vector<double> a, da;  // profile and its r-derivative on the field grid
};

// Weights rho = e^{-b r^2/2}, U_s = 8 s^2/(s^2 + r^2)^2; every form carries the prefactor s^2.
// s = 1 is the y-variable form; s = nu with b = beta is the zeta-variable form.
struct HarmonicField {
  double b = 0.0;
  double s = 1.0;
  GridPtr grid;
  std::vector<HarmonicComponent> parts;
  // k >= 1, i in {1, 2}, sizes, and decay of the weighted Dirichlet integrand at r_max.
  void validate() const;
};

// Geometric near the origin, spacing ~ 0.5/sqrt(b) ds far out, r_max = sqrt(140 / b).
GridPtr nonradial_grid(double b, std::size_t n = 12000);

struct PoissonProfile {
  std::vector<double> phi, dphi;
};
// -Delta^{(k)} Phi = u with the two-sided kernel formulas (k = 0: log kernel).
PoissonProfile poisson_harmonic(int k, const RadialGrid& grid, const std::vector<double>& u);
// max |Phi'' + Phi'/r - k^2 Phi/r^2 + u| / max(|terms|), Phi'' by differencing Phi'.
double poisson_residual(int k, const RadialGrid& grid, const std::vector<double>& u, const PoissonProfile& p);

// Parts hold Phi~_u = rho^{-1/2} Phi[u sqrt(rho)] and its derivative.
HarmonicField truncated_poisson(const HarmonicField& u);
// Residual of Delta Phi~ + u - b y.grad Phi~ - (b - b^2 |y|^2 / 4) Phi~ weighted by sqrt(rho).
double truncated_identity_residual(const HarmonicField& u, const HarmonicField& phi);

// u / U - Phi~_u (truncated) or u / U - Phi_u.
HarmonicField M_apply(const HarmonicField& u, bool truncated);

double mixed_inner_product(const HarmonicField& u, const HarmonicField& v);
double gradient_norm(const HarmonicField& u);  // ||grad u||^2_{L^2_omega}, omega = s^2 rho / U_s
double l2_omega_norm(const HarmonicField& u);  // ||u||^2_{L^2_omega}

struct QuadraticForms {
  double F = 0.0;
  double G = 0.0;        // remainder of the exact identity: full - F - 2b <u,u>_*
  // int (2b U y.grad Phi~ + (b + b^2|y|^2/4) U Phi~) M~u rho, with the usual written sign of b^2|y|^2/4;
  // the identity for Phi~ has the opposite sign, so this differs from G
  double G_literal = 0.0;
  double inner_star = 0.0;
  double full = 0.0;           // F + G + 2b <u,u>_*
  double full_identity = 0.0;  // int U |grad w|^2 rho + 2b <u,u>_* + b int (y.grad Phi_U) u w rho + b int U (y.grad Phi~) w rho
  double full_direct = 0.0;    // <-L~u, u>_* with L~u assembled by differencing (NaN if not requested)
  double grad_norm = 0.0;
  std::array<double, 4> F_terms{};  // ||grad u||^2, -int u^2 rho, -2 int U grad(u/U).grad Phi~ rho, int U |grad Phi~|^2 rho
  std::vector<double> full_by_part, grad_by_part;
};
QuadraticForms quadratic_forms(const HarmonicField& u, bool direct = true);

// int u d_{y_j} U_s w dy for j = 1, 2 with w = sqrt(rho) (sqrt_rho) or 1.
std::array<double, 2> translation_projections(const HarmonicField& u, bool sqrt_rho);
// Removes the d_{y_j} U_s (times sqrt(rho)) components in plain L^2.
void project_translations(HarmonicField& u, bool sqrt_rho);

// Random smooth field on harmonics 1..K: cubic B-spline in ln(1 + r) over the whole grid, normal coefficients,
// damping e^{-r/L} with L log-uniform in [1, L_max] (0: 2/sqrt(b)), origin factor (r/(1+r))^k.
HarmonicField random_field(double b, GridPtr grid, int K, std::mt19937_64& rng, double L_max = 0.0);
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);
// a = U_s'(r) [sqrt(rho)], k = 1, i = 1.
HarmonicField translation_mode(double b, GridPtr grid, bool sqrt_rho, double s = 1.0);
// Smooth bump on [R, 2R] on harmonic k.
HarmonicField bump_field(double b, GridPtr grid, int k, double R);
// Same field in zeta = nu y: grid nu r, s = nu, Gaussian rate beta = b / nu^2.
HarmonicField to_zeta_form(const HarmonicField& u, double nu);

struct CoercivityReport {
  double b = 0.0;
  int K = 0, trials = 0;
  std::uint64_t seed = 0;
  double min_quotient = 0.0, mean_quotient = 0.0, max_quotient = 0.0;
  int argmin = -1;
  std::vector<double> min_quotient_by_K;  // restricted to harmonics 1..k
  double max_G_constant = 0.0;            // max |G| / (b^{1/4} ||grad u||^2)
  double max_G_literal_constant = 0.0;
  double min_inner_ratio = 0.0;           // min <u,u>_* / ||u||^2_omega (delta_1)
  double max_identity_mismatch = 0.0;     // |full - full_identity| / |full|
  double seconds = 0.0;
};
CoercivityReport coercivity_scan(double b, int K, int trials, std::uint64_t seed, std::size_t nodes = 12000);

struct InequalityCheck {
  std::string name;
  bool lower = false;  // true: reported value is a minimum that must stay positive
  double value = 0.0;  // worst ratio over the samples
};
// Ratios of both sides for one field; b = 0 forms use the untruncated Poisson field.
std::vector<InequalityCheck> inequality_ratios(const HarmonicField& u);
std::vector<InequalityCheck> functional_inequality_checks(double b, int samples, std::uint64_t seed,
                                                          std::size_t nodes = 12000);

}  // namespace ksspec
