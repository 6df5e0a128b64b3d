#pragma once

#include <cstddef>
#include <vector>

#include "ksspec/grid.hpp"

namespace ksspec {

// Problem constants. b = beta nu^2, R0 = zeta0 / sqrt(b), z0 = zeta0^2 / 2.
struct Parameters {
  double beta = 0.5;
  double nu = 1e-3;
  double b = 0.5e-6;
  double zeta0 = 0.1;
  double R0 = 0.0;
  double z0 = 0.0;
  int n_max = 2;
  double delta = 0.01;

  static Parameters make(double beta, double nu, double zeta0 = 0.1, int n_max = 2, double delta = 0.01);
  // Same derived quantities but with b given directly (beta kept, nu = sqrt(b / beta)).
  static Parameters from_b(double b, double zeta0 = 0.1, int n_max = 2, double beta = 0.5);
  void validate() const;
  double log_b() const;
};

struct Profiles {
  double U, Q, psi0, psi0_tilde, dpsi0, dpsi0_tilde;
};

// psi0_tilde takes its continuous limit -1 at r = 0.
Profiles stationary_profiles(double r);
inline double U_of(double r) { return 8.0 / ((1.0 + r * r) * (1.0 + r * r)); }

// Weights. The log forms avoid underflow of the Gaussian factors.
double omega_nu(double zeta, double nu, double beta);  // nu^2 e^{-beta zeta^2/2} / U_nu(zeta)
double rho0(double zeta, double beta);                 // e^{-beta zeta^2/2}
double omega_b(double r, double b);                    // 1 / (r U e^{b r^2/2})
double log_omega_b(double r, double b);
double rho_b(double r, double b);                      // r^{-2} U^{-1/2} e^{-b r^2/4}

// max over the nodes of |phi| / (r^2 <r>^-4 <sqrt(b) r>^{2n + delta} (1 + [n >= 1] ln <r>)), <x> = sqrt(1 + x^2).
double pointwise_bound_constant(const Parameters& p, int n, const std::vector<double>& r, const std::vector<double>& phi);

// m_f(r) = int_0^r f(s) s ds
RadialGridFunction partial_mass(const RadialGridFunction& f);

// A0 f = f'' + (-1/r + 4r/(1+r^2)) f' + U f, 4th-order finite differences.
RadialGridFunction apply_A0(const RadialGridFunction& f);

// u = 1/2 psi0 int_r^1 k f + 1/2 psi0_tilde int_0^r s f,  k = (s^4 + 4 s^2 ln s - 1)/s.
// Solves A0 u = f; if `du` is given it receives u' (exact in terms of the two integrals).
RadialGridFunction invert_A0(const RadialGridFunction& f, std::vector<double>* du = nullptr);

struct KernelTable {
  int j_max = 0;
  GridPtr grid;
  std::vector<RadialGridFunction> T;      // T_0 .. T_jmax
  std::vector<std::vector<double>> dT;    // r-derivatives
  std::vector<double> dhat, d;            // recurrence values, index j (entry 0 unused)
  std::vector<double> dhat_fit, d_fit;    // tail fits
  std::vector<std::vector<double>> c;     // c[n][j] = 2^j n!/(n-j)!, zero for j > n
  std::vector<RadialGridFunction> Theta;  // Theta_j = r T_j' - 2(j-1) T_j
  RadialGridFunction A0inv_Theta0;        // A0^{-1} Theta_0
};

double cnj(int n, int j);
// T_j ~ r^{2j-2}(dhat_j ln r + d_j). With the integration limits of invert_A0,
// int_0^r s psi0 = ln r - 1/2 + o(1) gives T_1 = -ln r / 2 + 1/2 + o(1), hence d_1 = 1/2.
inline constexpr double kTailD1 = 0.5;
void tail_recurrence(int j_max, std::vector<double>& dhat, std::vector<double>& d, double d1 = kTailD1);

// Geometric grid from 1e-4 to r_max (the default covers R0 for b down to ~1e-10).
GridPtr default_kernel_grid(double r_max = 2e5, std::size_t n = 6000);
KernelTable build_kernel_table(int j_max, GridPtr grid);
// j_max = 6 on the default grid, built once.
const KernelTable& default_kernel_table();
// Least-squares fit of T_j / r^{2j-2} = dhat ln r + d over [r_lo, r_hi].
void fit_tail(const KernelTable& t, int j, double r_lo, double r_hi, double& dhat, double& d);

RadialGridFunction theta_profile(int j, const KernelTable& table);
// int_0^inf r Theta_0 dr including the analytic tail 2 / r_max^2.
double theta0_moment(const KernelTable& table);

}  // namespace ksspec
