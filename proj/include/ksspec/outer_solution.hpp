#pragma once

#include <functional>

#include "ksspec/grid.hpp"
#include "ksspec/radial_core.hpp"

namespace ksspec {

enum class OuterMethod { backward_ode, fixed_point };

// Decaying solution of (K_theta + P0) q = 0 on [z0, z_max], z = b r^2 / 2,
// K_theta = z d_zz + (2 - z) d_z - theta,  P0 = -2b/(b+2z) d_z + 4b/(b+2z)^2.
struct OuterSolution {
  Parameters params;
  int n = 0;
  double alpha_bar = 0.0;
  double theta = 0.0;
  RadialGridFunction q, dq;  // on a z-grid, first node z0
  RadialGridFunction correction_G;  // q - Gamma(theta) h_theta
  OuterMethod method = OuterMethod::backward_ode;
  double scale = 1.0;  // q = scale * (solution seeded as z^{-theta} at z_max)
  double q_z0 = 0.0, dq_z0 = 0.0;  // dense-output values at z0
};

// Optional extra term (1/2) d_z(V q) / z added to P0.
struct OuterPerturbation {
  std::function<double(double)> V, dV;
};

struct OuterOptions {
  double z_max = 0.0;  // 0: max(40, 20 |theta|)
  std::size_t nodes = 2400;
  // false: skip the Gamma(theta) rescaling and the correction profile (root finding)
  bool full = true;
  const OuterPerturbation* perturbation = nullptr;
};

double outer_theta(const Parameters& p, int n, double alpha_bar);

OuterSolution solve_outer(const Parameters& p, int n, double alpha_bar, const OuterOptions& opt = {});

struct KummerInverse {
  std::vector<double> value, derivative;
};
// Solves K_theta u = f with the two-kernel Green's function (weight xi e^{-xi}):
//   u = -Gamma(theta) [ h(z) int_{z0}^z ht f w + ht(z) int_z^{z_max} h f w ].
KummerInverse invert_kummer(double theta, GridPtr zgrid, const std::vector<double>& f);
// K_theta applied by grid differencing; an exact first derivative may be supplied, then only u'' is differenced.
std::vector<double> apply_kummer(double theta, GridPtr zgrid, const std::vector<double>& u,
                                 const std::vector<double>* du = nullptr);

// q^{k+1} = Gamma(theta) h_theta - K_theta^{-1}[P0 q^k], q^0 = Gamma(theta) h_theta, `sweeps` <= 3.
OuterSolution fixed_point_outer(const Parameters& p, int n, double alpha_bar, int sweeps = 1,
                                const OuterOptions& opt = {});

int outer_zero_count(const OuterSolution& sol);

// max |z q'' + (2 - z) q' - theta q + P0 q| / (|z q''| + |(2 - z) q'| + |theta q|), q'' by differencing dq.
double outer_residual(const OuterSolution& sol);

}  // namespace ksspec
