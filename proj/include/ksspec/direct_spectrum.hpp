#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ksspec/grid.hpp"
#include "ksspec/radial_core.hpp"

namespace ksspec {

// Weighted Sturm-Liouville problem  (1/w)(w u')' + V u = lambda u  discretised by
// finite volumes:  -K u + M V u = lambda M u,  K the flux Laplacian, M the cell masses.
// Boundary fluxes to Dirichlet ghost nodes enter the diagonal as bc_left/bc_right.
struct SturmOperator {
  Parameters params;
  GridPtr grid;                   // unknowns live on all nodes of this grid
  std::vector<double> flux;       // size n - 1, w_{i+1/2} / h_i
  std::vector<double> mass;       // size n
  std::vector<double> potential;  // size n
  double bc_left = 0.0, bc_right = 0.0;
  // true: unknown is g = f / psi0 (weight w = omega_b psi0^2); false: unknown is f.
  bool ground_state = false;
  std::vector<double> ground_ratio;  // optional h at the nodes when f = psi0 h g
};

struct SpectrumOptions {
  std::size_t nodes = 0;  // 0: 4000, or 8000 for nu <= 1e-5
  double K = 60.0;        // r_max = sqrt(2K / b)
  double r_min = 1e-4;
};

GridPtr spectrum_grid(const Parameters& p, const SpectrumOptions& opt = {});

// f-form: flux omega_b at midpoints, potential U, Dirichlet at both ends
// (the boundary nodes are ghosts; unknowns are the interior nodes).
SturmOperator assemble_discretization(const Parameters& p, GridPtr grid);
// g-form used for eigenvalues: f = psi0 g, w = omega_b psi0^2, V = -b r psi0'/psi0,
// natural (Neumann) ends. Optional extra log-weight and potential for perturbations.
struct GroundStateExtras {
  std::vector<double> log_weight_nodes;  // added to ln w at nodes
  std::vector<double> log_weight_mid;    // added to ln w at midpoints
  std::vector<double> potential;         // added to V at nodes
  std::vector<double> ground_ratio;      // copied to SturmOperator::ground_ratio
};
SturmOperator assemble_ground_state(const Parameters& p, GridPtr grid, const GroundStateExtras* extras = nullptr);

// Number of eigenvalues strictly above lambda (negative pivots of K + M(lambda - V)).
int count_above(const SturmOperator& op, double lambda);
// Largest |(M A)_{ij} - (M A)_{ji}| of the weighted matrix.
double weighted_asymmetry(const SturmOperator& op);

struct SpectrumResult {
  Parameters params;
  std::vector<double> eigenvalues;                // descending, r-units
  std::vector<RadialGridFunction> eigenvectors;   // f on the unknown grid
  std::vector<std::vector<double>> unknowns;      // g (ground-state form) or f
  std::vector<std::vector<double>> gram;          // <phi_i, phi_j>_omega
  std::vector<double> residuals;                  // ||A phi - lambda phi||_omega / ||phi||_omega
  std::size_t nodes = 0;
  double r_max = 0.0;
};

SpectrumResult solve_spectrum(const SturmOperator& op, int k);
// Top-k for the default g-form operator at p.
SpectrumResult direct_spectrum(const Parameters& p, int k, const SpectrumOptions& opt = {});

// Operator helpers on unknown vectors.
std::vector<double> apply_operator(const SturmOperator& op, const std::vector<double>& u);  // M^{-1}(-K u) + V u
double inner(const SturmOperator& op, const std::vector<double>& u, const std::vector<double>& v);  // u^T M v
double quadratic_form(const SturmOperator& op, const std::vector<double>& u);  // -u^T K u + u^T M V u
// Rescale eigenvectors so f ~ r^2 at the origin (g -> 1); returns the scale factors applied.
std::vector<double> construction_normalize(const SturmOperator& op, SpectrumResult& res);

struct Diagnostics {
  std::vector<double> norms;          // c_n = ||phi_n||^2_omega, construction normalization
  double c0_ratio = 0.0;              // c_0 * 16 / |ln b|
  double c1_ratio = 0.0;              // c_1 * 16 / |ln b|^2
  int gap_trials = 0;
  int gap_violations = 0;
  double gap_worst_excess = 0.0;      // max over trials of (RQ - lambda_{N+1}) / nu^2
  std::vector<double> gaps_over_2b;   // (lambda_n - lambda_{n+1}) / (2b)
  std::vector<double> matched_deviation;  // |lambda_n - alpha_n| |ln b|^2 / (2b)
};

// Requires a ground-state SpectrumResult with at least N + 2 modes.
Diagnostics spectral_diagnostics(const SturmOperator& op, SpectrumResult res, int N, int trials, std::uint64_t seed,
                                 const std::vector<double>& matched_alpha = {});

}  // namespace ksspec
