#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace ksspec {

// Nodes plus everything needed to integrate and differentiate sampled data:
// per-interval cubic (4-point Lagrange) quadrature and 5-point derivative
// stencils, both exact for polynomials of the respective degree.
class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> nodes);

  std::size_t size() const { return r_.size(); }
  const std::vector<double>& nodes() const { return r_; }
  double operator[](std::size_t i) const { return r_[i]; }
  double front() const { return r_.front(); }
  double back() const { return r_.back(); }
  // Weights of the composite rule on [r_0, r_{N-1}].
  const std::vector<double>& weights() const { return w_; }

  double integrate(const std::vector<double>& f) const;
  // F[k] = int_{r_0}^{r_k} f
  std::vector<double> cumulative(const std::vector<double>& f) const;
  // T[k] = int_{r_k}^{r_{N-1}} f, summed from the outer end (no cancellation for small tails)
  std::vector<double> tail_cumulative(const std::vector<double>& f) const;
  std::vector<double> derivative(const std::vector<double>& f) const;
  std::vector<double> second_derivative(const std::vector<double>& f) const;
  // Cubic Lagrange interpolation; x is clamped to the grid range.
  double interpolate(const std::vector<double>& f, double x) const;
  // Index i with r_i <= x < r_{i+1} (clamped).
  std::size_t locate(double x) const;

 private:
  std::vector<double> r_;
  std::vector<double> w_;
  std::vector<std::array<double, 4>> panel_;   // interval i uses nodes panel_start_[i] .. +3
  std::vector<std::size_t> panel_start_;
  std::vector<std::array<double, 5>> d1_, d2_;
  std::vector<std::size_t> stencil_start_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Nodes uniform in s = ln r + r / L: geometric for r << L, spacing ~ L ds for r >> L.
// L <= 0 gives a purely geometric grid. The node r = 1 is inserted if in range.
GridPtr make_grid(double r_min, double r_max, std::size_t n, double L = 0.0);
GridPtr make_uniform_grid(double a, double b, std::size_t n);

struct RadialGridFunction {
  GridPtr grid;
  std::vector<double> values;

  RadialGridFunction() = default;
  RadialGridFunction(GridPtr g, std::vector<double> v);
  template <class F>
  static RadialGridFunction sample(GridPtr g, F&& f) {
    std::vector<double> v(g->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*g)[i]);
    return RadialGridFunction(std::move(g), std::move(v));
  }

  std::size_t size() const { return values.size(); }
  const std::vector<double>& nodes() const { return grid->nodes(); }
  const std::vector<double>& quadrature_weights() const { return grid->weights(); }
  double operator[](std::size_t i) const { return values[i]; }
  double at(double r) const { return grid->interpolate(values, r); }
};

// Weights of f^{(m)}(x0) from the values at xs (Fornberg's algorithm).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// Number of strict sign changes, ignoring exact zeros and |v| <= floor.
int sign_changes(const std::vector<double>& v, double floor = 0.0);

}  // namespace ksspec
