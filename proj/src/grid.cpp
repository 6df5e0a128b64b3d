#include "ksspec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ksspec/error.hpp"

namespace ksspec {

namespace {

// 3-point Gauss-Legendre on [-1, 1]; exact to degree 5.
constexpr std::array<double, 3> kGx = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
constexpr std::array<double, 3> kGw = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

double lagrange_basis(const double* xs, int n, int j, double x) {
  double p = 1.0;
  for (int m = 0; m < n; ++m)
    if (m != j) p *= (x - xs[m]) / (xs[j] - xs[m]);
  return p;
}

}  // namespace

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

RadialGrid::RadialGrid(std::vector<double> nodes) : r_(std::move(nodes)) {
  const std::size_t n = r_.size();
  if (n < 7) fail(ErrorKind::Config, "RadialGrid: grid too coarse, need at least 7 nodes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(r_[i] > r_[i - 1])) fail(ErrorKind::Config, "RadialGrid: nodes must be strictly increasing");

  panel_.resize(n - 1);
  panel_start_.resize(n - 1);
  w_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t s = i == 0 ? 0 : std::min(i - 1, n - 4);
    panel_start_[i] = s;
    const double a = r_[i], b = r_[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int g = 0; g < 3; ++g) acc += kGw[g] * lagrange_basis(&r_[s], 4, j, mid + half * kGx[g]);
      panel_[i][j] = half * acc;
      w_[s + j] += panel_[i][j];
    }
  }

  d1_.resize(n);
  d2_.resize(n);
  stencil_start_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = i < 2 ? 0 : std::min(i - 2, n - 5);
    stencil_start_[i] = s;
    std::vector<double> xs(r_.begin() + s, r_.begin() + s + 5);
    const auto w1 = fd_weights(r_[i], xs, 1);
    const auto w2 = fd_weights(r_[i], xs, 2);
    for (int k = 0; k < 5; ++k) {
      d1_[i][k] = w1[k];
      d2_[i][k] = w2[k];
    }
  }
}

double RadialGrid::integrate(const std::vector<double>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < r_.size(); ++i) acc += w_[i] * f[i];
  return acc;
}

std::vector<double> RadialGrid::cumulative(const std::vector<double>& f) const {
  std::vector<double> F(r_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
    const std::size_t s = panel_start_[i];
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += panel_[i][j] * f[s + j];
    F[i + 1] = F[i] + acc;
  }
  return F;
}

std::vector<double> RadialGrid::tail_cumulative(const std::vector<double>& f) const {
  std::vector<double> T(r_.size(), 0.0);
  for (std::size_t i = r_.size() - 1; i-- > 0;) {
    const std::size_t s = panel_start_[i];
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += panel_[i][j] * f[s + j];
    T[i] = T[i + 1] + acc;
  }
  return T;
}

std::vector<double> RadialGrid::derivative(const std::vector<double>& f) const {
  std::vector<double> d(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const std::size_t s = stencil_start_[i];
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += d1_[i][k] * f[s + k];
    d[i] = acc;
  }
  return d;
}

std::vector<double> RadialGrid::second_derivative(const std::vector<double>& f) const {
  std::vector<double> d(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const std::size_t s = stencil_start_[i];
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += d2_[i][k] * f[s + k];
    d[i] = acc;
  }
  return d;
}

std::size_t RadialGrid::locate(double x) const {
  if (x <= r_.front()) return 0;
  if (x >= r_.back()) return r_.size() - 2;
  auto it = std::upper_bound(r_.begin(), r_.end(), x);
  return static_cast<std::size_t>(it - r_.begin()) - 1;
}

double RadialGrid::interpolate(const std::vector<double>& f, double x) const {
  x = std::clamp(x, r_.front(), r_.back());
  const std::size_t i = locate(x);
  const std::size_t s = panel_start_[i];
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) acc += f[s + j] * lagrange_basis(&r_[s], 4, j, x);
  return acc;
}

GridPtr make_grid(double r_min, double r_max, std::size_t n, double L) {
  if (!(r_min > 0.0) || !(r_max > r_min)) fail(ErrorKind::Config, "make_grid: need 0 < r_min < r_max");
  if (n < 7) fail(ErrorKind::Config, "make_grid: grid too coarse, need at least 7 nodes");
  auto s_of = [L](double r) { return std::log(r) + (L > 0.0 ? r / L : 0.0); };
  const double s0 = s_of(r_min), s1 = s_of(r_max);
  std::vector<double> r(n);
  r[0] = r_min;
  r[n - 1] = r_max;
  double guess = r_min;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1);
    double x = guess;
    for (int it = 0; it < 100; ++it) {
      const double g = s_of(x) - s;
      const double dg = 1.0 / x + (L > 0.0 ? 1.0 / L : 0.0);
      double xn = x - g / dg;
      if (xn <= 0.0) xn = 0.5 * x;
      if (std::abs(xn - x) <= 1e-15 * x) {
        x = xn;
        break;
      }
      x = xn;
    }
    r[i] = x;
    guess = x;
  }
  if (r_min < 1.0 && r_max > 1.0) {
    const std::size_t k = static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), 1.0) - r.begin());
    const std::size_t j = (k > 0 && 1.0 - r[k - 1] < r[k] - 1.0) ? k - 1 : k;
    if (j > 0 && j + 1 < n) r[j] = 1.0;
  }
  return std::make_shared<const RadialGrid>(std::move(r));
}

GridPtr make_uniform_grid(double a, double b, std::size_t n) {
  if (!(b > a)) fail(ErrorKind::Config, "make_uniform_grid: need a < b");
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return std::make_shared<const RadialGrid>(std::move(r));
}

RadialGridFunction::RadialGridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) fail(ErrorKind::Config, "RadialGridFunction: size mismatch");
}

int sign_changes(const std::vector<double>& v, double floor) {
  int count = 0, last = 0;
  for (double x : v) {
    if (std::abs(x) <= floor || x == 0.0) continue;
    const int s = x > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace ksspec
