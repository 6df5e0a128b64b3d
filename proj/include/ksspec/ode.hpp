#pragma once

#include <array>
#include <functional>
#include <vector>

namespace ksspec {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<void(const State2& y, State2& dy, double t)>;

struct OdeTolerance {
  double abs = 1e-14;
  double rel = 1e-10;
  double min_step = 1e-12;  // relative to the span; smaller steps mean stiffness
  long max_steps = 2000000;
};

// Adaptive Dormand-Prince 5(4) with dense output. `times` must be monotone in
// the direction of integration starting from t0; returns y at each time.
std::vector<State2> integrate_dense(const Rhs2& rhs, State2 y0, double t0, const std::vector<double>& times,
                                    const OdeTolerance& tol = {});

}  // namespace ksspec
