#include "ksspec/ode.hpp"

#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "ksspec/error.hpp"

namespace ksspec {

namespace odeint = boost::numeric::odeint;

std::vector<State2> integrate_dense(const Rhs2& rhs, State2 y0, double t0, const std::vector<double>& times,
                                    const OdeTolerance& tol) {
  std::vector<State2> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  const double t_end = times.back();
  const double span = std::abs(t_end - t0);
  if (span == 0.0) {
    out.assign(times.size(), y0);
    return out;
  }
  const double dir = t_end > t0 ? 1.0 : -1.0;

  auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State2>());
  auto sys = [&rhs](const State2& y, State2& dy, double t) { rhs(y, dy, t); };
  stepper.initialize(y0, t0, dir * span * 1e-6);

  long steps = 0;
  for (double t : times) {
    if ((t - t0) * dir < 0.0) fail(ErrorKind::Numerical, "integrate_dense: output time before start");
    if (steps == 0 && t == t0) {
      out.push_back(y0);
      continue;
    }
    while ((stepper.current_time() - t) * dir < 0.0) {
      stepper.do_step(sys);
      if (++steps > tol.max_steps) fail(ErrorKind::Numerical, "integrate_dense: step budget exhausted");
      if (std::abs(stepper.current_time_step()) < tol.min_step * span && (stepper.current_time() - t_end) * dir < 0.0)
        fail(ErrorKind::Numerical, "integrate_dense: stiffness, step " + std::to_string(stepper.current_time_step()));
      const State2& y = stepper.current_state();
      if (!std::isfinite(y[0]) || !std::isfinite(y[1])) fail(ErrorKind::Numerical, "integrate_dense: non-finite state");
    }
    State2 y;
    stepper.calc_state(t, y);
    out.push_back(y);
  }
  return out;
}

}  // namespace ksspec
