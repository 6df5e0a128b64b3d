#include "ksspec/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "ksspec/error.hpp"
#include "ksspec/ode.hpp"

namespace ksspec {

namespace {

constexpr int kMaxTerms = 500;
const double kLogMax = std::log(std::numeric_limits<double>::max());

bool near_pole(double x) {
  if (x > 0.5) return false;
  return std::abs(x - std::round(x)) < 1e-12;
}

void check_pole(double x, const char* who) {
  if (near_pole(x)) fail(ErrorKind::Domain, std::string(who) + ": pole at nonpositive integer x = " + std::to_string(x));
}

// Sum_k (p)_k (q)_k / k! * s^k truncated at the smallest term.
double asymptotic_sum(double p, double q, double s) {
  double sum = 1.0, term = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double next = term * (p + k) * (q + k) * s / (k + 1);
    if (next == 0.0) break;
    if (std::abs(next) >= std::abs(term)) break;
    sum += next;
    term = next;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// M(a, b, z) for large z: dominant e^z branch plus the Stokes-averaged recessive part.
double regular_asymptotic(double a, double b, double z) {
  const double expo = z + (a - b) * std::log(z);
  if (expo > kLogMax) fail(ErrorKind::Numerical, "kummer_regular: overflow at z = " + std::to_string(z));
  const double dom = rgamma(a) * std::exp(expo) * asymptotic_sum(b - a, 1.0 - a, 1.0 / z);
  const double rec = boost::math::cos_pi(a) * rgamma(b - a) * std::pow(z, -a) * asymptotic_sum(a, a - b + 1.0, -1.0 / z);
  return std::tgamma(b) * (dom + rec);
}

// U(a, b, z) ~ z^{-a} sum (a)_s (a-b+1)_s / s! (-z)^{-s}
double singular_asymptotic(double a, double b, double z) {
  return std::pow(z, -a) * asymptotic_sum(a, a - b + 1.0, -1.0 / z);
}

KummerEval singular_series(double theta, double z) {
  const double lz = std::log(z);
  const double rg0 = rgamma(theta);
  const double rg1 = rgamma(theta - 1.0);
  double sum = 0.0, dsum = 0.0, mag = 0.0;
  double t = 1.0;
  double psi_a = 0.0;
  double psi1 = -kEulerGamma;       // Psi(1 + i)
  double psi2 = 1.0 - kEulerGamma;  // Psi(2 + i)
  for (int i = 0; i < kMaxTerms; ++i) {
    const double x = theta + i;
    psi_a = (x < 1.0 || i == 0) ? digamma(x) : psi_a + 1.0 / (x - 1.0);
    const double br = lz + psi_a - psi1 - psi2;
    const double term = t * br;
    sum += term;
    dsum += (i * term + t) / z;
    mag += std::abs(term);
    if (i > std::abs(theta) + 2 && std::abs(t) * (1.0 + std::abs(br)) < 1e-17 * mag) break;
    t *= x * z / ((2.0 + i) * (i + 1.0));
    psi1 += 1.0 / (i + 1.0);
    psi2 += 1.0 / (i + 2.0);
    if (i == kMaxTerms - 1) fail(ErrorKind::Numerical, "kummer_singular: series did not converge");
  }
  KummerEval e;
  e.theta = theta;
  e.z = z;
  e.value = rg0 / z + rg1 * sum;
  e.derivative_z = -rg0 / (z * z) + rg1 * dsum;
  e.branch = KummerBranch::series;
  return e;
}

KummerEval singular_asymptotic_eval(double theta, double z) {
  KummerEval e;
  e.theta = theta;
  e.z = z;
  e.value = singular_asymptotic(theta, 2.0, z);
  // U'(a, b, z) = -a U(a + 1, b + 1, z)
  e.derivative_z = -theta * singular_asymptotic(theta + 1.0, 3.0, z);
  e.branch = KummerBranch::asymptotic;
  return e;
}

}  // namespace

const char* to_string(KummerBranch b) {
  switch (b) {
    case KummerBranch::series: return "series";
    case KummerBranch::connection: return "connection";
    case KummerBranch::asymptotic: return "asymptotic";
  }
  return "?";
}

double gamma(double x) {
  check_pole(x, "gamma");
  return std::tgamma(x);
}

double rgamma(double x) {
  if (x <= 0.0 && x == std::round(x)) return 0.0;
  if (x < 0.5) return boost::math::sin_pi(x) * std::tgamma(1.0 - x) / std::numbers::pi;
  return 1.0 / std::tgamma(x);
}

double digamma(double x) {
  check_pole(x, "digamma");
  return boost::math::digamma(x);
}

double pochhammer(double a, int i) {
  double p = 1.0;
  for (int k = 0; k < i; ++k) p *= a + k;
  return p;
}

KummerEval kummer_regular(double theta, double z, const KummerOptions& opt) {
  if (!(z > 0.0)) fail(ErrorKind::Domain, "kummer_regular: z must be positive");
  KummerEval e;
  e.theta = theta;
  e.z = z;
  if (z > opt.switch_radius) {
    e.value = regular_asymptotic(theta, 2.0, z);
    // M'(a, b, z) = (a / b) M(a + 1, b + 1, z)
    e.derivative_z = 0.5 * theta * regular_asymptotic(theta + 1.0, 3.0, z);
    e.branch = KummerBranch::asymptotic;
    return e;
  }
  double sum = 1.0, dsum = 0.0, t = 1.0;
  for (int i = 1;; ++i) {
    t *= (theta + i - 1) * z / ((1.0 + i) * i);
    sum += t;
    dsum += i * t / z;
    if (t == 0.0 || (i > std::abs(theta) + z && std::abs(t) < 1e-17 * std::abs(sum))) break;
    if (i == kMaxTerms) fail(ErrorKind::Numerical, "kummer_regular: series term cap reached");
  }
  e.value = sum;
  e.derivative_z = dsum;
  e.branch = KummerBranch::series;
  return e;
}

KummerEval kummer_singular(double theta, double z, const KummerOptions& opt) {
  return kummer_singular_grid(theta, std::vector<double>{z}, opt).front();
}

std::vector<KummerEval> kummer_singular_grid(double theta, const std::vector<double>& z, const KummerOptions& opt) {
  std::vector<KummerEval> out(z.size());
  std::vector<std::size_t> mid;  // indices needing the connection branch
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0)) fail(ErrorKind::Domain, "kummer_singular: z must be positive");
    if (z[i] > opt.switch_radius)
      out[i] = singular_asymptotic_eval(theta, z[i]);
    else if (z[i] <= opt.series_radius)
      out[i] = singular_series(theta, z[i]);
    else
      mid.push_back(i);
  }
  if (mid.empty()) return out;

  // Integrate downward from the switch radius; U is dominant in that direction.
  std::sort(mid.begin(), mid.end(), [&](std::size_t a, std::size_t b) { return z[a] > z[b]; });
  const double zs = opt.switch_radius;
  const KummerEval seed = singular_asymptotic_eval(theta, zs);
  std::vector<double> times;
  for (std::size_t i : mid) times.push_back(z[i]);
  Rhs2 rhs = [theta](const State2& y, State2& dy, double t) {
    dy[0] = y[1];
    dy[1] = (theta * y[0] - (2.0 - t) * y[1]) / t;
  };
  OdeTolerance tol;
  tol.abs = 1e-300;
  tol.rel = 1e-13;
  const auto ys = integrate_dense(rhs, {seed.value, seed.derivative_z}, zs, times, tol);
  for (std::size_t k = 0; k < mid.size(); ++k) {
    KummerEval& e = out[mid[k]];
    e.theta = theta;
    e.z = times[k];
    e.value = ys[k][0];
    e.derivative_z = ys[k][1];
    e.branch = KummerBranch::connection;
  }
  return out;
}

}  // namespace ksspec
