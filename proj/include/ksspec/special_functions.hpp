#pragma once

// Gamma-type functions and the two fundamental solutions of the Kummer
// equation  z f'' + (2 - z) f' - theta f = 0.
//
//   kummer_regular  : M(theta, 2, z), regular at the origin
//   kummer_singular : U(theta, 2, z), ~ 1/(z Gamma(theta)) at the origin and
//                     ~ z^{-theta} at infinity

#include <vector>

namespace ksspec {

inline constexpr double kEulerGamma = 0.57721566490153286061;

double gamma(double x);
// 1/Gamma(x), exactly zero at the poles of Gamma.
double rgamma(double x);
double digamma(double x);
double pochhammer(double a, int i);

enum class KummerBranch { series, connection, asymptotic };

struct KummerOptions {
  double switch_radius = 40.0;  // asymptotic expansions above this (U' series for theta = 2 still 3e-10 at 30)
  double series_radius = 4.0;   // U: log-series below this, connection ODE in between
};

struct KummerEval {
  double theta = 0.0;
  double z = 0.0;
  double value = 0.0;
  double derivative_z = 0.0;
  KummerBranch branch = KummerBranch::series;
};

KummerEval kummer_regular(double theta, double z, const KummerOptions& opt = {});
KummerEval kummer_singular(double theta, double z, const KummerOptions& opt = {});
// Same as kummer_singular on many points; shares one connection integration.
std::vector<KummerEval> kummer_singular_grid(double theta, const std::vector<double>& z, const KummerOptions& opt = {});

// z f'' + (2 - z) f' - theta f evaluated with a supplied second derivative.
inline double kummer_residual(double theta, double z, double f, double df, double d2f) {
  return z * d2f + (2.0 - z) * df - theta * f;
}

const char* to_string(KummerBranch b);

}  // namespace ksspec
