#include <doctest.h>

#include <cmath>

#include "ksspec/direct_spectrum.hpp"
#include "ksspec/error.hpp"
#include "ksspec/matching.hpp"
#include "ksspec/special_functions.hpp"

using namespace ksspec;

TEST_SUITE("inner_solution") {
  TEST_CASE("residual, normalization and the leading expansion") {
    const Parameters p = Parameters::make(0.5, 1e-4);
    for (int n = 0; n <= 2; ++n) {
      const auto s = solve_inner(p, n, 0.0);
      CHECK(inner_ode_residual(s) < 1e-7);
      CHECK(s.values.nodes().back() == doctest::Approx(p.R0).epsilon(1e-12));
      CHECK(s.alpha == doctest::Approx(inner_alpha(p, n, 0.0)));
      CHECK(s.alpha == doctest::Approx(2.0 * p.b * (1.0 - n + 1.0 / p.log_b())));
      // phi ~ F_n where b r^2 is small
      const double r = 10.0;
      CHECK(s.values.at(r) == doctest::Approx(s.leading_F.at(r)).epsilon(1e-4));
    }
  }

  TEST_CASE("1-homogeneous in the seed") {
    const Parameters p = Parameters::make(0.5, 1e-4);
    InnerOptions raw;
    raw.fit_to_F = false;
    const auto a = solve_inner(p, 1, 0.001, raw), b = solve_inner(p, 1, 0.001);
    const double c = b.values[0] / a.values[0];
    for (std::size_t i = 0; i < a.values.size(); i += 50) CHECK(b.values[i] == doctest::Approx(c * a.values[i]).epsilon(1e-12));
    CHECK(b.dvalue_R0 / b.value_R0 == doctest::Approx(a.dvalue_R0 / a.value_R0).epsilon(1e-12));
    CHECK(inner_zero_count(a) == inner_zero_count(b));
  }

  TEST_CASE("one zero inside the inner zone for n = 1 when zeta0 = 0.5, positive before it") {
    const Parameters p = Parameters::make(0.5, 1e-4, 0.5);
    const auto e = solve_eigenvalue(p, 1);
    CHECK(inner_zero_count(e.inner) == 1);
    CHECK(e.inner.values[0] > 0.0);
    CHECK(e.inner.values[e.inner.values.size() - 1] < 0.0);
  }

  TEST_CASE("refined series reduce to their first term for small b r^2") {
    const Parameters p = Parameters::from_b(1e-8);
    const double r = 10.0, L = p.log_b(), x = p.b * r * r;
    const auto [R0, S0] = refined_series(p, 0, r);
    const double R0_first = -x / 8.0 * ((2.0 * std::log(r + 1.0) - digamma(3.0) - kEulerGamma) / L + 1.0);
    CHECK(R0 == doctest::Approx(R0_first).epsilon(1e-5));
    CHECK(S0 == doctest::Approx(x * std::log(r + 1.0) / 8.0).epsilon(1e-5));
    CHECK_THROWS_AS(refined_series(p, 2, r), Error);
  }
}

TEST_SUITE("outer_solution") {
  TEST_CASE("residual and large-z behaviour") {
    const Parameters p = Parameters::from_b(1e-8);
    for (int n = 0; n <= 2; ++n) {
      const auto o = solve_outer(p, n, 0.0);
      CHECK(outer_residual(o) < 1e-8);
      CHECK(o.theta == doctest::Approx(outer_theta(p, n, 0.0)));
      CHECK(o.q.nodes().front() == doctest::Approx(p.z0));
      // q -> Gamma(theta) h_theta: the correction is small compared with q
      const double z = 3.0;
      CHECK(std::abs(o.correction_G.at(z)) < 1e-3 * std::abs(o.q.at(z)));
    }
  }

  TEST_CASE("n - 1 zeros of q for n >= 1 (zeta0 = 0.5), none for n = 0") {
    const Parameters p = Parameters::make(0.5, 1e-4, 0.5);
    CHECK(outer_zero_count(solve_eigenvalue(p, 0).outer) == 0);
    for (int n = 1; n <= 3; ++n) CHECK(outer_zero_count(solve_eigenvalue(p, n).outer) == n - 1);
  }

  TEST_CASE("backward ODE and fixed point agree up to normalization on [z0, 5]") {
    for (double b : {1e-6, 1e-8}) {
      const Parameters p = Parameters::from_b(b);
      const auto o = solve_outer(p, 1, 0.0);
      const auto f = fixed_point_outer(p, 1, 0.0, 3);
      const double c = o.q.at(5.0) / f.q.at(5.0);
      for (std::size_t i = 0; i < o.q.size() && o.q.nodes()[i] <= 5.0; ++i)
        CHECK(std::abs(o.q[i] - c * f.q.at(o.q.nodes()[i])) < 1e-5 * std::abs(o.q[i]));
    }
  }

  TEST_CASE("Kummer inversion round trip") {
    auto z = make_grid(0.005, 40.0, 3000);
    const double th = 0.7;
    std::vector<double> f(z->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = (2.0 * (*z)[i] - 2.0 - th) * std::exp(-(*z)[i]);
    const auto inv = invert_kummer(th, z, f);
    const auto back = apply_kummer(th, z, inv.value, &inv.derivative);
    for (std::size_t i = 3; i + 3 < f.size() && (*z)[i] < 10.0; ++i) CHECK(std::abs(back[i] - f[i]) < 1e-7);
    // f = K_theta e^{-z}, so the inverse is e^{-z} up to c1 h + c2 h~
    const double za = 0.5, zb = 3.0;
    const auto ha = kummer_singular(th, za), hb = kummer_singular(th, zb);
    const auto ma = kummer_regular(th, za), mb = kummer_regular(th, zb);
    const double ra = z->interpolate(inv.value, za) - std::exp(-za), rb = z->interpolate(inv.value, zb) - std::exp(-zb);
    const double det = ha.value * mb.value - hb.value * ma.value;
    const double c1 = (ra * mb.value - rb * ma.value) / det, c2 = (ha.value * rb - hb.value * ra) / det;
    for (double x : {0.05, 1.0, 2.0, 5.0, 8.0}) {
      const double model = std::exp(-x) + c1 * kummer_singular(th, x).value + c2 * kummer_regular(th, x).value;
      CHECK(std::abs(z->interpolate(inv.value, x) - model) < 1e-6);
    }
  }

  TEST_CASE("perturbed outer operator moves q by O(b |ln b|^C)") {
    for (double b : {1e-6, 1e-8}) {
      const Parameters p = Parameters::from_b(b);
      const double L = std::abs(std::log(b));
      OuterPerturbation pert;
      pert.V = [=](double z) { return b / L / (1.0 + z); };
      pert.dV = [=](double z) { return -b / L / ((1.0 + z) * (1.0 + z)); };
      OuterOptions po;
      po.perturbation = &pert;
      const auto o = solve_outer(p, 0, 0.0), q = solve_outer(p, 0, 0.0, po);
      for (std::size_t i = 0; i < o.q.size() && o.q.nodes()[i] <= 10.0; ++i)
        CHECK(std::abs(q.q.at(o.q.nodes()[i]) - o.q[i]) < b * L * L * std::abs(o.q[i]));
    }
  }
}

TEST_SUITE("matching") {
  TEST_CASE("Theta does not depend on how inner and outer solutions are normalized") {
    const Parameters p = Parameters::make(0.5, 1e-4);
    InnerOptions raw;
    raw.fit_to_F = false;
    OuterOptions bare;
    bare.full = false;
    for (int n = 0; n <= 2; ++n) {
      const auto i1 = solve_inner(p, n, 0.002), i2 = solve_inner(p, n, 0.002, raw);
      const auto o1 = solve_outer(p, n, 0.002), o2 = solve_outer(p, n, 0.002, bare);
      const double t1 = p.R0 * i1.dvalue_R0 / (2 * i1.value_R0) - p.z0 * o1.dq_z0 / o1.q_z0;
      const double t2 = p.R0 * i2.dvalue_R0 / (2 * i2.value_R0) - p.z0 * o2.dq_z0 / o2.q_z0;
      CHECK(t1 == doctest::Approx(t2).epsilon(1e-12));
      CHECK(t1 == doctest::Approx(mismatch_theta(p, n, 0.002)).epsilon(1e-10));
    }
  }

  TEST_CASE("root properties across b") {
    for (double b : {1e-6, 1e-8, 1e-10}) {
      const Parameters p = Parameters::from_b(b, 0.1, 3);
      const double L = std::abs(std::log(b));
      std::vector<double> alpha;
      for (int n = 0; n <= 3; ++n) {
        const auto e = solve_eigenvalue(p, n);
        CHECK(std::abs(e.alpha_bar) * L * L <= 50.0);
        CHECK(std::abs(e.mismatch_at_root) < 1e-8);
        CHECK(e.alpha == doctest::Approx(2 * b * (1 - n + e.alpha_tilde)));
        CHECK(e.alpha_tilde == doctest::Approx(1.0 / std::log(b) + e.alpha_bar));
        CHECK(e.glued.derivative_jump < 1e-6);
        if (n <= 1) {
          const double pred = 1.0 / std::log(b) + refinement_constant(n) / (L * L);
          CHECK(std::abs(e.alpha_tilde - pred) * L * L * L <= 100.0);
        }
        alpha.push_back(e.alpha);
      }
      for (int n = 0; n + 1 <= 3; ++n) CHECK(std::abs((alpha[n] - alpha[n + 1]) / (2 * b) - 1.0) < 0.15);
    }
  }

  TEST_CASE("closed-form laws") {
    const Parameters p = Parameters::make(0.5, 1e-3);
    const double L = p.log_b();
    CHECK(refinement_constant(0) == doctest::Approx(std::log(2.0) - kEulerGamma));
    CHECK(predicted_eigenvalue(p, 1, 1) == doctest::Approx(2 * p.b * (1.0 / L)));
    CHECK(predicted_eigenvalue(p, 0, 2) ==
          doctest::Approx(2 * p.b * (1 + 1 / L + (std::log(2.0) - kEulerGamma) / (L * L))));
    CHECK(predicted_lambda_b_form(0.5, 1e-3, 0) == doctest::Approx(predicted_eigenvalue(p, 0, 2) / 1e-6));
    // splitting ln b = ln beta + 2 ln nu changes the law only at order |ln nu|^-3
    for (double nu : {1e-3, 1e-5, 1e-8}) {
      const double l = std::abs(std::log(nu));
      for (int n = 0; n <= 1; ++n)
        CHECK(std::abs(predicted_lambda_b_form(0.5, nu, n) - predicted_lambda_nu_form(0.5, nu, n)) * l * l * l < 1.0);
    }
  }

  TEST_CASE("matched and direct eigenvalues agree") {
    const Parameters p = Parameters::make(0.5, 1e-4);
    const double L = std::abs(p.log_b());
    const auto d = direct_spectrum(p, 3);
    for (int n = 0; n <= 2; ++n) {
      const auto e = solve_eigenvalue(p, n);
      CHECK(std::abs(e.alpha - d.eigenvalues[n]) * L * L / (2 * p.b) < 1.0);
      CHECK(sign_changes(e.glued.phi.values) == n);
    }
  }

  TEST_CASE("guard on b") { CHECK_THROWS_AS(solve_eigenvalue(Parameters::make(0.5, 0.1), 0), Error); }
}
