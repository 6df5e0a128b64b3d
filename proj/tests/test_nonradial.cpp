#include <doctest.h>

#include <cmath>

#include "ksspec/error.hpp"
#include "ksspec/nonradial.hpp"

using namespace ksspec;

namespace {

HarmonicField single(double b, GridPtr g, int k, auto&& a, auto&& da) {
  HarmonicField u;
  u.b = b;
  u.grid = g;
  HarmonicComponent c;
  c.k = k;
  for (double r : g->nodes()) {
    c.a.push_back(a(r));
    c.da.push_back(da(r));
  }
  u.parts.push_back(std::move(c));
  return u;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("nonradial") {
  TEST_CASE("harmonic Poisson solve reproduces a closed-form potential") {
    // Phi = r e^{-r^2} on k = 1 has -Delta^{(1)} Phi = (8r - 4r^3) e^{-r^2}
    auto g = make_grid(1e-4, 12.0, 4000);
    std::vector<double> u(g->size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = (*g)[i];
      u[i] = (8.0 * r - 4.0 * r * r * r) * std::exp(-r * r);
    }
    const auto p = poisson_harmonic(1, *g, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = (*g)[i];
      CHECK(std::abs(p.phi[i] - r * std::exp(-r * r)) < 1e-9);
      CHECK(std::abs(p.dphi[i] - (1.0 - 2.0 * r * r) * std::exp(-r * r)) < 1e-8);
    }
    CHECK(poisson_residual(1, *g, u, p) < 1e-7);
  }

  TEST_CASE("Phi on k = 2 decays like r^-2 outside the support") {
    auto g = make_grid(1e-4, 200.0, 4000);
    std::vector<double> u(g->size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::pow((*g)[i], 2) * std::exp(-(*g)[i] * (*g)[i]);
    const auto p = poisson_harmonic(2, *g, u);
    // outside, Phi = (1/4) r^-2 int s^3 u ds = (1/4) r^-2 * 1
    const std::size_t i = g->locate(50.0);
    CHECK(p.phi[i] * (*g)[i] * (*g)[i] == doctest::Approx(0.25).epsilon(1e-7));
  }

  TEST_CASE("translation modes lie in the kernel of the untruncated M") {
    auto g = nonradial_grid(1e-3);
    const auto t = translation_mode(1e-3, g, false);
    const auto m = M_apply(t, false);
    std::vector<double> ratio(g->size());
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      const double r = (*g)[i];
      ratio[i] = t.parts[0].a[i] * (1.0 + r * r) * (1.0 + r * r) / 8.0;
    }
    CHECK(max_abs(m.parts[0].a) < 1e-7 * max_abs(ratio));
    // the truncated quotient is small on the weighted mode
    const auto tw = translation_mode(1e-3, g, true);
    const auto q = quadratic_forms(tw, false);
    CHECK(std::abs(q.full) / q.grad_norm < 1e-6);
  }

  TEST_CASE("quadratic forms: identity, direct assembly and sign of the coercive part") {
    for (double b : {1e-3, 1e-5}) {
      auto g = nonradial_grid(b);
      for (std::uint64_t t = 0; t < 6; ++t) {
        auto rng = trial_rng(11, t);
        auto u = random_field(b, g, 3, rng);
        project_translations(u, true);
        const auto pr = translation_projections(u, true);
        const auto q = quadratic_forms(u, true);
        CHECK(std::abs(pr[0]) + std::abs(pr[1]) < 1e-10 * std::sqrt(l2_omega_norm(u)));
        CHECK(std::abs(q.full - q.full_direct) < 1e-5 * std::abs(q.full_direct));
        CHECK(std::abs(q.full - q.full_identity) < 1e-6 * std::abs(q.full));
        CHECK(q.full == doctest::Approx(q.F + q.G + 2 * b * q.inner_star).epsilon(1e-12));
        CHECK(q.F == doctest::Approx(q.F_terms[0] + q.F_terms[1] + q.F_terms[2] + q.F_terms[3]).epsilon(1e-12));
        CHECK(q.full / q.grad_norm > 0.0);
        CHECK(q.inner_star > 0.0);
      }
    }
  }

  TEST_CASE("mixed inner product is symmetric") {
    const double b = 1e-3;
    auto g = nonradial_grid(b);
    auto r1 = trial_rng(3, 0), r2 = trial_rng(3, 1);
    auto u = random_field(b, g, 2, r1), v = random_field(b, g, 2, r2);
    const double uv = mixed_inner_product(u, v), vu = mixed_inner_product(v, u);
    CHECK(std::abs(uv - vu) < 1e-8 * std::sqrt(mixed_inner_product(u, u) * mixed_inner_product(v, v)));
  }

  TEST_CASE("truncated Poisson field satisfies its PDE") {
    const double b = 1e-3;
    auto g = nonradial_grid(b);
    auto rng = trial_rng(4, 0);
    const auto u = random_field(b, g, 3, rng);
    const double r12 = truncated_identity_residual(u, truncated_poisson(u));
    CHECK(r12 < 1e-6);
    auto g2 = nonradial_grid(b, 6000);
    auto rng2 = trial_rng(4, 0);
    const auto u2 = random_field(b, g2, 3, rng2);
    // fourth-order differencing: halving the spacing gains well over a factor 8
    CHECK(truncated_identity_residual(u2, truncated_poisson(u2)) > 8.0 * r12);
  }

  TEST_CASE("zeta form: quadratic forms scale by nu^4, L2 quantities by nu^6") {
    const double b = 1e-3, nu = 0.05;
    auto g = nonradial_grid(b);
    auto rng = trial_rng(9, 2);
    auto u = random_field(b, g, 2, rng);
    project_translations(u, true);
    const auto z = to_zeta_form(u, nu);
    const double n4 = std::pow(nu, 4);
    CHECK(gradient_norm(z) == doctest::Approx(n4 * gradient_norm(u)).epsilon(1e-10));
    // s^2 / U_s picks up nu^4 and dy another nu^2; the 2 beta <u,u>_* term keeps the nu^4 of the form
    CHECK(l2_omega_norm(z) == doctest::Approx(n4 * nu * nu * l2_omega_norm(u)).epsilon(1e-10));
    CHECK(mixed_inner_product(z, z) == doctest::Approx(n4 * nu * nu * mixed_inner_product(u, u)).epsilon(1e-8));
    CHECK(quadratic_forms(z, false).full == doctest::Approx(n4 * quadratic_forms(u, false).full).epsilon(1e-8));
  }

  TEST_CASE("far-field bumps: F approaches the Dirichlet energy") {
    const double b = 1e-5;
    auto g = nonradial_grid(b);
    double last = 1.0;
    for (double R : {5.0, 20.0, 50.0}) {
      const auto q = quadratic_forms(bump_field(b, g, 2, R), false);
      const double err = std::abs(q.F / q.grad_norm - 1.0);
      CHECK(err < 0.1);
      CHECK(err < last);
      last = err;
    }
  }

  TEST_CASE("inequality ratios are finite, alpha = 0 form equals the L2 Hardy form") {
    const double b = 1e-3;
    auto g = nonradial_grid(b);
    auto u = single(b, g, 1, [](double r) { return r * std::exp(-r * r); },
                    [](double r) { return (1.0 - 2.0 * r * r) * std::exp(-r * r); });
    const auto checks = inequality_ratios(u);
    double h0 = NAN, l2 = NAN;
    for (const auto& c : checks) {
      CAPTURE(c.name);
      CHECK(std::isfinite(c.value));
      if (c.name == "generalisedhardy_alpha0") h0 = c.value;
      if (c.name == "hardyL2rho") l2 = c.value;
      if (c.lower) CHECK(c.value > 0.0);
    }
    CHECK(h0 == doctest::Approx(l2).epsilon(1e-14));
  }

  TEST_CASE("coercivity scan on a few fields") {
    const auto rep = coercivity_scan(1e-3, 2, 4, 42, 8000);
    CHECK(rep.min_quotient > 0.0);
    CHECK(rep.min_quotient <= rep.mean_quotient);
    CHECK(rep.mean_quotient <= rep.max_quotient);
    CHECK(rep.min_quotient_by_K.size() == 2);
    CHECK(rep.max_identity_mismatch < 1e-6);
    CHECK(rep.min_inner_ratio > 0.0);
  }

  TEST_CASE("validation of fields and arguments") {
    auto g = nonradial_grid(1e-3);
    CHECK_THROWS_AS(nonradial_grid(0.1), Error);
    auto u = single(1e-3, g, 0, [](double r) { return std::exp(-r * r); },
                    [](double r) { return -2 * r * std::exp(-r * r); });
    CHECK_THROWS_AS(u.validate(), Error);
    CHECK_THROWS_AS(coercivity_scan(1e-3, 7, 1, 1), Error);
  }
}
