#include <doctest.h>

#include <cmath>
#include <random>

#include "ksspec/error.hpp"
#include "ksspec/grid.hpp"
#include "ksspec/radial_core.hpp"

using namespace ksspec;

TEST_SUITE("grid") {
  TEST_CASE("quadrature and cumulative sums are exact for cubics") {
    auto g = make_grid(1e-3, 50.0, 400, 5.0);
    std::vector<double> f(g->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow((*g)[i], 3) - 2.0 * (*g)[i];
    auto F = [](double r) { return 0.25 * std::pow(r, 4) - r * r; };
    const double a = g->front(), b = g->back();
    CHECK(std::abs(g->integrate(f) - (F(b) - F(a))) < 1e-9 * std::abs(F(b)));
    const auto c = g->cumulative(f);
    const auto t = g->tail_cumulative(f);
    for (std::size_t i = 0; i < f.size(); i += 37) {
      CHECK(std::abs(c[i] - (F((*g)[i]) - F(a))) < 1e-9 * std::abs(F(b)));
      CHECK(std::abs(t[i] - (F(b) - F((*g)[i]))) < 1e-9 * std::abs(F(b)));
    }
  }

  TEST_CASE("tail sums keep relative accuracy for small tails") {
    auto g = make_grid(1e-2, 40.0, 8000);
    std::vector<double> f(g->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-(*g)[i]);
    const auto t = g->tail_cumulative(f);
    const double r = (*g)[g->size() - 50];
    CHECK(std::abs(t[g->size() - 50] / (std::exp(-r) - std::exp(-g->back())) - 1.0) < 1e-7);
  }

  TEST_CASE("derivatives exact for quartics") {
    auto g = make_grid(0.1, 10.0, 200);
    std::vector<double> f(g->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow((*g)[i], 4);
    const auto d = g->derivative(f), d2 = g->second_derivative(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = (*g)[i];
      CHECK(std::abs(d[i] - 4 * r * r * r) < 1e-8 * (1 + 4 * r * r * r));
      CHECK(std::abs(d2[i] - 12 * r * r) < 1e-6 * (1 + 12 * r * r));
    }
  }

  TEST_CASE("grid construction errors") {
    CHECK_THROWS_AS(RadialGrid(std::vector<double>{0.1, 0.2, 0.3}), Error);
    CHECK_THROWS_AS(RadialGrid(std::vector<double>{1, 2, 3, 4, 5, 7, 6}), Error);
  }

  TEST_CASE("sign changes") {
    CHECK(sign_changes({1.0, 0.0, -1.0, -2.0, 3.0}) == 2);
    CHECK(sign_changes({1.0, -1e-20, 1.0}, 1e-15) == 0);
  }
}

TEST_SUITE("radial_core") {
  TEST_CASE("stationary profiles against closed forms") {
    for (double r : {1e-3, 0.3, 1.0, 4.0, 100.0}) {
      const Profiles s = stationary_profiles(r);
      const double d = 1.0 + r * r;
      CHECK(s.U == doctest::Approx(8.0 / (d * d)).epsilon(1e-14));
      CHECK(s.Q == doctest::Approx(4.0 * r * r / d).epsilon(1e-14));
      CHECK(s.psi0 == doctest::Approx(r * r / (d * d)).epsilon(1e-14));
      CHECK(s.dpsi0 == doctest::Approx(2.0 * r * (1.0 - r * r) / (d * d * d)).epsilon(1e-12));
    }
    CHECK(stationary_profiles(1e-8).psi0_tilde == doctest::Approx(-1.0).epsilon(1e-10));
  }

  TEST_CASE("Wronskian of psi0, psi0~ times (1 + r^2)^2 / r is constant") {
    const Profiles one = stationary_profiles(1.0);
    const double w1 = (one.psi0 * one.dpsi0_tilde - one.dpsi0 * one.psi0_tilde) * 4.0;
    for (double r : {1e-3, 0.05, 0.5, 2.0, 30.0, 1e3}) {
      const Profiles s = stationary_profiles(r);
      const double w = (s.psi0 * s.dpsi0_tilde - s.dpsi0 * s.psi0_tilde) * (1 + r * r) * (1 + r * r) / r;
      CHECK(w == doctest::Approx(w1).epsilon(1e-10));
    }
  }

  TEST_CASE("A0 annihilates psi0 and psi0~ on [0.05, 20]") {
    auto g = make_grid(0.01, 40.0, 4000);
    for (int which = 0; which < 2; ++which) {
      const auto f = RadialGridFunction::sample(g, [&](double r) {
        const Profiles s = stationary_profiles(r);
        return which ? s.psi0_tilde : s.psi0;
      });
      const auto a = apply_A0(f);
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = (*g)[i];
        if (r < 0.05 || r > 20.0) continue;
        const Profiles s = stationary_profiles(r);
        const double v = which ? s.psi0_tilde : s.psi0, dv = which ? s.dpsi0_tilde : s.dpsi0;
        CHECK(std::abs(a[i]) <= 1e-7 * (std::abs(v) / (r * r) + std::abs(dv) / r + s.U * std::abs(v)));
      }
    }
  }

  TEST_CASE("partial mass of U equals Q") {
    auto g = make_grid(1e-4, 1e3, 6000);
    const auto m = partial_mass(RadialGridFunction::sample(g, [](double r) { return U_of(r); }));
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(std::abs(m[i] - stationary_profiles((*g)[i]).Q) < 1e-10);
  }

  TEST_CASE("apply_A0 o invert_A0 is the identity") {
    auto g = make_grid(1e-4, 60.0, 4000);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int t = 0; t < 10; ++t) {
      const double c0 = n(rng), c1 = n(rng), w = 0.5 + std::abs(n(rng));
      const auto f = RadialGridFunction::sample(g, [&](double r) { return (c0 + c1 * r) * std::exp(-r * r / (w * w)); });
      std::vector<double> du;
      const auto u = invert_A0(f, &du);
      const auto back = apply_A0(u);
      double e = 0.0, m = 0.0, ed = 0.0;
      const auto dnum = g->derivative(u.values);
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = (*g)[i];
        if (r < 1e-2 || r > 20.0) continue;
        e = std::max(e, std::abs(back[i] - f[i]));
        m = std::max(m, std::abs(f[i]));
        ed = std::max(ed, std::abs(du[i] - dnum[i]) / (1.0 + std::abs(du[i])));
      }
      CHECK(e < 1e-7 * m);
      CHECK(ed < 1e-7);
    }
  }

  TEST_CASE("invert_A0 of a pure kernel-free image recovers f exactly at the origin scale") {
    // f = A0 (r^2 e^{-r^2}) vanishes like r^0; its preimage with the built-in limits is
    // r^2 e^{-r^2} up to c psi0 + d psi0~, and regularity at 0 forces d = 0.
    auto g = make_grid(1e-4, 40.0, 4000);
    const auto u0 = RadialGridFunction::sample(g, [](double r) { return r * r * std::exp(-r * r); });
    const auto u = invert_A0(apply_A0(u0));
    const double c = (u[0] - u0[0]) / stationary_profiles((*g)[0]).psi0;
    for (std::size_t i = 0; i < g->size(); i += 97) {
      const double r = (*g)[i];
      if (r > 10.0) break;
      CHECK(std::abs(u[i] - u0[i] - c * stationary_profiles(r).psi0) < 1e-7);
    }
  }

  TEST_CASE("tail recurrence with the closed-form seed") {
    std::vector<double> dhat, d;
    tail_recurrence(3, dhat, d);
    // T_{j+1} ~ r^{2j}(a ln r + c): leading balance of f'' + 3 f'/r = -T_j
    CHECK(dhat[1] == doctest::Approx(-0.5));
    CHECK(d[1] == doctest::Approx(0.5));
    CHECK(dhat[2] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(d[2] == doctest::Approx(-7.0 / 64.0).epsilon(1e-14));
    CHECK(dhat[3] == doctest::Approx(-1.0 / 384.0).epsilon(1e-14));
    CHECK(d[3] == doctest::Approx(13.0 / 2304.0).epsilon(1e-14));
  }

  TEST_CASE("kernel table: T_0 = psi0, -A0 T_{j+1} = T_j, origin behaviour, tail fits") {
    const KernelTable& t = default_kernel_table();
    REQUIRE(t.j_max >= 3);
    for (std::size_t i = 0; i < t.grid->size(); i += 211)
      CHECK(t.T[0][i] == doctest::Approx(stationary_profiles((*t.grid)[i]).psi0).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) {
      const auto a = apply_A0(t.T[j + 1]);
      for (std::size_t i = 0; i < t.grid->size(); ++i) {
        const double r = (*t.grid)[i];
        if (r < 1e-2 || r > 20.0) continue;
        CHECK(std::abs(a[i] + t.T[j][i]) < 1e-6 * (1.0 + std::abs(t.T[j][i])) * std::pow(1 + r, 2 * j));
      }
    }
    for (int j = 0; j <= t.j_max; ++j) {
      const double ref = t.T[j][0] / (t.grid->front() * t.grid->front());
      for (std::size_t i = 0; (*t.grid)[i] < 1e-2; ++i) {
        const double r = (*t.grid)[i];
        CHECK(std::abs(t.T[j][i] / (r * r)) <= 1.01 * std::abs(ref));
      }
    }
    CHECK(t.dhat_fit[2] == doctest::Approx(1.0 / 16.0).epsilon(0.02));
    CHECK(t.dhat_fit[3] == doctest::Approx(-t.dhat_fit[2] / 24.0).epsilon(0.05));
    CHECK(t.d_fit[2] == doctest::Approx(-7.0 / 64.0).epsilon(0.05));
    CHECK(cnj(3, 2) == doctest::Approx(4.0 * 6.0));
    CHECK(cnj(1, 2) == 0.0);
  }

  TEST_CASE("Parameters") {
    const Parameters p = Parameters::make(0.5, 1e-3);
    CHECK(p.b == doctest::Approx(0.5e-6));
    CHECK(p.R0 == doctest::Approx(0.1 / std::sqrt(0.5e-6)));
    CHECK(p.z0 == doctest::Approx(0.005));
    CHECK_THROWS_AS(Parameters::make(-1.0, 1e-3), Error);
    CHECK_THROWS_AS(Parameters::make(0.5, 0.0), Error);
  }
}
