#include <doctest.h>

#include <cmath>
#include <random>

#include "ibspline/coupling.hpp"

using namespace ibs;

TEST_CASE("phi: support, continuity and moments") {
  CHECK(phi(0.0) == doctest::Approx(0.5));
  CHECK(phi(2.0) == 0.0);
  CHECK(phi(-2.5) == 0.0);
  CHECK(phi(1.0 - 1e-12) == doctest::Approx(phi(1.0 + 1e-12)));
  CHECK(phi(2.0 - 1e-9) < 1e-4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 200; ++n) {
    const double r = u(rng);
    CHECK(phi(r) == phi(-r));
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, se = 0.0, so = 0.0;
    for (int j = -4; j <= 4; ++j) {
      const double w = phi(r - j);
      s0 += w;
      s1 += (r - j) * w;
      s2 += w * w;
      (j % 2 == 0 ? se : so) += w;
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(s1) < 1e-13);
    CHECK(s2 == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
    CHECK(se == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(so == doctest::Approx(0.5).epsilon(1e-13));
  }
}

TEST_CASE("stencil wraps periodically") {
  const Grid g{8, 8, 1.0, 1.0};
  const auto st = stencil(g, {0.01, 0.99});
  CHECK(st.ix[0] == 7);
  CHECK(st.ix[1] == 0);
  CHECK(st.iy[2] == 0);
  const auto far = stencil(g, {1.01, 1.99});  // same node modulo the period
  for (int a = 0; a < 4; ++a) {
    CHECK(far.ix[a] == st.ix[a]);
    CHECK(far.iy[a] == st.iy[a]);
    CHECK(far.wx[a] == doctest::Approx(st.wx[a]));
    CHECK(far.wy[a] == doctest::Approx(st.wy[a]));
  }
}

TEST_CASE("spreading conserves total force") {
  const Grid g{32, 32, 1.0, 1.0};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointList x(20);
  std::vector<Vec2> f(20);
  Vec2 total{};
  const double ds = 0.01;
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = {u(rng), u(rng)};
    f[k] = {u(rng) - 0.5, u(rng) - 0.5};
    total += ds * f[k];
  }
  std::vector<double> fx, fy;
  spread_forces(f, x, ds, g, fx, fy);
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    sx += fx[k] * g.h() * g.h();
    sy += fy[k] * g.h() * g.h();
  }
  CHECK(sx == doctest::Approx(total.x).epsilon(1e-12));
  CHECK(sy == doctest::Approx(total.y).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces constant and linear-in-period fields") {
  const Grid g{16, 16, 1.0, 1.0};
  std::vector<double> u(g.size(), 2.5), v(g.size(), -1.0);
  const auto U = interp_velocity(u, v, {{0.13, 0.77}, {0.99, 0.01}}, g);
  for (const auto& w : U) {
    CHECK(w.x == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(w.y == doctest::Approx(-1.0).epsilon(1e-14));
  }
}

TEST_CASE("spread and interpolation are adjoint") {
  const Grid g{24, 24, 1.0, 1.0};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    PointList x(7);
    std::vector<Vec2> f(7);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = {u(rng), u(rng)};
      f[k] = {u(rng) - 0.5, u(rng) - 0.5};
    }
    std::vector<double> uu(g.size()), vv(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      uu[k] = u(rng) - 0.5;
      vv[k] = u(rng) - 0.5;
    }
    const double ds = 0.02;
    std::vector<double> fx, fy;
    spread_forces(f, x, ds, g, fx, fy);
    double grid_side = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) grid_side += (fx[k] * uu[k] + fy[k] * vv[k]) * g.h() * g.h();
    const auto U = interp_velocity(uu, vv, x, g);
    double lag_side = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) lag_side += dot(f[k], U[k]) * ds;
    CHECK(std::abs(grid_side - lag_side) <= 1e-12 * (std::abs(grid_side) + 1e-3));
  }
}

TEST_CASE("non-finite inputs are rejected") {
  const Grid g{8, 8, 1.0, 1.0};
  std::vector<double> fx, fy;
  CHECK_THROWS(spread_forces({{NAN, 0.0}}, {{0.5, 0.5}}, 0.1, g, fx, fy));
  CHECK_THROWS(spread_forces({{1.0, 0.0}}, {{INFINITY, 0.5}}, 0.1, g, fx, fy));
}
