#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ibspline/detail/dense_solve.hpp"
#include "ibspline/spline.hpp"

using namespace ibs;

namespace {

// Exact solutions of the constraint system as fractions, derived symbolically
// outside this code base.
struct Exact {
  double p1, p2;
  std::array<double, 12> c;
};

const Exact kExact[] = {
    {0.25, 0.925, {0, 0, 0, 160.0 / 37, 10.0 / 81, -40.0 / 27, 160.0 / 27, -10720.0 / 2997, -151.0 / 9, 160.0 / 3, -160.0 / 3, 160.0 / 9}},
    {0.1, 0.9, {0, 0, 0, 100.0 / 9, 1.0 / 72, -5.0 / 12, 25.0 / 6, -25.0 / 9, -91.0 / 9, 100.0 / 3, -100.0 / 3, 100.0 / 9}},
    {0.2, 0.8, {0, 0, 0, 25.0 / 4, 1.0 / 12, -5.0 / 4, 25.0 / 4, -25.0 / 6, -21.0 / 4, 75.0 / 4, -75.0 / 4, 25.0 / 4}},
    {0.3, 0.7, {0, 0, 0, 100.0 / 21, 9.0 / 28, -45.0 / 14, 75.0 / 7, -50.0 / 7, -79.0 / 21, 100.0 / 7, -100.0 / 7, 100.0 / 21}},
    {0.4, 0.6, {0, 0, 0, 25.0 / 6, 4.0 / 3, -10, 25, -50.0 / 3, -19.0 / 6, 25.0 / 2, -25.0 / 2, 25.0 / 6}},
    {0.1, 0.7, {0, 0, 0, 100.0 / 7, 1.0 / 54, -5.0 / 9, 50.0 / 9, -800.0 / 189, -73.0 / 27, 100.0 / 9, -100.0 / 9, 100.0 / 27}},
    {0.1, 0.5, {0, 0, 0, 20, 1.0 / 36, -5.0 / 6, 25.0 / 3, -70.0 / 9, -11.0 / 9, 20.0 / 3, -20.0 / 3, 20.0 / 9}},
    {0.1, 0.3, {0, 0, 0, 100.0 / 3, 1.0 / 18, -5.0 / 3, 50.0 / 3, -200.0 / 9, -37.0 / 63, 100.0 / 21, -100.0 / 21, 100.0 / 63}},
};

}  // namespace

TEST_CASE("cubic coefficients match exact rational solutions") {
  for (const auto& e : kExact) {
    const auto c = solve_cubic_coeffs(e.p1, e.p2).flat();
    for (std::size_t i = 0; i < 12; ++i) CHECK(c[i] == doctest::Approx(e.c[i]).epsilon(1e-12));
  }
}

TEST_CASE("constraint residuals vanish for random knots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int n = 0; n < 200; ++n) {
    double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 0.02) continue;
    if (a > b) std::swap(a, b);
    const auto c = solve_cubic_coeffs(a, b);
    for (double r : constraint_residuals(c)) CHECK(std::abs(r) <= 1e-9);
  }
}

TEST_CASE("g endpoints, continuity of derivatives at knots") {
  const auto c = solve_cubic_coeffs(0.25, 0.925);
  CHECK(eval_g(c, 0.0) == doctest::Approx(0.0));
  CHECK(eval_g(c, 1.0) == doctest::Approx(1.0));
  const auto d0 = eval_g_derivs(c, 0.0), d1 = eval_g_derivs(c, 1.0);
  CHECK(std::abs(d0.dg) < 1e-12);
  CHECK(std::abs(d0.ddg) < 1e-12);
  CHECK(std::abs(d1.dg) < 1e-9);
  CHECK(std::abs(d1.ddg) < 1e-9);
  for (double k : {c.p1(), c.p2()}) {
    const std::size_t lo = c.segment_of(k);
    const auto l = c.eval_segment(lo, k), r = c.eval_segment(lo + 1, k);
    CHECK(l.g == doctest::Approx(r.g).epsilon(1e-12));
    CHECK(l.dg == doctest::Approx(r.dg).epsilon(1e-12));
    CHECK(l.ddg == doctest::Approx(r.ddg).epsilon(1e-12));
  }
}

TEST_CASE("symmetric knots give g(t) + g(1-t) = 1") {
  for (double p : {0.1, 0.2, 0.3, 0.4}) {
    const auto c = solve_cubic_coeffs(p, 1.0 - p);
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      CHECK(eval_g(c, t) + eval_g(c, 1.0 - t) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("g is monotone for the published knots") {
  for (const auto& e : kExact) {
    const auto c = solve_cubic_coeffs(e.p1, e.p2);
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double g = eval_g(c, i / 1000.0);
      CHECK(g >= prev - 1e-12);
      prev = g;
    }
  }
}

TEST_CASE("invalid knots and out-of-range t") {
  CHECK_THROWS_AS(solve_cubic_coeffs(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(solve_cubic_coeffs(0.6, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(solve_cubic_coeffs(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(solve_cubic_coeffs(0.2, 1.0), std::invalid_argument);
  const auto c = solve_cubic_coeffs(0.1, 0.9);
  CHECK_THROWS_AS(eval_g(c, -0.01), std::out_of_range);
  CHECK_THROWS_AS(eval_g(c, 1.01), std::out_of_range);
}

TEST_CASE("dense solver: known system and singular matrix") {
  std::array<std::array<double, 3>, 3> a{{{0, 2, 1}, {1, 1, 1}, {2, 1, 0}}};
  const auto x = solve_dense<3>(a, {5, 4, 4});  // x = (1, 2, 1)
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  CHECK(x[2] == doctest::Approx(1.0));
  std::array<std::array<double, 2>, 2> s{{{1, 2}, {2, 4}}};
  CHECK_THROWS_AS(solve_dense<2>(s, {1, 2}), std::runtime_error);
}

TEST_CASE("blend_states") {
  const PointList a{{0, 0}, {1, 1}}, b{{2, 0}, {1, 3}};
  CHECK(blend_states(a, b, 0.0) == a);
  CHECK(blend_states(a, b, 1.0) == b);
  const auto m = blend_states(a, b, 0.25);
  CHECK(m[0].x == doctest::Approx(0.5));
  CHECK(m[1].y == doctest::Approx(1.5));
  CHECK_THROWS_AS(blend_states(a, PointList{{0, 0}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(blend_states(a, b, 1.5), std::invalid_argument);
}

TEST_CASE("blend profile weights") {
  const auto lin = BlendProfile::linear();
  CHECK(lin.weight(0.3) == doctest::Approx(0.3));
  const auto cub = BlendProfile::cubic(0.25, 0.925);
  CHECK(cub.weight(0.0) == 0.0);
  CHECK(cub.weight(1.0) == 1.0);
  CHECK(cub.weight(0.5) == doctest::Approx(eval_g(*cub.interpolant(), 0.5)));
}

TEST_CASE("phase schedule: boundaries, rest and wrap") {
  const PhaseSchedule s({{1.0, false, 0, 1}, {0.5, true, 0, 0}, {2.0, false, 1, 0}}, BlendProfile::linear());
  CHECK(s.period() == doctest::Approx(3.5));
  CHECK(s.phase_start(2) == doctest::Approx(1.5));

  auto at = locate_phase(s, 0.5);
  CHECK(at.index == 0);
  CHECK(at.t_norm == doctest::Approx(0.5));
  at = locate_phase(s, 1.0);  // boundary goes to the later phase
  CHECK(at.index == 1);
  CHECK(at.rest);

  auto b = scheduled_blend(s, 1.2);  // rest holds phase 0's endpoint
  CHECK(b.to == 1);
  CHECK(b.weight == doctest::Approx(1.0));

  b = scheduled_blend(s, 2.5);
  CHECK(b.from == 1);
  CHECK(b.to == 0);
  CHECK(b.weight == doctest::Approx(0.5));

  const auto w0 = scheduled_blend(s, 0.25), w1 = scheduled_blend(s, 0.25 + 3.5 * 4);
  CHECK(w0.weight == doctest::Approx(w1.weight));
  CHECK(w0.from == w1.from);
  CHECK_THROWS_AS(locate_phase(s, -1.0), std::invalid_argument);
}

TEST_CASE("one-shot schedule clamps to the final state") {
  const PhaseSchedule s({{1.0, false, 0, 1}, {1.0, false, 1, 2}}, BlendProfile::cubic(0.25, 0.925), false);
  const auto b = scheduled_blend(s, 10.0);
  CHECK(b.to == 2);
  CHECK(b.weight == 1.0);
}
