#include <doctest.h>

#include <cmath>
#include <random>

#include "ibspline/fibers.hpp"

using namespace ibs;

namespace {

PointList random_chain(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 0.05);
  PointList x;
  Vec2 p{0.3, 0.4};
  for (std::size_t k = 0; k < n; ++k) {
    x.push_back(p);
    p += Vec2{0.03 + g(rng), g(rng)};
  }
  return x;
}

// Spring energy written independently of the force routine.
double spring_energy(const PointList& x, const SpringSet& springs) {
  double e = 0.0;
  for (const auto& s : springs) {
    const double l = norm(x[s.master] - x[s.slave]);
    e += 0.5 * s.stiffness * (l - s.rest_length) * (l - s.rest_length);
  }
  return e;
}

template <typename Energy>
std::vector<Vec2> fd_gradient(PointList x, Energy&& energy, double h) {
  std::vector<Vec2> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (int c = 0; c < 2; ++c) {
      double& v = c == 0 ? x[k].x : x[k].y;
      const double v0 = v;
      v = v0 + h;
      const double ep = energy(x);
      v = v0 - h;
      const double em = energy(x);
      v = v0;
      (c == 0 ? g[k].x : g[k].y) = (ep - em) / (2 * h);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("target force pulls toward the target") {
  const PointList x{{0, 0}, {1, 1}};
  const TargetSet t{{1, 10.0, {2, 1}}};
  const auto f = target_force(x, t);
  CHECK(f[0] == Vec2{0, 0});
  CHECK(f[1] == Vec2{10, 0});
}

TEST_CASE("spring force: equal and opposite, zero at rest length") {
  const PointList x{{0, 0}, {2, 0}};
  auto f = spring_force(x, {{0, 1, 3.0, 2.0}});
  CHECK(norm(f[0]) == 0.0);
  f = spring_force(x, {{0, 1, 3.0, 1.0}});
  CHECK(f[0].x == doctest::Approx(3.0));  // stretched: master pulled toward slave
  CHECK(f[1].x == doctest::Approx(-3.0));
  CHECK_THROWS_AS(spring_force(PointList{{1, 1}, {1, 1}}, {{0, 1, 1.0, 0.5}}), std::domain_error);
  CHECK_NOTHROW(spring_force(PointList{{1, 1}, {1, 1}}, {{0, 1, 1.0, 0.0}}));
}

TEST_CASE("spring force is the negative energy gradient") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_chain(rng, 8);
    const auto springs = chain_springs(8, 1234.0, 0.025);
    const auto f = spring_force(x, springs);
    const auto g = fd_gradient(x, [&](const PointList& y) { return spring_energy(y, springs); }, 1e-6);
    for (std::size_t k = 0; k < x.size(); ++k) {
      CHECK(f[k].x == doctest::Approx(-g[k].x).epsilon(1e-6).scale(1.0));
      CHECK(f[k].y == doctest::Approx(-g[k].y).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("beam force is the negative energy gradient") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_chain(rng, 10);
    CurvatureState c(8);
    for (auto& v : c) v = {g(rng), g(rng)};
    const auto beams = chain_beams(10, 5e3, c);
    const auto f = beam_force(x, beams);
    const auto grad = fd_gradient(x, [&](const PointList& y) { return beam_energy(y, beams); }, 1e-6);
    double scale = 0.0;
    for (const auto& v : f) scale = std::max(scale, norm(v));
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(norm(f[k] + grad[k]) <= 1e-6 * scale);
  }
}

TEST_CASE("element forces are momentum-free; straight beams are torque-free") {
  std::mt19937_64 rng(5);
  const auto x = random_chain(rng, 12);
  CurvatureState c(10, Vec2{0.001, -0.002});
  for (const auto& b : chain_beams(12, 7.0, c)) {
    const auto f = beam_force(x, {b});
    const Vec2 sum = f[b.left] + f[b.mid] + f[b.right];
    CHECK(sum.x == 0.0);
    CHECK(sum.y == 0.0);
  }
  for (const auto& s : chain_springs(12, 9.0, 0.02)) {
    const auto f = spring_force(x, {s});
    CHECK(f[s.master].x == -f[s.slave].x);
    CHECK(f[s.master].y == -f[s.slave].y);
  }
  // With zero preferred curvature the bending forces exert no net torque.
  const auto f = beam_force(x, chain_beams(12, 7.0, CurvatureState(10)));
  double torque = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    torque += cross(x[k], f[k]);
    scale += norm(x[k]) * norm(f[k]);
  }
  CHECK(std::abs(torque) <= 1e-12 * scale);
}

TEST_CASE("validate rejects malformed models") {
  FiberModel m;
  m.springs = {{0, 5, 1.0, 0.1}};
  CHECK_THROWS_AS(validate(m, 3), std::invalid_argument);
  m.springs = {{1, 1, 1.0, 0.1}};
  CHECK_THROWS_AS(validate(m, 3), std::invalid_argument);
  m.springs = {};
  m.beams = {{0, 2, 1, 1.0, {}}};
  CHECK_THROWS_AS(validate(m, 3), std::invalid_argument);
  m.beams = {{0, 1, 2, -1.0, {}}};
  CHECK_THROWS_AS(validate(m, 3), std::invalid_argument);
  m.beams = {{0, 1, 2, 1.0, {}}};
  CHECK_NOTHROW(validate(m, 3));
}

TEST_CASE("prescription updates follow the schedule") {
  const std::vector<PointList> states{{{0, 0}, {1, 0}}, {{1, 0}, {2, 0}}};
  const PhaseSchedule sched({{1.0, false, 0, 1}, {1.0, false, 1, 0}}, BlendProfile::cubic(0.1, 0.9));
  const auto t0 = update_target_positions(tether_all(states[0], 1.0), sched, states, 0.0);
  CHECK(t0[1].position == Vec2{1, 0});
  const auto t1 = update_target_positions(t0, sched, states, 1.0);
  CHECK(t1[0].position == Vec2{1, 0});
  const auto th = update_target_positions(t0, sched, states, 0.5);
  CHECK(th[0].position.x == doctest::Approx(0.5));  // symmetric knots: g(1/2) = 1/2

  const std::vector<CurvatureState> curv{{{0, 1}}, {{0, -1}}};
  const auto b = chain_beams(3, 1.0, curv[0]);
  CHECK(update_beam_curvatures(b, sched, curv, 1.0)[0].curvature == Vec2{0, -1});
  CHECK(update_beam_curvatures(b, sched, curv, 2.0)[0].curvature == Vec2{0, 1});
  CHECK(update_beam_curvatures(b, sched, curv, 4.0)[0].curvature == Vec2{0, 1});
}
