#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "ibspline/coupling.hpp"
#include "ibspline/engine.hpp"
#include "ibspline/io.hpp"

using namespace ibs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("ibspline_engine_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scene single_target(Vec2 x, Vec2 y, double k, double ds) {
  Scene sc;
  sc.mesh.points = {x};
  sc.mesh.ds = ds;
  sc.fibers.targets = {{0, k, y}};
  return sc;
}

// Velocity of a lone node after one step from rest, from a direct DFT of the
// kernel footprint: U = dt ds h^2 / (rho N) sum_k damp(k) |G(k)|^2 P(k) f.
Vec2 first_step_velocity(const Grid& g, double rho, double mu, double dt, Vec2 X, Vec2 f, double ds) {
  const double h = g.h(), pi = std::numbers::pi;
  const std::size_t n = g.nx;
  std::vector<double> w(g.size());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      // Periodic image closest to X.
      double dx = i * h - X.x, dy = j * h - X.y;
      dx -= g.lx * std::round(dx / g.lx);
      dy -= g.ly * std::round(dy / g.ly);
      w[g.index(i, j)] = phi(dx / h) * phi(dy / h) / (h * h);
    }
  Vec2 U{};
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      const double ia = a <= n / 2 ? double(a) : double(a) - double(n);
      const double ib = b <= n / 2 ? double(b) : double(b) - double(n);
      std::complex<double> G = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
          G += w[g.index(i, j)] * std::polar(1.0, -2.0 * pi * (ia * i + ib * j) / double(n));
      const double kx = 2 * pi * ia / g.lx, ky = 2 * pi * ib / g.ly;
      const double kdx = a == n / 2 ? 0.0 : kx, kdy = b == n / 2 ? 0.0 : ky;
      const double k2 = kdx * kdx + kdy * kdy;
      Vec2 pf = f;
      if (k2 > 0.0) pf = f - (dot(Vec2{kdx, kdy}, f) / k2) * Vec2{kdx, kdy};
      const double damp = 1.0 / (1.0 + (mu / rho) * dt * (kx * kx + ky * ky));
      U += (damp * std::norm(G)) * pf;
    }
  return (dt * ds * h * h / (rho * double(g.size()))) * U;
}

}  // namespace

TEST_CASE("no fibers and a quiescent fluid stay put") {
  SimConfig cfg = preset("circle-cubic");
  Scene sc;
  sc.mesh.points = {{0.3, 0.3}, {0.6, 0.7}};
  sc.mesh.ds = 0.01;
  SimState s = initial_state(cfg, sc);
  const FluidSolver solver(cfg.grid);
  for (int n = 0; n < 100; ++n) step(s, sc, solver, cfg.dt);
  CHECK(s.x == sc.mesh.points);
  CHECK(max_abs(s.fluid.u) == 0.0);
  CHECK(s.step == 100);
  CHECK(s.time == doctest::Approx(100 * cfg.dt));
}

TEST_CASE("single target node: first step matches the direct-DFT oracle, then approaches monotonically") {
  SimConfig cfg = preset("circle-cubic");
  cfg.grid = {16, 16, 1.0, 1.0};
  cfg.rho = 1.0;
  cfg.mu = 1.0;
  cfg.dt = 1e-3;
  const Vec2 X{0.513, 0.507}, Y{0.523, 0.507};
  const double k = 2e3, ds = 0.05;
  const Scene sc = single_target(X, Y, k, ds);
  SimState s = initial_state(cfg, sc);
  const FluidSolver solver(cfg.grid);
  step(s, sc, solver, cfg.dt);
  const Vec2 U = first_step_velocity(cfg.grid, cfg.rho, cfg.mu, cfg.dt, X, k * (Y - X), ds);
  const Vec2 expect = X + cfg.dt * U;
  CHECK(s.x[0].x == doctest::Approx(expect.x).epsilon(1e-10));
  CHECK(s.x[0].y == doctest::Approx(expect.y).epsilon(1e-10));
  CHECK(s.x[0].x > X.x);

  double prev = norm(Y - s.x[0]);
  for (int n = 0; n < 60; ++n) {
    step(s, sc, solver, cfg.dt);
    const double d = norm(Y - s.x[0]);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("t_final = 0 gives an initial dump only") {
  SimConfig cfg = preset("circle-cubic");
  cfg.t_final = 0.0;
  cfg.output_dir = scratch("t0");
  const auto s = run(cfg, {false, true});
  CHECK(s.steps == 0);
  REQUIRE(s.dumps.size() == 1);
  CHECK(s.dumps[0].step == 0);
  CHECK(fs::exists(cfg.output_dir / "u_mag.00000.vtk"));
  CHECK(fs::exists(cfg.output_dir / "manifest.json"));
  // A second run into the same directory is refused unless forced.
  CHECK_THROWS(run(cfg, {false, true}));
  CHECK_NOTHROW(run(cfg, {true, true}));
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("identical configs give identical dump files") {
  SimConfig cfg = preset("heart");
  cfg.t_final = 0.003;
  cfg.print_dump = 100;
  cfg.output_dir = scratch("det_a");
  const auto a = run(cfg, {false, true});
  cfg.output_dir = scratch("det_b");
  const auto b = run(cfg, {false, true});
  REQUIRE(a.dumps.size() == 4);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(cfg.output_dir)) {
    const auto name = e.path().filename();
    if (name == "config.ini" || name == "manifest.json") continue;
    CHECK(slurp(a.output_dir / name) == slurp(e.path()));
    ++compared;
  }
  CHECK(compared > 20);
  fs::remove_all(a.output_dir);
  fs::remove_all(b.output_dir);
}

TEST_CASE("circle centroid follows the prescribed path") {
  SimConfig cfg = preset("circle-cubic");
  const Scene sc = build_scene(cfg);
  SimState s = initial_state(cfg, sc);
  const FluidSolver solver(cfg.grid);
  const auto sched = make_schedule(cfg);
  const double path = norm(cfg.circle.b - cfg.circle.a) + norm(cfg.circle.c - cfg.circle.b);
  double worst = 0.0;
  for (std::size_t n = 0; n < step_count(cfg); ++n) {
    step(s, sc, solver, cfg.dt);
    const auto bl = scheduled_blend(sched, s.time);
    const auto& st = sc.prescription.position_states;
    const Vec2 target = centroid(blend_states(st[bl.from], st[bl.to], bl.weight));
    worst = std::max(worst, norm(centroid(s.x) - target));
  }
  CHECK(worst < 0.05 * path);
}

TEST_CASE("scene construction") {
  const auto circle = build_scene(preset("circle-cubic"));
  const double h = preset("circle-cubic").h();
  CHECK(circle.mesh.ds <= 0.5 * h + 1e-12);
  CHECK(circle.fibers.targets.size() == circle.mesh.points.size());
  CHECK(circle.prescription.position_states.size() == 3);

  const auto sw = build_scene(preset("swimmer"));
  const std::size_t n = sw.mesh.points.size();
  CHECK(sw.fibers.springs.size() == n - 1);
  CHECK(sw.fibers.beams.size() == n - 2);
  CHECK(sw.fibers.targets.empty());
  CHECK(sw.prescription.curvature_states.size() == 2);
  CHECK(sw.mesh.ds == doctest::Approx(2 * preset("swimmer").h()));

  const auto sched = make_schedule(preset("swimmer"));
  CHECK(sched.period() == doctest::Approx(2.0));
  CHECK(sched.periodic());
}

TEST_CASE("blow-up is reported with the step index") {
  SimConfig cfg = preset("circle-cubic");
  cfg.k_targ = 1e16;
  const Scene sc = build_scene(cfg);
  SimState s = initial_state(cfg, sc);
  const FluidSolver solver(cfg.grid);
  try {
    for (int n = 0; n < 2000; ++n) step(s, sc, solver, cfg.dt);
    FAIL("expected an abort");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).rfind("step ", 0) == 0);
  }
}
