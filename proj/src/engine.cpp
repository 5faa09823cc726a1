#include "ibspline/engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ibspline/coupling.hpp"
#include "ibspline/io.hpp"

namespace ibs {

namespace fs = std::filesystem;

namespace {

std::size_t nodes_for_length(double length, double ds) {
  return static_cast<std::size_t>(std::ceil(length / ds - 1e-9));
}

PointList translated(const PointList& pts, Vec2 by) {
  PointList out(pts);
  for (auto& p : out) p += by;
  return out;
}

PointList scaled_about(const PointList& pts, Vec2 c, double s) {
  PointList out(pts);
  for (auto& p : out) p = c + s * (p - c);
  return out;
}

void check_rows(const PointList& state, std::size_t n, const fs::path& path) {
  if (state.size() != n)
    throw std::runtime_error(path.string() + ": state has " + std::to_string(state.size()) + " points, mesh has " +
                             std::to_string(n));
}

Scene circle_scene(const SimConfig& cfg) {
  const auto& c = cfg.circle;
  Scene sc;
  const std::size_t n = std::max<std::size_t>(
      8, nodes_for_length(2.0 * std::numbers::pi * c.radius, cfg.ds_factor * cfg.h()));
  sc.mesh = make_circle(c.a, c.radius, n);
  const PointList base = make_circle({0.0, 0.0}, c.radius, n).points;
  std::vector<PointList> states{translated(base, c.a), translated(base, c.b), translated(base, c.c)};

  const auto& g = cfg.geometry;
  if (!g.vertex.empty()) {
    sc.mesh.points = read_vertex(g.vertex);
    sc.mesh.ds = polyline_length(sc.mesh.points, true) / static_cast<double>(sc.mesh.points.size());
    states.assign(3, sc.mesh.points);
  }
  const fs::path* paths[] = {&g.state_a, &g.state_b, &g.state_c};
  for (std::size_t i = 0; i < 3; ++i) {
    if (paths[i]->empty()) continue;
    states[i] = load_state_points(*paths[i]);
    check_rows(states[i], sc.mesh.points.size(), *paths[i]);
  }
  if (!g.state_a.empty() && g.vertex.empty()) sc.mesh.points = states[0];

  sc.fibers.targets = tether_all(sc.mesh.points, cfg.k_targ);
  sc.prescription.schedule = make_schedule(cfg);
  sc.prescription.position_states = std::move(states);
  return sc;
}

Scene heart_scene(const SimConfig& cfg) {
  const auto& hp = cfg.heart;
  Scene sc;
  // Size the node count from a finely sampled outline.
  const double len = polyline_length(make_heart(hp.center, hp.height, 2000, hp.gap).points);
  const std::size_t n = std::max<std::size_t>(8, nodes_for_length(len, cfg.ds_factor * cfg.h()) + 1);
  sc.mesh = make_heart(hp.center, hp.height, n, hp.gap);
  std::vector<PointList> states{sc.mesh.points, scaled_about(sc.mesh.points, hp.center, hp.contraction)};

  const auto& g = cfg.geometry;
  if (!g.vertex.empty()) {
    sc.mesh.points = read_vertex(g.vertex);
    sc.mesh.ds = polyline_length(sc.mesh.points) / static_cast<double>(sc.mesh.points.size() - 1);
    states = {sc.mesh.points, scaled_about(sc.mesh.points, hp.center, hp.contraction)};
  }
  const fs::path* paths[] = {&g.state_a, &g.state_b};
  for (std::size_t i = 0; i < 2; ++i) {
    if (paths[i]->empty()) continue;
    states[i] = load_state_points(*paths[i]);
    check_rows(states[i], sc.mesh.points.size(), *paths[i]);
  }
  if (!g.state_a.empty() && g.vertex.empty()) sc.mesh.points = states[0];

  sc.fibers.targets = tether_all(sc.mesh.points, cfg.k_targ);
  sc.prescription.schedule = make_schedule(cfg);
  sc.prescription.position_states = std::move(states);
  return sc;
}

Scene swimmer_scene(const SimConfig& cfg) {
  const auto& sp = cfg.swimmer;
  SwimmerShape shape;
  shape.body_length = sp.body_length;
  shape.tail_deflection = sp.tail_deflection;
  shape.head = sp.head;
  auto [p1, p2] = make_swimmer(shape, cfg.ds_factor * cfg.h());

  const auto& g = cfg.geometry;
  if (!g.state_a.empty()) p1.points = load_state_points(g.state_a);
  if (!g.state_b.empty()) {
    p2.points = load_state_points(g.state_b);
    check_rows(p2.points, p1.points.size(), g.state_b);
  }
  if (!g.state_a.empty()) p1.ds = polyline_length(p1.points) / static_cast<double>(p1.points.size() - 1);

  Scene sc;
  sc.mesh = p1;
  if (!g.vertex.empty()) {
    sc.mesh.points = read_vertex(g.vertex);
    check_rows(sc.mesh.points, p1.points.size(), g.vertex);
  }
  std::vector<CurvatureState> curv{compute_curvatures(p1.points), compute_curvatures(p2.points)};
  sc.fibers.springs = chain_springs(sc.mesh.points.size(), sp.k_spr, p1.ds);
  sc.fibers.beams = chain_beams(sc.mesh.points.size(), sp.k_beam, curv[0]);
  sc.prescription.schedule = make_schedule(cfg);
  sc.prescription.curvature_states = std::move(curv);
  sc.head_node = 0;
  return sc;
}

std::string padded(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return buf;
}

}  // namespace

PhaseSchedule make_schedule(const SimConfig& cfg) {
  const BlendProfile profile =
      cfg.blend == BlendKind::Cubic ? BlendProfile::cubic(cfg.p1, cfg.p2) : BlendProfile::linear();
  std::vector<Phase> ph;
  switch (cfg.scenario) {
    case ScenarioKind::Circle:
      ph.push_back({cfg.t1, false, 0, 1});
      if (cfg.t_rest > 0.0) ph.push_back({cfg.t_rest, true, 0, 0});
      ph.push_back({cfg.t2, false, 1, 2});
      return PhaseSchedule(ph, profile, false);
    case ScenarioKind::Heart:
      ph.push_back({cfg.t1, false, 0, 1});
      if (cfg.t_rest > 0.0) ph.push_back({cfg.t_rest, true, 0, 0});
      ph.push_back({cfg.t2, false, 1, 0});
      return PhaseSchedule(ph, profile, true);
    case ScenarioKind::Swimmer: {
      // Downstroke: phase 1 -> phase 2; upstroke: back again.
      const double T = cfg.swimmer.stroke_period;
      const double ups = cfg.swimmer.ups_fraction;
      ph.push_back({(1.0 - ups) * T, false, 0, 1});
      ph.push_back({ups * T, false, 1, 0});
      return PhaseSchedule(ph, profile, true);
    }
  }
  throw std::logic_error("make_schedule: unknown scenario");
}

Scene build_scene(const SimConfig& cfg) {
  validate(cfg);
  Scene sc;
  switch (cfg.scenario) {
    case ScenarioKind::Circle: sc = circle_scene(cfg); break;
    case ScenarioKind::Heart: sc = heart_scene(cfg); break;
    case ScenarioKind::Swimmer: sc = swimmer_scene(cfg); break;
  }
  validate(sc.fibers, sc.mesh.points.size());
  return sc;
}

SimState initial_state(const SimConfig& cfg, const Scene& scene) {
  SimState s;
  s.fluid = FluidState(cfg.grid, cfg.rho, cfg.mu);
  s.x = scene.mesh.points;
  s.fibers = scene.fibers;
  apply_prescription(s.fibers, scene.prescription, 0.0);
  return s;
}

void apply_prescription(FiberModel& fibers, const Prescription& p, double t) {
  if (!p.schedule) return;
  if (!p.position_states.empty() && !fibers.targets.empty())
    fibers.targets = update_target_positions(std::move(fibers.targets), *p.schedule, p.position_states, t);
  if (!p.curvature_states.empty() && !fibers.beams.empty())
    fibers.beams = update_beam_curvatures(std::move(fibers.beams), *p.schedule, p.curvature_states, t);
}

void step(SimState& s, const Scene& scene, const FluidSolver& solver, double dt) {
  const Grid& g = s.fluid.grid;
  apply_prescription(s.fibers, scene.prescription, s.time);
  const auto f = fiber_forces(s.x, s.fibers);
  spread_forces(f, s.x, scene.mesh.ds, g, s.fluid.fx, s.fluid.fy);
  try {
    solver.advance(s.fluid, dt);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error("step " + std::to_string(s.step) + ": " + e.what());
  }
  const auto U = interp_velocity(s.fluid.u, s.fluid.v, s.x, g);
  for (std::size_t k = 0; k < s.x.size(); ++k) {
    s.x[k] += dt * U[k];
    if (!std::isfinite(s.x[k].x) || !std::isfinite(s.x[k].y))
      throw std::runtime_error("step " + std::to_string(s.step) + ": non-finite position at node " +
                               std::to_string(k));
  }
  ++s.step;
  s.time = static_cast<double>(s.step) * dt;
}

std::size_t step_count(const SimConfig& cfg) {
  if (cfg.t_final <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
}

RunSummary run(const SimConfig& cfg, const RunOptions& opts) {
  const auto wall0 = std::chrono::steady_clock::now();
  validate(cfg);
  const Scene scene = build_scene(cfg);

  const fs::path dir = cfg.output_dir;
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!opts.overwrite)
      throw std::runtime_error(dir.string() + ": output directory is not empty (use --force to replace)");
    for (const auto& e : fs::directory_iterator(dir)) fs::remove_all(e.path());
  }
  fs::create_directories(dir);

  RunSummary sum;
  sum.output_dir = dir;

  {
    std::ofstream cf(dir / "config.ini", std::ios::binary);
    cf << to_config_text(cfg);
    if (!cf) throw std::runtime_error((dir / "config.ini").string() + ": write failed");
    sum.files.push_back(dir / "config.ini");
  }
  write_vertex(dir / "structure.vertex", scene.mesh.points);
  sum.files.push_back(dir / "structure.vertex");
  if (!scene.fibers.targets.empty()) {
    write_targets(dir / "structure.target", scene.fibers.targets);
    sum.files.push_back(dir / "structure.target");
  }
  if (!scene.fibers.springs.empty()) {
    write_springs(dir / "structure.spring", scene.fibers.springs);
    sum.files.push_back(dir / "structure.spring");
  }
  if (!scene.fibers.beams.empty()) {
    write_beams(dir / "structure.beam", scene.fibers.beams);
    sum.files.push_back(dir / "structure.beam");
  }

  const FluidSolver solver(cfg.grid);
  SimState s = initial_state(cfg, scene);

  auto dump = [&] {
    DumpRecord d;
    d.index = sum.dumps.size();
    d.step = s.step;
    d.time = s.time;
    d.lagrangian = dir / ("lagrangian." + padded(d.index) + ".vertex");
    if (fs::exists(d.lagrangian)) throw std::runtime_error(d.lagrangian.string() + ": refusing to overwrite");
    write_vertex(d.lagrangian, s.x);
    sum.files.push_back(d.lagrangian);
    if (cfg.eulerian_dumps) {
      for (auto& p : write_fields_vtk(dir, d.index, s.fluid, solver.vorticity(s.fluid.u, s.fluid.v), s.x))
        sum.files.push_back(std::move(p));
    }
    sum.dumps.push_back(d);
  };

  const std::size_t n = step_count(cfg);
  dump();
  for (std::size_t k = 0; k < n; ++k) {
    step(s, scene, solver, cfg.dt);
    if (s.step % cfg.print_dump == 0 || s.step == n) dump();
    if (!opts.quiet && n >= 10 && s.step % (n / 10) == 0)
      std::cerr << "[ibspline] step " << s.step << "/" << n << " t=" << s.time << '\n';
  }
  sum.steps = n;

  nlohmann::ordered_json m;
  m["scenario"] = to_string(cfg.scenario);
  m["steps"] = n;
  m["dt"] = cfg.dt;
  m["head_node"] = scene.head_node;
  m["n_nodes"] = scene.mesh.points.size();
  m["ds"] = scene.mesh.ds;
  if (cfg.scenario == ScenarioKind::Swimmer) {
    m["body_length"] = cfg.swimmer.body_length;
    m["stroke_period"] = cfg.swimmer.stroke_period;
  }
  if (scene.prescription.schedule) m["period"] = scene.prescription.schedule->period();
  nlohmann::ordered_json cfgj;
  for (const auto& [k, v] : to_key_values(cfg)) cfgj[k] = v;
  m["config"] = cfgj;
  auto& dj = m["dumps"] = nlohmann::ordered_json::array();
  for (const auto& d : sum.dumps)
    dj.push_back({{"index", d.index}, {"step", d.step}, {"time", d.time},
                  {"lagrangian", d.lagrangian.filename().string()}});
  sum.manifest = dir / "manifest.json";
  {
    std::ofstream mf(sum.manifest, std::ios::binary);
    mf << m.dump(2) << '\n';
    if (!mf) throw std::runtime_error(sum.manifest.string() + ": write failed");
  }
  sum.files.push_back(sum.manifest);

  sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return sum;
}

}  // namespace ibs
