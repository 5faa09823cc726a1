#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ibspline/config.hpp"
#include "ibspline/fibers.hpp"
#include "ibspline/fluid.hpp"
#include "ibspline/geometry.hpp"
#include "ibspline/spline.hpp"

namespace ibs {

/// What drives the structure: blended target positions (circle, heart) or
/// blended preferred curvatures (swimmer).
struct Prescription {
  std::optional<PhaseSchedule> schedule;
  std::vector<PointList> position_states;
  std::vector<CurvatureState> curvature_states;
};

/// Everything a run needs besides the fluid: initial mesh, fiber model and
/// how it is driven.
struct Scene {
  LagrangianMesh mesh;
  FiberModel fibers;
  Prescription prescription;
  std::size_t head_node = 0;
};

/// Builds the structure for a validated config, generating geometry unless
/// decks are given in cfg.geometry.
Scene build_scene(const SimConfig& cfg);

/// Schedule implied by a config: A->B[->rest]->C for the circle (one-shot),
/// A->B, rest, B->A for the heart and downstroke/upstroke for the swimmer
/// (periodic).
PhaseSchedule make_schedule(const SimConfig& cfg);

struct SimState {
  double time = 0.0;
  std::size_t step = 0;
  FluidState fluid;
  PointList x;
  FiberModel fibers;
};

SimState initial_state(const SimConfig& cfg, const Scene& scene);

/// Applies the prescription for time `t` to the fiber model.
void apply_prescription(FiberModel& fibers, const Prescription& p, double t);

/// One immersed-boundary step: update prescription at t^n, compute fiber
/// forces, spread, advance the fluid, move nodes with the interpolated
/// velocity. Throws std::runtime_error on non-finite state (naming the step)
/// or a CFL abort.
void step(SimState& s, const Scene& scene, const FluidSolver& solver, double dt);

struct DumpRecord {
  std::size_t index = 0;
  std::size_t step = 0;
  double time = 0.0;
  std::filesystem::path lagrangian;  ///< vertex-format node positions
};

struct RunSummary {
  std::size_t steps = 0;
  double wall_seconds = 0.0;
  std::filesystem::path output_dir;
  std::filesystem::path manifest;
  std::vector<DumpRecord> dumps;
  std::vector<std::filesystem::path> files;
};

struct RunOptions {
  bool overwrite = false;  ///< clear a non-empty output directory first
  bool quiet = false;
};

/// Runs to cfg.t_final, dumping every cfg.print_dump steps plus the initial
/// state. Output is deterministic: identical configs give identical files.
RunSummary run(const SimConfig& cfg, const RunOptions& opts = {});

/// Number of steps covering t_final.
std::size_t step_count(const SimConfig& cfg);

}  // namespace ibs
