#pragma once

// Lagrangian deformation forces: target tethers, linear springs and
// non-invariant beams. Every force routine accumulates into a per-node
// array so several element families can share one output.

#include <cstddef>
#include <vector>

#include "ibspline/geometry.hpp"
#include "ibspline/spline.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

/// Node tethered to a prescribed position by a penalty spring.
struct Target {
  std::size_t node = 0;
  double stiffness = 0.0;
  Vec2 position;
};

struct Spring {
  std::size_t master = 0;
  std::size_t slave = 0;
  double stiffness = 0.0;
  double rest_length = 0.0;
};

/// Bending element over three consecutive nodes with preferred second
/// difference `curvature`.
struct Beam {
  std::size_t left = 0;
  std::size_t mid = 0;
  std::size_t right = 0;
  double stiffness = 0.0;
  Vec2 curvature;
};

using TargetSet = std::vector<Target>;
using SpringSet = std::vector<Spring>;
using BeamSet = std::vector<Beam>;

struct FiberModel {
  TargetSet targets;
  SpringSet springs;
  BeamSet beams;
};

/// Throws std::invalid_argument for out-of-range indices, non-positive
/// stiffnesses, self-springs or non-consecutive beam triples.
void validate(const FiberModel& model, std::size_t n_nodes);

/// f = k (Y - X) at tethered nodes.
void add_target_forces(const PointList& x, const TargetSet& targets, std::vector<Vec2>& f);

/// Equal-and-opposite spring pair; throws std::domain_error if a spring's
/// endpoints coincide while its rest length is nonzero.
void add_spring_forces(const PointList& x, const SpringSet& springs, std::vector<Vec2>& f);

/// Negative gradient of E = k/2 |X_l - 2 X_m + X_r - C|^2 for each beam.
void add_beam_forces(const PointList& x, const BeamSet& beams, std::vector<Vec2>& f);

std::vector<Vec2> target_force(const PointList& x, const TargetSet& targets);
std::vector<Vec2> spring_force(const PointList& x, const SpringSet& springs);
std::vector<Vec2> beam_force(const PointList& x, const BeamSet& beams);

/// Total force from every element family.
std::vector<Vec2> fiber_forces(const PointList& x, const FiberModel& model);

double beam_energy(const PointList& x, const BeamSet& beams);

/// Target positions Y for time t. States are indexed by the schedule's
/// phase `from`/`to` fields; each state must have one row per node.
TargetSet update_target_positions(TargetSet targets, const PhaseSchedule& schedule,
                                  const std::vector<PointList>& states, double t);

/// Preferred curvatures for time t, blended between curvature states.
/// Beam i takes row i of each curvature state.
BeamSet update_beam_curvatures(BeamSet beams, const PhaseSchedule& schedule,
                               const std::vector<CurvatureState>& states, double t);

/// Targets on every node of `x` with a common stiffness.
TargetSet tether_all(const PointList& x, double stiffness);

/// Springs between consecutive nodes with rest length `rest`.
SpringSet chain_springs(std::size_t n, double stiffness, double rest);

/// Beams on every consecutive triple with preferred curvature `curv`.
BeamSet chain_beams(std::size_t n, double stiffness, const CurvatureState& curv);

}  // namespace ibs
