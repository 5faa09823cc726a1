#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "ibspline/vec2.hpp"

namespace ibs {

/// Ordered material points of one immersed structure.
struct LagrangianMesh {
  PointList points;
  double ds = 0.0;      ///< nominal spacing between consecutive nodes
  bool closed = false;  ///< last node connects back to the first
};

/// Discrete second differences X(s) - 2X(s+1) + X(s+2) along a chain.
using CurvatureState = std::vector<Vec2>;

/// N points uniformly spaced in angle, starting at angle 0, counter-clockwise.
LagrangianMesh make_circle(Vec2 center, double radius, std::size_t n);

/// Parameters of the two-phase anguilliform body.
struct SwimmerShape {
  double body_length = 1.0;
  double straight_fraction = 0.28;  ///< leading straight portion of arc length
  double tail_deflection = 0.1;     ///< lateral tail offset as a fraction of body length
  Vec2 head{0.0, 0.0};              ///< position of node 0; the body trails toward -x
};

/// Phase 1 and phase 2 of the swimmer, sampled at equal arc-length steps of
/// about `ds`. The trailing portion follows y = a*xi^3 (xi measured back from
/// the end of the straight part); phase 2 negates its lateral offset.
std::pair<LagrangianMesh, LagrangianMesh> make_swimmer(const SwimmerShape& shape, double ds);
std::pair<LagrangianMesh, LagrangianMesh> make_swimmer(double body_length, double ds);

/// Index of the first node of the cubic (tail) portion in a swimmer mesh.
std::size_t swimmer_tail_start(const SwimmerShape& shape, std::size_t n_points);

/// Cartoon heart outline with an opening centred on the top notch.
/// `gap_fraction` of the closed outline's arc length is left open.
LagrangianMesh make_heart(Vec2 center, double height, std::size_t n, double gap_fraction = 0.1);

CurvatureState compute_curvatures(const PointList& pts);
inline CurvatureState compute_curvatures(const LagrangianMesh& m) { return compute_curvatures(m.points); }

/// Reads an N x 2 point list, with or without a leading count line.
PointList load_state_points(const std::filesystem::path& path);

/// Sum of chord lengths along the chain (plus the closing chord if closed).
double polyline_length(const PointList& pts, bool closed = false);

}  // namespace ibs
