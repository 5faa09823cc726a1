#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ibspline/fluid.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

/// Four-point regularized delta profile; zero for |r| >= 2.
double phi(double r);

/// Grid footprint of one Lagrangian node: the 4 x 4 periodic grid indices
/// it touches and the separable kernel weights phi(dx/h) phi(dy/h).
struct Stencil {
  std::array<std::size_t, 4> ix{};
  std::array<std::size_t, 4> iy{};
  std::array<double, 4> wx{};
  std::array<double, 4> wy{};
};

Stencil stencil(const Grid& g, const Vec2& x);

/// F(x) = sum_s f(s) delta_h(x - X(s)) ds with delta_h = phi phi / h^2.
/// Accumulates into fx, fy (resized and zeroed first). Nodes are processed
/// in index order, so the result does not depend on scheduling.
void spread_forces(const std::vector<Vec2>& f, const PointList& x, double ds, const Grid& g,
                   std::vector<double>& fx, std::vector<double>& fy);

/// U(s) = sum_x u(x) delta_h(x - X(s)) h^2.
std::vector<Vec2> interp_velocity(const std::vector<double>& u, const std::vector<double>& v,
                                  const PointList& x, const Grid& g);

}  // namespace ibs
