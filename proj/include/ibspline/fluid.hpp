#pragma once

// Incompressible Navier-Stokes on a doubly periodic rectangle, advanced by a
// Fourier pseudo-spectral projection step: explicit skew-symmetric
// advection (2/3 dealiased), implicit diffusion, exact projection onto
// divergence-free modes.

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace ibs {

/// Uniform periodic grid. Node (i, j) sits at (i h, j h); fields are stored
/// row-major with index j * nx + i.
struct Grid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  double h() const { return lx / static_cast<double>(nx); }
  std::size_t size() const { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
};

/// Throws std::invalid_argument for empty grids or non-square cells.
void validate(const Grid& g);

using Field = std::vector<double>;

struct FluidState {
  Grid grid;
  double rho = 1.0;
  double mu = 0.0;
  Field u, v, p;
  Field fx, fy;

  FluidState() = default;
  FluidState(const Grid& g, double rho, double mu);
  double nu() const { return mu / rho; }
};

struct StepDiagnostics {
  double cfl = 0.0;
};

class FluidSolver {
 public:
  explicit FluidSolver(const Grid& g);
  ~FluidSolver();
  FluidSolver(FluidSolver&&) noexcept;
  FluidSolver& operator=(FluidSolver&&) noexcept;
  FluidSolver(const FluidSolver&) = delete;
  FluidSolver& operator=(const FluidSolver&) = delete;

  const Grid& grid() const;

  /// Advances `s` by dt using its force fields (fx, fy). Throws
  /// std::runtime_error when max|u| dt / h exceeds 1 and warns on stderr
  /// above 0.5.
  StepDiagnostics advance(FluidState& s, double dt) const;

  /// Removes the divergent part of (u, v) in place.
  void project(Field& u, Field& v) const;

  /// dv/dx - du/dy, spectrally.
  Field vorticity(const Field& u, const Field& v) const;

  /// Spectral divergence du/dx + dv/dy.
  Field divergence(const Field& u, const Field& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FluidState advance_fluid(FluidState s, double dt);
Field vorticity(const FluidState& s);
double max_divergence(const FluidState& s);

double max_abs(const Field& f);
/// max over the grid of sqrt(u^2 + v^2).
double max_speed(const Field& u, const Field& v);

}  // namespace ibs
