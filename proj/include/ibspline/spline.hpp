#pragma once

// Blending functions that drive prescribed motion and material-state
// interpolation: the linear ramp, the three-piece C2 cubic g(t) on [0,1],
// and the phase schedule that maps simulation time onto them.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "ibspline/detail/dense_solve.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

/// Value, slope and curvature of a blending function at one instant.
struct GDerivs {
  double g = 0.0;
  double dg = 0.0;
  double ddg = 0.0;
};

/// Piecewise cubic g(t) on [0,1] with interior knots p1 < p2.
///
/// Segment 0 covers [0,p1], segment 1 covers [p1,p2], segment 2 covers
/// [p2,1]. Each segment stores monomial coefficients (c0, c1, c2, c3) in
/// absolute t, so g_k(t) = c0 + c1 t + c2 t^2 + c3 t^3.
class CubicInterpolant {
 public:
  using Coeffs = std::array<double, 4>;

  CubicInterpolant(double p1, double p2, const std::array<Coeffs, 3>& segments);

  double p1() const { return p1_; }
  double p2() const { return p2_; }
  const Coeffs& a() const { return seg_[0]; }
  const Coeffs& b() const { return seg_[1]; }
  const Coeffs& c() const { return seg_[2]; }
  const Coeffs& segment(std::size_t k) const { return seg_.at(k); }

  /// All 12 coefficients in the order a0..a3, b0..b3, c0..c3.
  std::array<double, 12> flat() const;

  /// Segment index used for t (boundaries belong to the earlier segment).
  std::size_t segment_of(double t) const;

  /// Evaluates one segment's polynomial, ignoring its nominal range.
  GDerivs eval_segment(std::size_t k, double t) const;

 private:
  double p1_;
  double p2_;
  std::array<Coeffs, 3> seg_;
};

/// Solves the 12x12 C2 constraint system for knots (p1, p2).
/// Throws std::invalid_argument unless 0 < p1 < p2 < 1.
CubicInterpolant solve_cubic_coeffs(double p1, double p2);

/// g(t) for t in [0,1]; throws std::out_of_range otherwise.
double eval_g(const CubicInterpolant& c, double t);
GDerivs eval_g_derivs(const CubicInterpolant& c, double t);

/// Rowwise a + w (b - a). Throws std::invalid_argument on shape mismatch
/// or w outside [0,1].
PointList blend_states(const PointList& a, const PointList& b, double w);

/// The 12 constraint residuals (endpoint conditions and knot matching)
/// evaluated from stored coefficients. Used as a self-check.
std::array<double, 12> constraint_residuals(const CubicInterpolant& c);

enum class BlendKind { Linear, Cubic };

/// Maps normalized phase time onto a blend weight: identity for linear
/// blending, g(t) for cubic.
class BlendProfile {
 public:
  static BlendProfile linear() { return BlendProfile{}; }
  static BlendProfile cubic(double p1, double p2) {
    return BlendProfile{solve_cubic_coeffs(p1, p2)};
  }

  BlendKind kind() const { return cubic_ ? BlendKind::Cubic : BlendKind::Linear; }
  const std::optional<CubicInterpolant>& interpolant() const { return cubic_; }
  double weight(double t_norm) const;

 private:
  BlendProfile() = default;
  explicit BlendProfile(CubicInterpolant c) : cubic_(std::move(c)) {}
  std::optional<CubicInterpolant> cubic_;
};

/// One phase of a motion schedule: either blend state `from` -> `to`
/// over `duration` seconds, or rest (hold the last reached state).
struct Phase {
  double duration = 0.0;
  bool rest = false;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct PhaseLocation {
  std::size_t index = 0;
  double t_norm = 0.0;  ///< fraction of the phase elapsed, in [0,1]
  bool rest = false;
};

/// Ordered phases with a shared blend profile. A periodic schedule wraps
/// time modulo the period; a one-shot schedule holds the final phase at
/// t_norm = 1 once the period has elapsed.
class PhaseSchedule {
 public:
  PhaseSchedule(std::vector<Phase> phases, BlendProfile profile, bool periodic = true);

  const std::vector<Phase>& phases() const { return phases_; }
  const BlendProfile& profile() const { return profile_; }
  double period() const { return period_; }
  bool periodic() const { return periodic_; }

  /// Cumulative start time of phase i within one period.
  double phase_start(std::size_t i) const;

 private:
  std::vector<Phase> phases_;
  BlendProfile profile_;
  double period_ = 0.0;
  bool periodic_ = true;
};

/// Finds the phase containing t. A time that lands exactly on a boundary is
/// assigned to the later phase with t_norm = 0. Rest phases report
/// t_norm = 1 and rest = true. Throws std::invalid_argument for t < 0.
PhaseLocation locate_phase(const PhaseSchedule& s, double t);

/// Blend weight for the active phase at time t, together with the indices
/// of the two states being blended. Rest phases return the previous blend's
/// endpoint (weight 1 toward its `to`).
struct ScheduledBlend {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};
ScheduledBlend scheduled_blend(const PhaseSchedule& s, double t);

}  // namespace ibs

