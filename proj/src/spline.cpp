#include "ibspline/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ibs {

namespace {

// Row of the monomial basis (1, t, t^2, t^3) differentiated `order` times.
std::array<double, 4> basis_row(double t, int order) {
  switch (order) {
    case 0: return {1.0, t, t * t, t * t * t};
    case 1: return {0.0, 1.0, 2.0 * t, 3.0 * t * t};
    default: return {0.0, 0.0, 2.0, 6.0 * t};
  }
}

}  // namespace

CubicInterpolant::CubicInterpolant(double p1, double p2, const std::array<Coeffs, 3>& segments)
    : p1_(p1), p2_(p2), seg_(segments) {
  if (!(p1 > 0.0 && p1 < p2 && p2 < 1.0))
    throw std::invalid_argument("CubicInterpolant: knots must satisfy 0 < p1 < p2 < 1");
}

std::array<double, 12> CubicInterpolant::flat() const {
  std::array<double, 12> out{};
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 4; ++j) out[4 * k + j] = seg_[k][j];
  return out;
}

std::size_t CubicInterpolant::segment_of(double t) const {
  if (t <= p1_) return 0;
  if (t <= p2_) return 1;
  return 2;
}

GDerivs CubicInterpolant::eval_segment(std::size_t k, double t) const {
  const auto& c = seg_.at(k);
  return {c[0] + t * (c[1] + t * (c[2] + t * c[3])),
          c[1] + t * (2.0 * c[2] + 3.0 * t * c[3]),
          2.0 * c[2] + 6.0 * t * c[3]};
}

CubicInterpolant solve_cubic_coeffs(double p1, double p2) {
  if (!(p1 > 0.0)) throw std::invalid_argument("solve_cubic_coeffs: p1 must be > 0");
  if (!(p2 < 1.0)) throw std::invalid_argument("solve_cubic_coeffs: p2 must be < 1");
  if (!(p1 < p2)) throw std::invalid_argument("solve_cubic_coeffs: p1 must be < p2");

  // Unknowns ordered a0..a3 | b0..b3 | c0..c3. Rows: g0 and its first two
  // derivatives vanish at 0; value/slope/curvature match at p1 and p2;
  // g2 = 1 with zero slope and curvature at 1.
  std::array<std::array<double, 12>, 12> m{};
  std::array<double, 12> rhs{};
  std::size_t row = 0;
  auto put = [&](std::size_t seg, const std::array<double, 4>& r, double sign) {
    for (std::size_t j = 0; j < 4; ++j) m[row][4 * seg + j] += sign * r[j];
  };
  for (int d = 0; d < 3; ++d, ++row) put(0, basis_row(0.0, d), 1.0);
  for (int d = 0; d < 3; ++d, ++row) {
    put(0, basis_row(p1, d), 1.0);
    put(1, basis_row(p1, d), -1.0);
  }
  for (int d = 0; d < 3; ++d, ++row) {
    put(1, basis_row(p2, d), 1.0);
    put(2, basis_row(p2, d), -1.0);
  }
  for (int d = 0; d < 3; ++d, ++row) {
    put(2, basis_row(1.0, d), 1.0);
    rhs[row] = (d == 0) ? 1.0 : 0.0;
  }

  const auto x = solve_dense<12>(m, rhs);
  std::array<CubicInterpolant::Coeffs, 3> seg{};
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 4; ++j) seg[k][j] = x[4 * k + j];
  return CubicInterpolant(p1, p2, seg);
}

GDerivs eval_g_derivs(const CubicInterpolant& c, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::out_of_range("eval_g: t = " + std::to_string(t) + " outside [0,1]");
  return c.eval_segment(c.segment_of(t), t);
}

double eval_g(const CubicInterpolant& c, double t) { return eval_g_derivs(c, t).g; }

std::array<double, 12> constraint_residuals(const CubicInterpolant& c) {
  std::array<double, 12> r{};
  const auto at0 = c.eval_segment(0, 0.0);
  const auto at1 = c.eval_segment(2, 1.0);
  const auto l1 = c.eval_segment(0, c.p1()), r1 = c.eval_segment(1, c.p1());
  const auto l2 = c.eval_segment(1, c.p2()), r2 = c.eval_segment(2, c.p2());
  r = {at0.g,        at0.dg,         at0.ddg,
       l1.g - r1.g,  l1.dg - r1.dg,  l1.ddg - r1.ddg,
       l2.g - r2.g,  l2.dg - r2.dg,  l2.ddg - r2.ddg,
       at1.g - 1.0,  at1.dg,         at1.ddg};
  return r;
}

PointList blend_states(const PointList& a, const PointList& b, double w) {
  if (a.size() != b.size())
    throw std::invalid_argument("blend_states: state sizes differ (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  if (!(w >= 0.0 && w <= 1.0))
    throw std::invalid_argument("blend_states: weight outside [0,1]");
  PointList out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + w * (b[i] - a[i]);
  return out;
}

double BlendProfile::weight(double t_norm) const {
  if (!(t_norm >= 0.0 && t_norm <= 1.0))
    throw std::out_of_range("BlendProfile::weight: t_norm outside [0,1]");
  // Endpoints are pinned so phase boundaries reproduce the states bit-exactly.
  if (t_norm == 0.0 || t_norm == 1.0) return t_norm;
  return cubic_ ? eval_g(*cubic_, t_norm) : t_norm;
}

PhaseSchedule::PhaseSchedule(std::vector<Phase> phases, BlendProfile profile, bool periodic)
    : phases_(std::move(phases)), profile_(std::move(profile)), periodic_(periodic) {
  if (phases_.empty()) throw std::invalid_argument("PhaseSchedule: no phases");
  for (const auto& p : phases_) {
    if (p.rest ? p.duration < 0.0 : p.duration <= 0.0)
      throw std::invalid_argument("PhaseSchedule: blend phases need duration > 0, rest >= 0");
  }
  period_ = std::accumulate(phases_.begin(), phases_.end(), 0.0,
                            [](double s, const Phase& p) { return s + p.duration; });
  if (!(period_ > 0.0)) throw std::invalid_argument("PhaseSchedule: period must be > 0");
}

double PhaseSchedule::phase_start(std::size_t i) const {
  double s = 0.0;
  for (std::size_t k = 0; k < i && k < phases_.size(); ++k) s += phases_[k].duration;
  return s;
}

PhaseLocation locate_phase(const PhaseSchedule& s, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("locate_phase: t must be >= 0");
  const auto& ph = s.phases();
  auto at_end = [&] {
    const std::size_t last = ph.size() - 1;
    return PhaseLocation{last, 1.0, ph[last].rest};
  };
  if (!s.periodic() && t >= s.period()) return at_end();

  const double tm = s.periodic() ? std::fmod(t, s.period()) : t;
  double start = 0.0;
  for (std::size_t i = 0; i < ph.size(); ++i) {
    const double end = start + ph[i].duration;
    if (tm < end && ph[i].duration > 0.0) {
      if (ph[i].rest) return {i, 1.0, true};
      return {i, std::clamp((tm - start) / ph[i].duration, 0.0, 1.0), false};
    }
    start = end;
  }
  // fmod round-off can leave tm a hair below the period with the cumulative
  // sum landing exactly on it.
  if (!s.periodic()) return at_end();
  for (std::size_t i = 0; i < ph.size(); ++i)
    if (ph[i].duration > 0.0) return {i, ph[i].rest ? 1.0 : 0.0, ph[i].rest};
  return at_end();
}

ScheduledBlend scheduled_blend(const PhaseSchedule& s, double t) {
  const auto loc = locate_phase(s, t);
  const auto& ph = s.phases();
  if (!ph[loc.index].rest) {
    const auto& p = ph[loc.index];
    return {p.from, p.to, s.profile().weight(loc.t_norm)};
  }
  // Rest: hold wherever the most recent blend ended.
  const std::size_t n = ph.size();
  for (std::size_t k = 1; k <= n; ++k) {
    if (loc.index < k && !s.periodic()) break;
    const auto& p = ph[(loc.index + n - k) % n];
    if (!p.rest) return {p.to, p.to, 1.0};
  }
  for (const auto& p : ph)
    if (!p.rest) return {p.from, p.from, 0.0};
  throw std::logic_error("scheduled_blend: schedule has no blend phases");
}

}  // namespace ibs
