#include "ibspline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ibspline/io.hpp"

namespace ibs {

namespace {

// Cumulative arc length of a parametric curve sampled on a uniform grid in
// the parameter, integrated with Simpson's rule per panel.
template <typename Speed>
std::vector<double> cumulative_arc(Speed&& speed, double t0, double t1, std::size_t panels) {
  std::vector<double> cum(panels + 1, 0.0);
  const double h = (t1 - t0) / static_cast<double>(panels);
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = t0 + h * static_cast<double>(i);
    cum[i + 1] = cum[i] + h / 6.0 * (speed(a) + 4.0 * speed(a + 0.5 * h) + speed(a + h));
  }
  return cum;
}

// Parameter value at which the cumulative table reaches arc length s.
double invert_arc(const std::vector<double>& cum, double t0, double t1, double s) {
  const auto it = std::lower_bound(cum.begin(), cum.end(), s);
  if (it == cum.begin()) return t0;
  if (it == cum.end()) return t1;
  const auto i = static_cast<std::size_t>(it - cum.begin());
  const double h = (t1 - t0) / static_cast<double>(cum.size() - 1);
  const double frac = (s - cum[i - 1]) / (cum[i] - cum[i - 1]);
  return t0 + h * (static_cast<double>(i - 1) + frac);
}

double cubic_tail_arc(double deflection, double extent) {
  const double a = deflection / (extent * extent * extent);
  const auto cum = cumulative_arc(
      [a](double xi) { return std::sqrt(1.0 + 9.0 * a * a * xi * xi * xi * xi); }, 0.0, extent, 2000);
  return cum.back();
}

}  // namespace

LagrangianMesh make_circle(Vec2 center, double radius, std::size_t n) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
  if (n < 3) throw std::invalid_argument("make_circle: need at least 3 points");
  LagrangianMesh m;
  m.closed = true;
  m.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    m.points.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
  }
  m.ds = 2.0 * std::numbers::pi * radius / static_cast<double>(n);
  return m;
}

std::pair<LagrangianMesh, LagrangianMesh> make_swimmer(const SwimmerShape& shape, double ds) {
  const double len = shape.body_length;
  if (!(len > 0.0)) throw std::invalid_argument("make_swimmer: body length must be positive");
  if (!(ds > 0.0) || ds >= len) throw std::invalid_argument("make_swimmer: need 0 < ds < body length");
  if (!(shape.straight_fraction > 0.0 && shape.straight_fraction < 1.0))
    throw std::invalid_argument("make_swimmer: straight fraction must lie in (0,1)");

  const double straight = shape.straight_fraction * len;
  const double tail_arc = len - straight;
  const double deflection = shape.tail_deflection * len;
  if (!(deflection > 0.0) || deflection >= tail_arc)
    throw std::invalid_argument("make_swimmer: tail deflection must be positive and shorter than the tail");

  // Axial extent X of the tail such that y = (deflection / X^3) xi^3 on
  // [0, X] has arc length tail_arc. The arc length decreases toward the
  // chord-limited value as X shrinks, so bisection brackets the root.
  double lo = 1e-6 * tail_arc, hi = tail_arc;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * tail_arc; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cubic_tail_arc(deflection, mid) > tail_arc ? hi : lo) = mid;
  }
  const double extent = 0.5 * (lo + hi);
  const double a = deflection / (extent * extent * extent);
  const auto cum = cumulative_arc(
      [a](double xi) { return std::sqrt(1.0 + 9.0 * a * a * xi * xi * xi * xi); }, 0.0, extent, 20000);

  const auto n = static_cast<std::size_t>(std::llround(len / ds)) + 1;
  const double step = len / static_cast<double>(n - 1);
  LagrangianMesh p1, p2;
  p1.ds = p2.ds = step;
  p1.points.reserve(n);
  p2.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = step * static_cast<double>(k);
    if (s <= straight) {
      const Vec2 p{shape.head.x - s, shape.head.y};
      p1.points.push_back(p);
      p2.points.push_back(p);
    } else {
      const double xi = invert_arc(cum, 0.0, extent, s - straight);
      const double x = shape.head.x - straight - xi;
      const double y = a * xi * xi * xi;
      p1.points.push_back({x, shape.head.y + y});
      p2.points.push_back({x, shape.head.y - y});
    }
  }
  return {std::move(p1), std::move(p2)};
}

std::pair<LagrangianMesh, LagrangianMesh> make_swimmer(double body_length, double ds) {
  SwimmerShape shape;
  shape.body_length = body_length;
  return make_swimmer(shape, ds);
}

std::size_t swimmer_tail_start(const SwimmerShape& shape, std::size_t n_points) {
  const double step = shape.body_length / static_cast<double>(n_points - 1);
  const double straight = shape.straight_fraction * shape.body_length;
  std::size_t k = 0;
  while (k < n_points && step * static_cast<double>(k) <= straight) ++k;
  return k;
}

LagrangianMesh make_heart(Vec2 center, double height, std::size_t n, double gap_fraction) {
  if (!(height > 0.0)) throw std::invalid_argument("make_heart: height must be positive");
  if (n < 3) throw std::invalid_argument("make_heart: need at least 3 points");
  if (!(gap_fraction > 0.0 && gap_fraction < 0.5))
    throw std::invalid_argument("make_heart: gap fraction must lie in (0, 0.5)");

  // Classic heart curve; theta = 0 is the top notch, theta = pi the tip.
  // Its vertical extent is [-17, y_max] with y_max near 11.8.
  auto pos = [](double th) {
    const double s = std::sin(th);
    return Vec2{16.0 * s * s * s,
                13.0 * std::cos(th) - 5.0 * std::cos(2 * th) - 2.0 * std::cos(3 * th) - std::cos(4 * th)};
  };
  auto speed = [](double th) {
    const double s = std::sin(th), c = std::cos(th);
    const double dx = 48.0 * s * s * c;
    const double dy = -13.0 * s + 10.0 * std::sin(2 * th) + 6.0 * std::sin(3 * th) + 4.0 * std::sin(4 * th);
    return std::hypot(dx, dy);
  };
  const double two_pi = 2.0 * std::numbers::pi;
  const auto cum = cumulative_arc(speed, 0.0, two_pi, 20000);
  const double perimeter = cum.back();

  double ymin = 0.0, ymax = 0.0;
  for (std::size_t i = 0; i <= 4000; ++i) {
    const double y = pos(two_pi * static_cast<double>(i) / 4000.0).y;
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double scale = height / (ymax - ymin);
  const double ymid = 0.5 * (ymax + ymin);

  const double s0 = 0.5 * gap_fraction * perimeter;
  const double s1 = perimeter - s0;
  LagrangianMesh m;
  m.closed = false;
  m.points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s0 + (s1 - s0) * static_cast<double>(k) / static_cast<double>(n - 1);
    const Vec2 p = pos(invert_arc(cum, 0.0, two_pi, s));
    m.points.push_back({center.x + scale * p.x, center.y + scale * (p.y - ymid)});
  }
  m.ds = scale * (s1 - s0) / static_cast<double>(n - 1);
  return m;
}

CurvatureState compute_curvatures(const PointList& pts) {
  if (pts.size() < 3)
    throw std::invalid_argument("compute_curvatures: need at least 3 points, got " + std::to_string(pts.size()));
  CurvatureState c(pts.size() - 2);
  for (std::size_t s = 0; s + 2 < pts.size(); ++s) c[s] = pts[s] - 2.0 * pts[s + 1] + pts[s + 2];
  return c;
}

PointList load_state_points(const std::filesystem::path& path) { return read_points(path); }

double polyline_length(const PointList& pts, bool closed) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += norm(pts[i] - pts[i - 1]);
  if (closed && pts.size() > 1) len += norm(pts.front() - pts.back());
  return len;
}

}  // namespace ibs
