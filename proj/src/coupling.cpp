#include "ibspline/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ibs {

double phi(double r) {
  const double a = std::abs(r);
  if (a < 1.0) return 0.125 * (3.0 - 2.0 * a + std::sqrt(std::max(0.0, 1.0 + 4.0 * a - 4.0 * a * a)));
  if (a < 2.0) return 0.125 * (5.0 - 2.0 * a - std::sqrt(std::max(0.0, -7.0 + 12.0 * a - 4.0 * a * a)));
  return 0.0;
}

namespace {

std::size_t wrap(long i, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

void check_finite(const Vec2& p, const char* what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw std::domain_error(std::string(what) + ": non-finite input");
}

}  // namespace

Stencil stencil(const Grid& g, const Vec2& x) {
  const double h = g.h();
  const double sx = x.x / h, sy = x.y / h;
  const double bx = std::floor(sx), by = std::floor(sy);
  Stencil st;
  for (int k = 0; k < 4; ++k) {
    const double ox = bx + (k - 1), oy = by + (k - 1);
    st.ix[k] = wrap(static_cast<long>(ox), g.nx);
    st.iy[k] = wrap(static_cast<long>(oy), g.ny);
    st.wx[k] = phi(sx - ox);
    st.wy[k] = phi(sy - oy);
  }
  return st;
}

void spread_forces(const std::vector<Vec2>& f, const PointList& x, double ds, const Grid& g,
                   std::vector<double>& fx, std::vector<double>& fy) {
  if (f.size() != x.size()) throw std::invalid_argument("spread_forces: force/position size mismatch");
  fx.assign(g.size(), 0.0);
  fy.assign(g.size(), 0.0);
  const double h = g.h();
  const double scale = ds / (h * h);
  for (std::size_t s = 0; s < x.size(); ++s) {
    check_finite(x[s], "spread_forces");
    check_finite(f[s], "spread_forces");
    const Stencil st = stencil(g, x[s]);
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const double w = scale * st.wx[a] * st.wy[b];
        const std::size_t k = g.index(st.ix[a], st.iy[b]);
        fx[k] += w * f[s].x;
        fy[k] += w * f[s].y;
      }
  }
}

std::vector<Vec2> interp_velocity(const std::vector<double>& u, const std::vector<double>& v,
                                  const PointList& x, const Grid& g) {
  if (u.size() != g.size() || v.size() != g.size())
    throw std::invalid_argument("interp_velocity: field does not match grid");
  std::vector<Vec2> out(x.size());
  for (std::size_t s = 0; s < x.size(); ++s) {
    check_finite(x[s], "interp_velocity");
    const Stencil st = stencil(g, x[s]);
    Vec2 acc;
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        const double w = st.wx[a] * st.wy[b];
        const std::size_t k = g.index(st.ix[a], st.iy[b]);
        acc.x += w * u[k];
        acc.y += w * v[k];
      }
    if (!std::isfinite(acc.x) || !std::isfinite(acc.y))
      throw std::domain_error("interp_velocity: non-finite velocity near node " + std::to_string(s));
    out[s] = acc;
  }
  return out;
}

}  // namespace ibs
