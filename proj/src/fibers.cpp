#include "ibspline/fibers.hpp"

#include <stdexcept>
#include <string>

namespace ibs {

void validate(const FiberModel& model, std::size_t n) {
  auto bad = [](const std::string& what) { throw std::invalid_argument("fiber model: " + what); };
  for (const auto& t : model.targets) {
    if (t.node >= n) bad("target index " + std::to_string(t.node) + " out of range");
    if (!(t.stiffness > 0.0)) bad("target stiffness must be positive");
  }
  for (const auto& s : model.springs) {
    if (s.master >= n || s.slave >= n) bad("spring index out of range");
    if (s.master == s.slave) bad("spring connects node " + std::to_string(s.master) + " to itself");
    if (!(s.stiffness > 0.0)) bad("spring stiffness must be positive");
    if (s.rest_length < 0.0) bad("spring rest length must be non-negative");
  }
  for (const auto& b : model.beams) {
    if (b.right >= n) bad("beam index out of range");
    if (b.mid != b.left + 1 || b.right != b.mid + 1)
      bad("beam nodes " + std::to_string(b.left) + "," + std::to_string(b.mid) + "," +
          std::to_string(b.right) + " are not consecutive");
    if (!(b.stiffness > 0.0)) bad("beam stiffness must be positive");
  }
}

void add_target_forces(const PointList& x, const TargetSet& targets, std::vector<Vec2>& f) {
  for (const auto& t : targets) f[t.node] += t.stiffness * (t.position - x[t.node]);
}

void add_spring_forces(const PointList& x, const SpringSet& springs, std::vector<Vec2>& f) {
  for (const auto& s : springs) {
    const Vec2 d = x[s.master] - x[s.slave];
    const double len = norm(d);
    double factor;
    if (s.rest_length == 0.0) {
      factor = -s.stiffness;
    } else {
      if (len == 0.0)
        throw std::domain_error("spring " + std::to_string(s.master) + "-" + std::to_string(s.slave) +
                                ": coincident endpoints");
      factor = -s.stiffness * (1.0 - s.rest_length / len);
    }
    const Vec2 fm = factor * d;
    f[s.master] += fm;
    f[s.slave] -= fm;
  }
}

void add_beam_forces(const PointList& x, const BeamSet& beams, std::vector<Vec2>& f) {
  for (const auto& b : beams) {
    const Vec2 r = b.stiffness * (x[b.left] - 2.0 * x[b.mid] + x[b.right] - b.curvature);
    f[b.left] -= r;
    f[b.mid] += 2.0 * r;
    f[b.right] -= r;
  }
}

std::vector<Vec2> target_force(const PointList& x, const TargetSet& targets) {
  std::vector<Vec2> f(x.size());
  add_target_forces(x, targets, f);
  return f;
}

std::vector<Vec2> spring_force(const PointList& x, const SpringSet& springs) {
  std::vector<Vec2> f(x.size());
  add_spring_forces(x, springs, f);
  return f;
}

std::vector<Vec2> beam_force(const PointList& x, const BeamSet& beams) {
  std::vector<Vec2> f(x.size());
  add_beam_forces(x, beams, f);
  return f;
}

std::vector<Vec2> fiber_forces(const PointList& x, const FiberModel& model) {
  std::vector<Vec2> f(x.size());
  add_target_forces(x, model.targets, f);
  add_spring_forces(x, model.springs, f);
  add_beam_forces(x, model.beams, f);
  return f;
}

double beam_energy(const PointList& x, const BeamSet& beams) {
  double e = 0.0;
  for (const auto& b : beams) {
    const Vec2 r = x[b.left] - 2.0 * x[b.mid] + x[b.right] - b.curvature;
    e += 0.5 * b.stiffness * dot(r, r);
  }
  return e;
}

TargetSet update_target_positions(TargetSet targets, const PhaseSchedule& schedule,
                                  const std::vector<PointList>& states, double t) {
  const auto blend = scheduled_blend(schedule, t);
  const auto& from = states.at(blend.from);
  const auto& to = states.at(blend.to);
  if (from.size() != to.size()) throw std::invalid_argument("update_target_positions: state sizes differ");
  for (auto& tg : targets) {
    if (tg.node >= from.size())
      throw std::invalid_argument("update_target_positions: target node " + std::to_string(tg.node) +
                                  " beyond state of " + std::to_string(from.size()) + " points");
    tg.position = from[tg.node] + blend.weight * (to[tg.node] - from[tg.node]);
  }
  return targets;
}

BeamSet update_beam_curvatures(BeamSet beams, const PhaseSchedule& schedule,
                               const std::vector<CurvatureState>& states, double t) {
  const auto blend = scheduled_blend(schedule, t);
  const auto& from = states.at(blend.from);
  const auto& to = states.at(blend.to);
  if (from.size() != to.size() || from.size() != beams.size())
    throw std::invalid_argument("update_beam_curvatures: curvature state has " + std::to_string(from.size()) +
                                " rows for " + std::to_string(beams.size()) + " beams");
  for (std::size_t i = 0; i < beams.size(); ++i)
    beams[i].curvature = from[i] + blend.weight * (to[i] - from[i]);
  return beams;
}

TargetSet tether_all(const PointList& x, double stiffness) {
  TargetSet t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) t[i] = {i, stiffness, x[i]};
  return t;
}

SpringSet chain_springs(std::size_t n, double stiffness, double rest) {
  SpringSet s;
  for (std::size_t i = 0; i + 1 < n; ++i) s.push_back({i, i + 1, stiffness, rest});
  return s;
}

BeamSet chain_beams(std::size_t n, double stiffness, const CurvatureState& curv) {
  if (n < 3 || curv.size() != n - 2)
    throw std::invalid_argument("chain_beams: need n >= 3 and n - 2 curvature rows");
  BeamSet b;
  for (std::size_t i = 0; i + 2 < n; ++i) b.push_back({i, i + 1, i + 2, stiffness, curv[i]});
  return b;
}

}  // namespace ibs
