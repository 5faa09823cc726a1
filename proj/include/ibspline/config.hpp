#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibspline/fluid.hpp"
#include "ibspline/spline.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { Circle, Heart, Swimmer };

std::string to_string(ScenarioKind k);
std::string to_string(BlendKind k);

struct CircleParams {
  double radius = 0.2;
  Vec2 a{0.4, 0.4};
  Vec2 b{0.6, 0.4};
  Vec2 c{0.6, 0.6};
};

struct HeartParams {
  double height = 0.4;
  double contraction = 0.7;  ///< state B is state A scaled by this about the centre
  double gap = 0.2;          ///< fraction of the outline left open
  Vec2 center{0.5, 0.5};
};

struct SwimmerParams {
  double body_length = 1.0;
  double tail_deflection = 0.1;  ///< fraction of body length
  Vec2 head{3.0, 1.0};
  double stroke_period = 2.0;
  double ups_fraction = 0.5;  ///< upstroke share of the stroke period
  double k_spr = 0.0;
  double k_beam = 0.0;
};

/// Optional user decks that replace generated geometry.
struct GeometryPaths {
  std::filesystem::path vertex;
  std::filesystem::path state_a;
  std::filesystem::path state_b;
  std::filesystem::path state_c;
};

struct SimConfig {
  Grid grid{32, 32, 1.0, 1.0};
  double rho = 1000.0;
  double mu = 1.0;

  double dt = 1e-5;
  double t_final = 0.02;
  std::size_t print_dump = 50;

  ScenarioKind scenario = ScenarioKind::Circle;
  BlendKind blend = BlendKind::Cubic;
  double p1 = 0.25;
  double p2 = 0.925;
  double t1 = 0.01;      ///< duration of the first blend
  double t_rest = 0.0;   ///< rest between blends
  double t2 = 0.01;      ///< duration of the second blend
  double k_targ = 0.0;
  double ds_factor = 0.5;  ///< Lagrangian spacing as a multiple of h

  CircleParams circle;
  HeartParams heart;
  SwimmerParams swimmer;
  GeometryPaths geometry;

  std::filesystem::path output_dir = "output";
  bool eulerian_dumps = true;

  double h() const { return grid.h(); }
};

/// Throws ConfigError describing the first violated constraint.
void validate(const SimConfig& cfg);

/// Defaults for a scenario kind (circle, heart, swimmer).
SimConfig scenario_defaults(ScenarioKind kind);

/// Parses "key = value" lines grouped under [section] headers. Only
/// scenario.name is required; everything else falls back to that
/// scenario's defaults. Unknown keys produce warnings, not errors.
struct ParsedConfig {
  SimConfig config;
  std::vector<std::string> warnings;
};
ParsedConfig parse_config(const std::string& text, const std::string& source = "<string>");
SimConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value" to an existing config.
void apply_override(SimConfig& cfg, const std::string& assignment);

/// Flattened "section.key" -> value view of every setting.
std::map<std::string, std::string> to_key_values(const SimConfig& cfg);
std::string to_config_text(const SimConfig& cfg);

/// Named single-run presets: circle-linear, circle-cubic, heart, swimmer.
SimConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// Parameter sweeps: each point is an independent run.
struct SweepPoint {
  std::string label;
  SimConfig config;
};
std::vector<SweepPoint> sweep(const std::string& name);
std::vector<std::string> sweep_names();

}  // namespace ibs
