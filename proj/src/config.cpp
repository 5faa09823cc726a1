#include "ibspline/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "ibspline/io.hpp"

namespace ibs {

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::Heart: return "heart";
    case ScenarioKind::Swimmer: return "swimmer";
  }
  return "?";
}

std::string to_string(BlendKind k) { return k == BlendKind::Linear ? "linear" : "cubic"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw ConfigError("expected a number, got '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size() || x < 0)
    throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true/false, got '" + v + "'");
}

ScenarioKind to_scenario(const std::string& v) {
  if (v == "circle") return ScenarioKind::Circle;
  if (v == "heart") return ScenarioKind::Heart;
  if (v == "swimmer") return ScenarioKind::Swimmer;
  throw ConfigError("unknown scenario '" + v + "' (expected circle, heart or swimmer)");
}

BlendKind to_blend(const std::string& v) {
  if (v == "linear") return BlendKind::Linear;
  if (v == "cubic") return BlendKind::Cubic;
  throw ConfigError("unknown interpolant '" + v + "' (expected linear or cubic)");
}

struct Key {
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, const std::string&)> set;
};

Key real(double SimConfig::*m) {
  return {[m](const SimConfig& c) { return format_double(c.*m); },
          [m](SimConfig& c, const std::string& v) { c.*m = to_double(v); }};
}

template <typename Getter>
Key real_at(Getter g) {
  return {[g](const SimConfig& c) { return format_double(g(const_cast<SimConfig&>(c))); },
          [g](SimConfig& c, const std::string& v) { g(c) = to_double(v); }};
}

template <typename Getter>
Key path_at(Getter g) {
  return {[g](const SimConfig& c) { return g(const_cast<SimConfig&>(c)).string(); },
          [g](SimConfig& c, const std::string& v) { g(c) = v; }};
}

// Every recognised key. The table order is also the serialization order.
const std::vector<std::pair<std::string, Key>>& key_table() {
  static const std::vector<std::pair<std::string, Key>> table = {
      {"grid.nx", {[](const SimConfig& c) { return std::to_string(c.grid.nx); },
                   [](SimConfig& c, const std::string& v) { c.grid.nx = to_count(v); }}},
      {"grid.ny", {[](const SimConfig& c) { return std::to_string(c.grid.ny); },
                   [](SimConfig& c, const std::string& v) { c.grid.ny = to_count(v); }}},
      {"grid.lx", real_at([](SimConfig& c) -> double& { return c.grid.lx; })},
      {"grid.ly", real_at([](SimConfig& c) -> double& { return c.grid.ly; })},
      {"fluid.rho", real(&SimConfig::rho)},
      {"fluid.mu", real(&SimConfig::mu)},
      {"time.dt", real(&SimConfig::dt)},
      {"time.t_final", real(&SimConfig::t_final)},
      {"time.print_dump", {[](const SimConfig& c) { return std::to_string(c.print_dump); },
                           [](SimConfig& c, const std::string& v) { c.print_dump = to_count(v); }}},
      {"scenario.name", {[](const SimConfig& c) { return to_string(c.scenario); },
                         [](SimConfig& c, const std::string& v) { c.scenario = to_scenario(v); }}},
      {"scenario.interp", {[](const SimConfig& c) { return to_string(c.blend); },
                           [](SimConfig& c, const std::string& v) { c.blend = to_blend(v); }}},
      {"scenario.p1", real(&SimConfig::p1)},
      {"scenario.p2", real(&SimConfig::p2)},
      {"scenario.t1", real(&SimConfig::t1)},
      {"scenario.t_rest", real(&SimConfig::t_rest)},
      {"scenario.t2", real(&SimConfig::t2)},
      {"scenario.k_targ", real(&SimConfig::k_targ)},
      {"scenario.ds_factor", real(&SimConfig::ds_factor)},
      {"circle.radius", real_at([](SimConfig& c) -> double& { return c.circle.radius; })},
      {"circle.ax", real_at([](SimConfig& c) -> double& { return c.circle.a.x; })},
      {"circle.ay", real_at([](SimConfig& c) -> double& { return c.circle.a.y; })},
      {"circle.bx", real_at([](SimConfig& c) -> double& { return c.circle.b.x; })},
      {"circle.by", real_at([](SimConfig& c) -> double& { return c.circle.b.y; })},
      {"circle.cx", real_at([](SimConfig& c) -> double& { return c.circle.c.x; })},
      {"circle.cy", real_at([](SimConfig& c) -> double& { return c.circle.c.y; })},
      {"heart.height", real_at([](SimConfig& c) -> double& { return c.heart.height; })},
      {"heart.contraction", real_at([](SimConfig& c) -> double& { return c.heart.contraction; })},
      {"heart.gap", real_at([](SimConfig& c) -> double& { return c.heart.gap; })},
      {"heart.center_x", real_at([](SimConfig& c) -> double& { return c.heart.center.x; })},
      {"heart.center_y", real_at([](SimConfig& c) -> double& { return c.heart.center.y; })},
      {"swimmer.body_length", real_at([](SimConfig& c) -> double& { return c.swimmer.body_length; })},
      {"swimmer.tail_deflection", real_at([](SimConfig& c) -> double& { return c.swimmer.tail_deflection; })},
      {"swimmer.head_x", real_at([](SimConfig& c) -> double& { return c.swimmer.head.x; })},
      {"swimmer.head_y", real_at([](SimConfig& c) -> double& { return c.swimmer.head.y; })},
      {"swimmer.stroke_period", real_at([](SimConfig& c) -> double& { return c.swimmer.stroke_period; })},
      {"swimmer.ups_fraction", real_at([](SimConfig& c) -> double& { return c.swimmer.ups_fraction; })},
      {"swimmer.k_spr", real_at([](SimConfig& c) -> double& { return c.swimmer.k_spr; })},
      {"swimmer.k_beam", real_at([](SimConfig& c) -> double& { return c.swimmer.k_beam; })},
      {"geometry.vertex", path_at([](SimConfig& c) -> std::filesystem::path& { return c.geometry.vertex; })},
      {"geometry.state_a", path_at([](SimConfig& c) -> std::filesystem::path& { return c.geometry.state_a; })},
      {"geometry.state_b", path_at([](SimConfig& c) -> std::filesystem::path& { return c.geometry.state_b; })},
      {"geometry.state_c", path_at([](SimConfig& c) -> std::filesystem::path& { return c.geometry.state_c; })},
      {"output.dir", path_at([](SimConfig& c) -> std::filesystem::path& { return c.output_dir; })},
      {"output.eulerian", {[](const SimConfig& c) { return std::string(c.eulerian_dumps ? "true" : "false"); },
                           [](SimConfig& c, const std::string& v) { c.eulerian_dumps = to_bool(v); }}},
  };
  return table;
}

const Key* find_key(const std::string& name) {
  for (const auto& [k, key] : key_table())
    if (k == name) return &key;
  return nullptr;
}

}  // namespace

void validate(const SimConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  try {
    ibs::validate(c.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  need(c.rho > 0.0, "fluid.rho must be positive");
  need(c.mu >= 0.0, "fluid.mu must be non-negative");
  need(c.dt > 0.0, "time.dt must be positive");
  need(c.t_final >= 0.0, "time.t_final must be non-negative");
  need(c.print_dump >= 1, "time.print_dump must be at least 1");
  need(c.ds_factor > 0.0, "scenario.ds_factor must be positive");
  if (c.blend == BlendKind::Cubic || c.scenario == ScenarioKind::Swimmer) {
    need(c.p1 > 0.0 && c.p1 < 1.0, "scenario.p1 must lie in (0,1)");
    need(c.p2 > 0.0 && c.p2 < 1.0, "scenario.p2 must lie in (0,1)");
    need(c.p1 < c.p2, "scenario.p1 must be smaller than scenario.p2");
  }
  switch (c.scenario) {
    case ScenarioKind::Circle:
      need(c.circle.radius > 0.0, "circle.radius must be positive");
      [[fallthrough]];
    case ScenarioKind::Heart:
      need(c.t1 > 0.0 && c.t2 > 0.0, "scenario.t1 and scenario.t2 must be positive");
      need(c.t_rest >= 0.0, "scenario.t_rest must be non-negative");
      need(c.k_targ > 0.0, "scenario.k_targ must be positive");
      if (c.scenario == ScenarioKind::Heart) {
        need(c.heart.height > 0.0, "heart.height must be positive");
        need(c.heart.contraction > 0.0, "heart.contraction must be positive");
        need(c.heart.gap > 0.0 && c.heart.gap < 0.5, "heart.gap must lie in (0, 0.5)");
      }
      break;
    case ScenarioKind::Swimmer:
      need(c.swimmer.body_length > 0.0, "swimmer.body_length must be positive");
      need(c.swimmer.stroke_period > 0.0, "swimmer.stroke_period must be positive");
      need(c.swimmer.ups_fraction > 0.0 && c.swimmer.ups_fraction < 1.0, "swimmer.ups_fraction must lie in (0,1)");
      need(c.swimmer.k_spr > 0.0, "swimmer.k_spr must be positive");
      need(c.swimmer.k_beam > 0.0, "swimmer.k_beam must be positive");
      need(c.swimmer.tail_deflection > 0.0, "swimmer.tail_deflection must be positive");
      break;
  }
}

SimConfig scenario_defaults(ScenarioKind kind) {
  SimConfig c;
  c.scenario = kind;
  switch (kind) {
    case ScenarioKind::Circle:
      c.grid = {32, 32, 1.0, 1.0};
      c.rho = 1000.0;
      c.mu = 1.0;
      c.dt = 1e-5;
      c.t_final = 0.02;
      c.print_dump = 50;
      c.blend = BlendKind::Cubic;
      c.p1 = 0.25;
      c.p2 = 0.925;
      c.t1 = 0.01;
      c.t_rest = 0.0;
      c.t2 = 0.01;
      c.k_targ = 1e12;
      break;
    case ScenarioKind::Heart:
      c.grid = {64, 64, 1.0, 1.0};
      c.rho = 1000.0;
      c.mu = 1.0;
      c.dt = 1e-5;
      c.t_final = 0.1;
      c.print_dump = 100;
      c.blend = BlendKind::Cubic;
      c.p1 = 0.25;
      c.p2 = 0.925;
      c.t1 = 0.02;
      c.t_rest = 0.01;
      c.t2 = 0.02;
      c.k_targ = 1e12;
      break;
    case ScenarioKind::Swimmer:
      // Reduced resolution (half the fine-mesh grid); not publication grade.
      c.grid = {256, 128, 4.0, 2.0};
      c.rho = 1000.0;
      c.mu = 10.0;
      c.dt = 1e-4;
      c.t_final = 6.0;
      c.print_dump = 250;
      c.blend = BlendKind::Cubic;
      c.p1 = 0.1;
      c.p2 = 0.9;
      c.ds_factor = 2.0;
      c.swimmer.k_spr = 1e8;
      c.swimmer.k_beam = 4e7;
      c.eulerian_dumps = false;
      break;
  }
  return c;
}

ParsedConfig parse_config(const std::string& text, const std::string& source) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::istringstream in(text);
  std::string raw, section;
  std::size_t lineno = 0;
  auto err = [&](std::size_t line, const std::string& msg) {
    return ConfigError(source + ":" + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw err(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw err(lineno, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw err(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw err(lineno, "missing key");
    if (value.empty()) throw err(lineno, "missing value for '" + key + "'");
    const std::string full = (section.empty() || key.find('.') != std::string::npos) ? key : section + "." + key;
    entries.push_back({full, {value, lineno}});
  }

  const Entry* name = nullptr;
  for (const auto& [k, e] : entries)
    if (k == "scenario.name") name = &e;
  if (!name) throw ConfigError(source + ": missing required key scenario.name");

  ParsedConfig out;
  try {
    out.config = scenario_defaults(to_scenario(name->value));
  } catch (const ConfigError& e) {
    throw err(name->line, e.what());
  }
  std::map<std::string, std::size_t> line_of;
  for (const auto& [k, e] : entries) {
    const Key* key = find_key(k);
    if (!key) {
      out.warnings.push_back(source + ":" + std::to_string(e.line) + ": unknown key '" + k + "' ignored");
      continue;
    }
    try {
      key->set(out.config, e.value);
    } catch (const ConfigError& ex) {
      throw err(e.line, k + ": " + ex.what());
    }
    line_of[k] = e.line;
  }
  try {
    validate(out.config);
  } catch (const ConfigError& ex) {
    // Point at the offending key when the message names one we read.
    const std::string msg = ex.what();
    for (const auto& [k, line] : line_of)
      if (msg.rfind(k, 0) == 0) throw err(line, msg);
    throw ConfigError(source + ": " + msg);
  }
  return out;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": file not found");
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_config(ss.str(), path.string());
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
  // Relative deck paths are resolved against the config file's directory.
  const auto base = path.parent_path();
  for (auto* p : {&parsed.config.geometry.vertex, &parsed.config.geometry.state_a, &parsed.config.geometry.state_b,
                  &parsed.config.geometry.state_c})
    if (!p->empty() && p->is_relative()) *p = base / *p;
  return parsed.config;
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const Key* k = find_key(key);
  if (!k) throw ConfigError("override: unknown key '" + key + "'");
  try {
    k->set(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError("override " + key + ": " + e.what());
  }
}

std::map<std::string, std::string> to_key_values(const SimConfig& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& [k, key] : key_table()) out[k] = key.get(cfg);
  return out;
}

std::string to_config_text(const SimConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& [k, key] : key_table()) {
    const auto dot = k.find('.');
    const std::string sec = k.substr(0, dot);
    const std::string value = key.get(cfg);
    if (value.empty()) continue;
    if (sec != section) {
      os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
      section = sec;
    }
    os << k.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

SimConfig preset(const std::string& name) {
  if (name == "circle-linear") {
    auto c = scenario_defaults(ScenarioKind::Circle);
    c.blend = BlendKind::Linear;
    return c;
  }
  if (name == "circle-cubic" || name == "circle") return scenario_defaults(ScenarioKind::Circle);
  if (name == "heart") return scenario_defaults(ScenarioKind::Heart);
  if (name == "swimmer") return scenario_defaults(ScenarioKind::Swimmer);
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"circle-linear", "circle-cubic", "heart", "swimmer"}; }

std::vector<SweepPoint> sweep(const std::string& name) {
  const SimConfig base = scenario_defaults(ScenarioKind::Swimmer);
  std::vector<SweepPoint> pts;
  auto add_p = [&](double p1, double p2) {
    auto c = base;
    c.p1 = p1;
    c.p2 = p2;
    pts.push_back({"p1_" + format_double(p1) + "_p2_" + format_double(p2), c});
  };
  if (name == "swimmer-case1") {
    for (auto [a, b] : {std::pair{0.1, 0.9}, {0.2, 0.8}, {0.3, 0.7}, {0.4, 0.6}}) add_p(a, b);
  } else if (name == "swimmer-case2") {
    for (auto [a, b] : {std::pair{0.1, 0.9}, {0.1, 0.7}, {0.1, 0.5}, {0.1, 0.3}}) add_p(a, b);
  } else if (name == "swimmer-case3") {
    // Upstroke share of the period: UPS = DWS, 75%, 50% and 25% of DWS.
    for (double ups : {0.5, 3.0 / 7.0, 1.0 / 3.0, 0.2}) {
      auto c = base;
      c.swimmer.ups_fraction = ups;
      pts.push_back({"ups_" + format_double(std::round(ups * 1000.0) / 1000.0), c});
    }
  } else if (name == "swimmer-viscosity") {
    for (double mu : {0.05, 5.0, 10.0, 50.0, 500.0, 5000.0}) {
      auto c = base;
      c.mu = mu;
      pts.push_back({"mu_" + format_double(mu), c});
    }
  } else {
    throw ConfigError("unknown sweep '" + name + "'");
  }
  return pts;
}

std::vector<std::string> sweep_names() {
  return {"swimmer-case1", "swimmer-case2", "swimmer-case3", "swimmer-viscosity"};
}

}  // namespace ibs
