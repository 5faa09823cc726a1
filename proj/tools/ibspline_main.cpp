// ibspline: coefficient tables, geometry decks, runs, sweeps and swim analysis.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ibspline/analysis.hpp"
#include "ibspline/config.hpp"
#include "ibspline/engine.hpp"
#include "ibspline/io.hpp"
#include "ibspline/spline.hpp"

namespace fs = std::filesystem;
using namespace ibs;

namespace {

fs::path output_root() {
  if (const char* e = std::getenv("IBSPLINE_OUTPUT_ROOT"); e && *e) return e;
  return "runs";
}

void print_coeffs(const CubicInterpolant& c, bool csv) {
  const char names[3] = {'a', 'b', 'c'};
  if (csv) {
    std::cout << "segment,t_lo,t_hi,c0,c1,c2,c3\n";
    const double lo[3] = {0.0, c.p1(), c.p2()}, hi[3] = {c.p1(), c.p2(), 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
      std::cout << names[k] << ',' << format_double(lo[k]) << ',' << format_double(hi[k]);
      for (double v : c.segment(k)) std::cout << ',' << format_double(v);
      std::cout << '\n';
    }
    return;
  }
  std::cout << "p1 = " << format_double(c.p1()) << ", p2 = " << format_double(c.p2()) << '\n';
  std::cout << std::fixed << std::setprecision(6);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& s = c.segment(k);
    for (std::size_t i = 0; i < 4; ++i)
      std::cout << "  " << names[k] << i << " = " << std::setw(12) << (s[i] == 0.0 ? 0.0 : s[i])
                << (i == 3 ? "\n" : "");
  }
  std::cout.unsetf(std::ios::floatfield);
}

void print_samples(const CubicInterpolant& c, int n) {
  std::cout << "t,g,dg,ddg\n";
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const auto d = eval_g_derivs(c, t);
    std::cout << format_double(t) << ',' << format_double(d.g) << ',' << format_double(d.dg) << ','
              << format_double(d.ddg) << '\n';
  }
}

SimConfig base_config(const std::string& config_path, const std::string& preset_name) {
  if (!config_path.empty()) return load_config(config_path);
  return preset(preset_name.empty() ? "circle-cubic" : preset_name);
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
  if (!out) throw std::runtime_error(p.string() + ": write failed");
}

int cmd_gen(const std::string& scenario, const fs::path& out) {
  SimConfig cfg = scenario == "circle-linear" || scenario == "circle-cubic" || scenario == "heart" || scenario == "swimmer"
                      ? preset(scenario)
                      : preset(scenario == "circle" ? "circle-cubic" : scenario);
  const Scene sc = build_scene(cfg);
  fs::create_directories(out);
  const std::string stem = to_string(cfg.scenario);
  write_vertex(out / (stem + ".vertex"), sc.mesh.points);
  std::vector<fs::path> states;
  const char* tags[] = {"state_a", "state_b", "state_c"};
  if (!sc.prescription.position_states.empty()) {
    for (std::size_t i = 0; i < sc.prescription.position_states.size(); ++i) {
      states.push_back(out / (stem + "." + tags[i] + ".pts"));
      write_vertex(states.back(), sc.prescription.position_states[i]);
    }
  } else {
    // Swimmer phases: regenerate the point states the curvatures come from.
    SwimmerShape shape;
    shape.body_length = cfg.swimmer.body_length;
    shape.tail_deflection = cfg.swimmer.tail_deflection;
    shape.head = cfg.swimmer.head;
    const auto [p1, p2] = make_swimmer(shape, cfg.ds_factor * cfg.h());
    states.push_back(out / (stem + ".phase1.pts"));
    write_vertex(states.back(), p1.points);
    states.push_back(out / (stem + ".phase2.pts"));
    write_vertex(states.back(), p2.points);
  }
  if (!sc.fibers.targets.empty()) write_targets(out / (stem + ".target"), sc.fibers.targets);
  if (!sc.fibers.springs.empty()) write_springs(out / (stem + ".spring"), sc.fibers.springs);
  if (!sc.fibers.beams.empty()) write_beams(out / (stem + ".beam"), sc.fibers.beams);

  cfg.geometry.vertex = stem + ".vertex";
  cfg.geometry.state_a = states[0].filename();
  if (states.size() > 1) cfg.geometry.state_b = states[1].filename();
  if (states.size() > 2) cfg.geometry.state_c = states[2].filename();
  write_text(out / (stem + ".cfg"), to_config_text(cfg));
  std::cout << "wrote " << stem << " decks (" << sc.mesh.points.size() << " nodes) to " << out.string() << '\n';
  return 0;
}

nlohmann::ordered_json summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["output_dir"] = s.output_dir.string();
  j["steps"] = s.steps;
  j["dumps"] = s.dumps.size();
  j["wall_seconds"] = s.wall_seconds;
  j["manifest"] = s.manifest.string();
  return j;
}

struct PointResult {
  std::string label;
  fs::path dir;
  bool ok = false;
  std::string error;
  RunSummary summary;
};

int cmd_sweep(const std::string& name, const fs::path& root, unsigned jobs, const std::vector<std::string>& overrides,
              bool force) {
  auto points = sweep(name);
  for (auto& p : points)
    for (const auto& o : overrides) apply_override(p.config, o);
  const fs::path dir = root / name;
  fs::create_directories(dir);
  std::vector<PointResult> results(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    results[i].label = points[i].label;
    results[i].dir = dir / points[i].label;
    points[i].config.output_dir = results[i].dir;
  }

  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
      {
        std::lock_guard lk(log);
        std::cerr << "[sweep] start " << points[i].label << '\n';
      }
      try {
        results[i].summary = run(points[i].config, {force, true});
        results[i].ok = true;
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
      std::lock_guard lk(log);
      std::cerr << "[sweep] " << (results[i].ok ? "done " : "FAILED ") << points[i].label
                << (results[i].ok ? "" : ": " + results[i].error) << '\n';
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  nlohmann::ordered_json m;
  m["sweep"] = name;
  m["overrides"] = overrides;
  auto& pj = m["points"] = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (const auto& r : results) {
    all_ok = all_ok && r.ok;
    nlohmann::ordered_json e{{"label", r.label}, {"dir", r.label}, {"ok", r.ok}};
    if (!r.ok) e["error"] = r.error;
    pj.push_back(e);
  }
  write_text(dir / "sweep.json", m.dump(2) + "\n");
  std::cout << m.dump(2) << '\n';
  return all_ok ? 0 : 1;
}

void analyze_one(const fs::path& run_dir, const std::string& label, const fs::path& csv_out, bool header) {
  const auto rr = load_run_records(run_dir);
  const auto rows = timeseries(rr.records, rr.body_length, rr.stroke_period);
  write_timeseries_csv(csv_out.empty() ? run_dir / "timeseries.csv" : csv_out, rows);
  const auto m = summarize(rr);
  if (header) std::cout << "run,strokes,distance_bl,avg_speed_bl_per_stroke,reynolds\n";
  std::cout << label << ',' << format_double(m.strokes) << ',' << format_double(m.distance_bl) << ','
            << format_double(m.average_speed_bl_per_stroke) << ',' << format_double(m.reynolds) << '\n';
}

int cmd_analyze(const fs::path& dir, const fs::path& csv_out) {
  if (!fs::exists(dir)) throw std::runtime_error(dir.string() + ": file not found");
  if (fs::exists(dir / "sweep.json")) {
    std::ifstream in(dir / "sweep.json");
    const auto m = nlohmann::json::parse(in);
    bool header = true;
    for (const auto& p : m.at("points")) {
      if (!p.value("ok", false)) continue;
      const std::string label = p.at("label").get<std::string>();
      analyze_one(dir / p.at("dir").get<std::string>(), label, {}, header);
      header = false;
    }
    return 0;
  }
  analyze_one(dir, dir.filename().string(), csv_out, true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spline-driven immersed boundary simulations"};
  app.require_subcommand(1, 1);

  auto* coeffs = app.add_subcommand("coeffs", "Solve and print the piecewise cubic blend coefficients");
  double p1 = 0.25, p2 = 0.925;
  bool csv = false;
  int samples = 0;
  coeffs->add_option("--p1", p1, "first mediary point")->capture_default_str();
  coeffs->add_option("--p2", p2, "second mediary point")->capture_default_str();
  coeffs->add_flag("--csv", csv, "CSV output");
  coeffs->add_option("--samples", samples, "also print g, g', g'' at this many intervals")->check(CLI::NonNegativeNumber);

  auto* gen = app.add_subcommand("gen", "Write geometry decks and a matching config for a scenario");
  std::string gen_scenario;
  fs::path gen_out;
  gen->add_option("--scenario", gen_scenario, "circle, circle-linear, heart or swimmer")->required();
  gen->add_option("--out", gen_out, "output directory")->required();

  auto* runc = app.add_subcommand("run", "Run one simulation");
  std::string config_path, preset_name;
  std::vector<std::string> overrides;
  fs::path run_out;
  bool force = false, quiet = false;
  auto* cfg_opt = runc->add_option("--config", config_path, "config file");
  runc->add_option("--preset", preset_name, "built-in preset instead of a config file")->excludes(cfg_opt);
  runc->add_option("--override", overrides, "section.key=value, repeatable");
  runc->add_option("--out", run_out, "output directory");
  runc->add_flag("--force", force, "replace a non-empty output directory");
  runc->add_flag("--quiet", quiet, "no progress on stderr");

  auto* sweepc = app.add_subcommand("sweep", "Run a named parameter sweep, one directory per point");
  std::string sweep_name;
  fs::path sweep_out;
  unsigned jobs = 1;
  std::vector<std::string> sweep_overrides;
  bool sweep_force = false;
  sweepc->add_option("--scenario", sweep_name, "swimmer-case1, swimmer-case2, swimmer-case3, swimmer-viscosity")
      ->required();
  sweepc->add_option("--out", sweep_out, "output root (default $IBSPLINE_OUTPUT_ROOT or ./runs)");
  sweepc->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  sweepc->add_option("--override", sweep_overrides, "section.key=value applied to every point");
  sweepc->add_flag("--force", sweep_force, "replace existing point directories");

  auto* an = app.add_subcommand("analyze", "Swim metrics from a run or sweep directory");
  fs::path an_dir, an_csv;
  an->add_option("--run", an_dir, "run or sweep directory")->required();
  an->add_option("--csv", an_csv, "timeseries output (default <run>/timeseries.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coeffs) {
      const auto c = solve_cubic_coeffs(p1, p2);
      print_coeffs(c, csv);
      if (samples > 0) print_samples(c, samples);
      return 0;
    }
    if (*gen) return cmd_gen(gen_scenario, gen_out);
    if (*runc) {
      if (config_path.empty() && preset_name.empty()) {
        std::cerr << "run: give --config <file> or --preset <name>\n";
        return 2;
      }
      SimConfig cfg = base_config(config_path, preset_name);
      for (const auto& o : overrides) apply_override(cfg, o);
      if (!run_out.empty()) {
        cfg.output_dir = run_out;
      } else if (std::getenv("IBSPLINE_OUTPUT_ROOT")) {
        const std::string stem = !preset_name.empty() ? preset_name : fs::path(config_path).stem().string();
        cfg.output_dir = output_root() / stem;
      }
      validate(cfg);
      const auto s = run(cfg, {force, quiet});
      std::cout << summary_json(s).dump(2) << '\n';
      return 0;
    }
    if (*sweepc) return cmd_sweep(sweep_name, sweep_out.empty() ? output_root() : sweep_out, jobs, sweep_overrides,
                                  sweep_force);
    if (*an) return cmd_analyze(an_dir, an_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
