#include "ibspline/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace ibs {

void check_records(const std::vector<SwimRecord>& r, std::size_t min_count) {
  if (r.size() < min_count)
    throw std::invalid_argument("need at least " + std::to_string(min_count) + " records, got " +
                                std::to_string(r.size()));
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i].time > r[i - 1].time))
      throw std::invalid_argument("record times must strictly increase (index " + std::to_string(i) + ")");
}

namespace {

void check_scales(double L, double T) {
  if (!(L > 0.0) || !(T > 0.0)) throw std::invalid_argument("body length and stroke period must be positive");
}

}  // namespace

StrokeSeries distance_vs_strokes(const std::vector<SwimRecord>& r, double L, double T) {
  check_records(r, 2);
  check_scales(L, T);
  StrokeSeries s;
  for (const auto& rec : r) {
    s.strokes.push_back(rec.time / T);
    s.values.push_back((rec.head.x - r.front().head.x) / L);
  }
  return s;
}

StrokeSeries speed_vs_strokes(const std::vector<SwimRecord>& r, double L, double T) {
  check_records(r, 3);
  check_scales(L, T);
  const auto d = distance_vs_strokes(r, L, T);
  const std::size_t n = d.values.size();
  StrokeSeries s;
  s.strokes = d.strokes;
  s.values.resize(n);
  auto slope = [&](std::size_t a, std::size_t b) { return (d.values[b] - d.values[a]) / (d.strokes[b] - d.strokes[a]); };
  s.values[0] = slope(0, 1);
  for (std::size_t i = 1; i + 1 < n; ++i) s.values[i] = slope(i - 1, i + 1);
  s.values[n - 1] = slope(n - 2, n - 1);
  return s;
}

double window_speed(const StrokeSeries& d, double s0, double s1) {
  if (d.strokes.size() < 2) throw std::invalid_argument("window_speed: need at least 2 samples");
  if (!(s1 > s0)) throw std::invalid_argument("window_speed: empty window");
  if (s0 < d.strokes.front() || s1 > d.strokes.back())
    throw std::out_of_range("window_speed: window outside the record");
  auto at = [&](double s) {
    auto it = std::upper_bound(d.strokes.begin(), d.strokes.end(), s);
    if (it == d.strokes.end()) return d.values.back();
    const std::size_t j = static_cast<std::size_t>(it - d.strokes.begin());
    const std::size_t i = j - 1;
    const double w = (s - d.strokes[i]) / (d.strokes[j] - d.strokes[i]);
    return d.values[i] + w * (d.values[j] - d.values[i]);
  };
  return (at(s1) - at(s0)) / (s1 - s0);
}

double average_speed(const std::vector<SwimRecord>& r, double L, double T, double skip) {
  const auto d = distance_vs_strokes(r, L, T);
  double s0 = d.strokes.front() + skip;
  if (s0 >= d.strokes.back()) s0 = d.strokes.front();
  return window_speed(d, s0, d.strokes.back());
}

double reynolds(double rho, double velocity, double length, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("reynolds: viscosity must be positive");
  return rho * velocity * length / mu;
}

std::vector<TimeseriesRow> timeseries(const std::vector<SwimRecord>& r, double L, double T) {
  std::vector<TimeseriesRow> rows;
  if (r.empty()) return rows;
  const auto d = r.size() >= 2 ? distance_vs_strokes(r, L, T) : StrokeSeries{{r[0].time / T}, {0.0}};
  const auto v = r.size() >= 3 ? speed_vs_strokes(r, L, T) : StrokeSeries{d.strokes, std::vector<double>(r.size())};
  for (std::size_t i = 0; i < r.size(); ++i)
    rows.push_back({r[i].time, d.strokes[i], r[i].head.x, r[i].head.y, d.values[i], v.values[i]});
  return rows;
}

RunRecords load_run_records(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.json";
  std::ifstream in(mpath);
  if (!in) throw std::runtime_error(mpath.string() + ": file not found");
  nlohmann::json m;
  try {
    in >> m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(mpath.string() + ": " + e.what());
  }
  RunRecords out;
  out.scenario = m.value("scenario", "");
  out.body_length = m.value("body_length", 1.0);
  out.stroke_period = m.value("stroke_period", 1.0);
  if (m.contains("config")) {
    const auto& c = m["config"];
    if (c.contains("fluid.rho")) out.rho = std::stod(c["fluid.rho"].get<std::string>());
    if (c.contains("fluid.mu")) out.mu = std::stod(c["fluid.mu"].get<std::string>());
  }
  const std::size_t head = m.value("head_node", std::size_t{0});
  for (const auto& d : m.at("dumps")) {
    const auto pts = read_vertex(dir / d.at("lagrangian").get<std::string>());
    if (head >= pts.size()) throw std::runtime_error("head node outside the Lagrangian dump");
    out.records.push_back({d.at("time").get<double>(), pts[head]});
  }
  return out;
}

RunMetrics summarize(const RunRecords& run) {
  RunMetrics m;
  const auto& r = run.records;
  check_records(r, 2);
  const auto d = distance_vs_strokes(r, run.body_length, run.stroke_period);
  m.strokes = d.strokes.back() - d.strokes.front();
  m.distance_bl = d.values.back();
  m.average_speed_bl_per_stroke = average_speed(r, run.body_length, run.stroke_period);
  if (run.mu > 0.0) {
    const double v = m.average_speed_bl_per_stroke * run.body_length / run.stroke_period;
    m.reynolds = reynolds(run.rho, std::abs(v), run.body_length, run.mu);
  }
  return m;
}

}  // namespace ibs
