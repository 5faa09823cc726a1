#pragma once

// Swimming-performance post-processing over head-position records.

#include <cstddef>
#include <filesystem>
#include <vector>

#include "ibspline/io.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

struct SwimRecord {
  double time = 0.0;
  Vec2 head;
};

/// Values sampled against stroke count t / T.
struct StrokeSeries {
  std::vector<double> strokes;
  std::vector<double> values;
};

/// Throws std::invalid_argument unless times strictly increase.
void check_records(const std::vector<SwimRecord>& r, std::size_t min_count);

/// (x_i - x_0) / L against t_i / T. Needs at least 2 records.
StrokeSeries distance_vs_strokes(const std::vector<SwimRecord>& r, double body_length, double stroke_period);

/// Head x-velocity in body lengths per stroke: centred differences inside,
/// one-sided at the ends. Needs at least 3 records.
StrokeSeries speed_vs_strokes(const std::vector<SwimRecord>& r, double body_length, double stroke_period);

/// Mean speed over [s0, s1] strokes from the distance series, interpolated
/// linearly between samples.
double window_speed(const StrokeSeries& distance, double s0, double s1);

/// Distance over strokes with the first `skip_strokes` strokes excluded.
/// Falls back to the whole record if it is shorter than the skip.
double average_speed(const std::vector<SwimRecord>& r, double body_length, double stroke_period,
                     double skip_strokes = 1.0);

/// rho V L / mu; throws std::invalid_argument for mu <= 0.
double reynolds(double rho, double velocity, double length, double mu);

std::vector<TimeseriesRow> timeseries(const std::vector<SwimRecord>& r, double body_length, double stroke_period);

/// Reads manifest.json and the Lagrangian dumps of a run directory.
struct RunRecords {
  std::vector<SwimRecord> records;
  double body_length = 1.0;
  double stroke_period = 1.0;
  double rho = 0.0;
  double mu = 0.0;
  std::string scenario;
};
RunRecords load_run_records(const std::filesystem::path& run_dir);

struct RunMetrics {
  double strokes = 0.0;
  double distance_bl = 0.0;
  double average_speed_bl_per_stroke = 0.0;
  double reynolds = 0.0;  ///< using the average speed and the body length
};
RunMetrics summarize(const RunRecords& run);

}  // namespace ibs
