#pragma once

// Plain-text geometry decks, VTK legacy dumps and the swimming timeseries.
//
// Deck layout (every file starts with its record count):
//   .vertex / .pts   N, then N lines "x y"
//   .target          N, then N lines "node k_targ"             (1-based node)
//   .spring          N, then N lines "master slave k_spr R_L"  (1-based)
//   .beam            N, then N lines "i1 i2 i3 k_beam C_x C_y" (1-based)
// All writers are locale-independent.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibspline/fibers.hpp"
#include "ibspline/fluid.hpp"
#include "ibspline/vec2.hpp"

namespace ibs {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form.
std::string format_double(double v);
/// 17 significant digits, for decks.
std::string format_double_full(double v);

void write_vertex(const std::filesystem::path& path, const PointList& pts);
/// Requires the count header.
PointList read_vertex(const std::filesystem::path& path);
/// Accepts the count header or a bare list of "x y" lines.
PointList read_points(const std::filesystem::path& path);

void write_targets(const std::filesystem::path& path, const TargetSet& targets);
/// Target positions are taken from `vertices`.
TargetSet read_targets(const std::filesystem::path& path, const PointList& vertices);
void write_springs(const std::filesystem::path& path, const SpringSet& springs);
SpringSet read_springs(const std::filesystem::path& path);
void write_beams(const std::filesystem::path& path, const BeamSet& beams);
BeamSet read_beams(const std::filesystem::path& path);

// VTK legacy ASCII writers.
void write_vtk_scalar(std::ostream& os, const std::string& name, const Grid& g, const Field& f);
void write_vtk_vectors(std::ostream& os, const std::string& name, const Grid& g, const Field& u,
                       const Field& v);
void write_vtk_points(std::ostream& os, const std::string& name, const PointList& pts);

/// Writes u_mag, vorticity, pressure, velocity and lagrangian files for one
/// dump, each named <stem>.<dump index, 5 digits>.vtk. Returns the paths.
/// Throws if any target file already exists.
std::vector<std::filesystem::path> write_fields_vtk(const std::filesystem::path& dir, std::size_t dump,
                                                    const FluidState& s, const Field& vort,
                                                    const PointList& lag);

struct TimeseriesRow {
  double time = 0.0;
  double strokes = 0.0;
  double head_x = 0.0;
  double head_y = 0.0;
  double distance_bl = 0.0;
  double speed_bl_per_stroke = 0.0;
};

inline constexpr const char* kTimeseriesHeader = "time,strokes,head_x,head_y,distance_bl,speed_bl_per_stroke";

void write_timeseries_csv(std::ostream& os, const std::vector<TimeseriesRow>& rows);
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<TimeseriesRow>& rows);
std::vector<TimeseriesRow> read_timeseries_csv(const std::filesystem::path& path);

}  // namespace ibs
