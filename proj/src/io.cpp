#include "ibspline/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

namespace ibs {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_double_full(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const fs::path& path, std::size_t line, const std::string& msg) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const fs::path& path, std::size_t line, const std::string& tok) {
  double v = 0.0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size() || !std::isfinite(v))
    fail(path, line, "expected a number, got '" + tok + "'");
  return v;
}

std::size_t parse_index(const fs::path& path, std::size_t line, const std::string& tok) {
  long long v = 0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size())
    fail(path, line, "expected an integer, got '" + tok + "'");
  if (v < 1) fail(path, line, "indices are 1-based, got " + tok);
  return static_cast<std::size_t>(v - 1);
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": file not found or unreadable");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

// Reads non-blank lines. When `header` is required or detected (a single
// integer token on the first line), the count is checked against the body.
std::vector<Record> read_deck(const fs::path& path, std::size_t columns, bool header_required) {
  auto in = open_in(path);
  std::vector<Record> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (!toks.empty()) rows.push_back({lineno, std::move(toks)});
  }
  bool has_header = header_required;
  if (!rows.empty() && rows.front().tokens.size() == 1) has_header = true;
  if (has_header) {
    if (rows.empty()) fail(path, 1, "missing record count");
    const auto& h = rows.front();
    if (h.tokens.size() != 1) fail(path, h.line, "first line must hold the record count");
    long long count = 0;
    const auto& tok = h.tokens[0];
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), count);
    if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size() || count < 0)
      fail(path, h.line, "invalid record count '" + tok + "'");
    rows.erase(rows.begin());
    if (static_cast<std::size_t>(count) != rows.size())
      fail(path, h.line, "header declares " + std::to_string(count) + " records but body has " +
                             std::to_string(rows.size()));
  }
  for (const auto& r : rows)
    if (r.tokens.size() != columns)
      fail(path, r.line, "expected " + std::to_string(columns) + " columns, got " + std::to_string(r.tokens.size()));
  return rows;
}

PointList parse_points(const fs::path& path, bool header_required) {
  PointList pts;
  for (const auto& r : read_deck(path, 2, header_required))
    pts.push_back({parse_double(path, r.line, r.tokens[0]), parse_double(path, r.line, r.tokens[1])});
  return pts;
}

}  // namespace

void write_vertex(const fs::path& path, const PointList& pts) {
  auto out = open_out(path);
  out << pts.size() << '\n';
  for (const auto& p : pts) out << format_double_full(p.x) << ' ' << format_double_full(p.y) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

PointList read_vertex(const fs::path& path) { return parse_points(path, true); }
PointList read_points(const fs::path& path) { return parse_points(path, false); }

void write_targets(const fs::path& path, const TargetSet& targets) {
  auto out = open_out(path);
  out << targets.size() << '\n';
  for (const auto& t : targets) out << t.node + 1 << ' ' << format_double_full(t.stiffness) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

TargetSet read_targets(const fs::path& path, const PointList& vertices) {
  TargetSet out;
  for (const auto& r : read_deck(path, 2, true)) {
    const std::size_t node = parse_index(path, r.line, r.tokens[0]);
    if (node >= vertices.size()) fail(path, r.line, "target node beyond vertex list");
    out.push_back({node, parse_double(path, r.line, r.tokens[1]), vertices[node]});
  }
  return out;
}

void write_springs(const fs::path& path, const SpringSet& springs) {
  auto out = open_out(path);
  out << springs.size() << '\n';
  for (const auto& s : springs)
    out << s.master + 1 << ' ' << s.slave + 1 << ' ' << format_double_full(s.stiffness) << ' '
        << format_double_full(s.rest_length) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

SpringSet read_springs(const fs::path& path) {
  SpringSet out;
  for (const auto& r : read_deck(path, 4, true))
    out.push_back({parse_index(path, r.line, r.tokens[0]), parse_index(path, r.line, r.tokens[1]),
                   parse_double(path, r.line, r.tokens[2]), parse_double(path, r.line, r.tokens[3])});
  return out;
}

void write_beams(const fs::path& path, const BeamSet& beams) {
  auto out = open_out(path);
  out << beams.size() << '\n';
  for (const auto& b : beams)
    out << b.left + 1 << ' ' << b.mid + 1 << ' ' << b.right + 1 << ' ' << format_double_full(b.stiffness) << ' '
        << format_double_full(b.curvature.x) << ' ' << format_double_full(b.curvature.y) << '\n';
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

BeamSet read_beams(const fs::path& path) {
  BeamSet out;
  for (const auto& r : read_deck(path, 6, true))
    out.push_back({parse_index(path, r.line, r.tokens[0]), parse_index(path, r.line, r.tokens[1]),
                   parse_index(path, r.line, r.tokens[2]), parse_double(path, r.line, r.tokens[3]),
                   {parse_double(path, r.line, r.tokens[4]), parse_double(path, r.line, r.tokens[5])}});
  return out;
}

namespace {

void vtk_grid_header(std::ostream& os, const std::string& name, const Grid& g) {
  const std::string h = format_double(g.h());
  os << "# vtk DataFile Version 2.0\n"
     << name << "\n"
     << "ASCII\n"
     << "DATASET STRUCTURED_POINTS\n"
     << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n"
     << "ORIGIN 0 0 0\n"
     << "SPACING " << h << ' ' << h << " 1\n"
     << "POINT_DATA " << g.size() << '\n';
}

}  // namespace

void write_vtk_scalar(std::ostream& os, const std::string& name, const Grid& g, const Field& f) {
  vtk_grid_header(os, name, g);
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) os << (i ? " " : "") << format_double(f[g.index(i, j)]);
    os << '\n';
  }
}

void write_vtk_vectors(std::ostream& os, const std::string& name, const Grid& g, const Field& u, const Field& v) {
  vtk_grid_header(os, name, g);
  os << "VECTORS " << name << " double\n";
  for (std::size_t k = 0; k < g.size(); ++k) os << format_double(u[k]) << ' ' << format_double(v[k]) << " 0\n";
}

void write_vtk_points(std::ostream& os, const std::string& name, const PointList& pts) {
  os << "# vtk DataFile Version 2.0\n"
     << name << "\n"
     << "ASCII\n"
     << "DATASET UNSTRUCTURED_GRID\n"
     << "POINTS " << pts.size() << " double\n";
  for (const auto& p : pts) os << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
  os << "CELLS " << pts.size() << ' ' << 2 * pts.size() << '\n';
  for (std::size_t i = 0; i < pts.size(); ++i) os << "1 " << i << '\n';
  os << "CELL_TYPES " << pts.size() << '\n';
  for (std::size_t i = 0; i < pts.size(); ++i) os << "1\n";
}

std::vector<fs::path> write_fields_vtk(const fs::path& dir, std::size_t dump, const FluidState& s,
                                       const Field& vort, const PointList& lag) {
  std::ostringstream idx;
  idx << std::setw(5) << std::setfill('0') << dump;
  auto name = [&](const char* stem) { return dir / (std::string(stem) + "." + idx.str() + ".vtk"); };

  Field umag(s.u.size());
  for (std::size_t k = 0; k < umag.size(); ++k) umag[k] = std::hypot(s.u[k], s.v[k]);

  std::vector<fs::path> written;
  auto emit = [&](const fs::path& p, auto&& body) {
    if (fs::exists(p)) throw std::runtime_error(p.string() + ": refusing to overwrite an existing dump");
    auto out = open_out(p);
    body(out);
    if (!out) throw std::runtime_error(p.string() + ": write failed");
    written.push_back(p);
  };
  emit(name("u_mag"), [&](std::ostream& os) { write_vtk_scalar(os, "u_mag", s.grid, umag); });
  emit(name("vorticity"), [&](std::ostream& os) { write_vtk_scalar(os, "vorticity", s.grid, vort); });
  emit(name("pressure"), [&](std::ostream& os) { write_vtk_scalar(os, "pressure", s.grid, s.p); });
  emit(name("velocity"), [&](std::ostream& os) { write_vtk_vectors(os, "velocity", s.grid, s.u, s.v); });
  emit(name("lagrangian"), [&](std::ostream& os) { write_vtk_points(os, "lagrangian", lag); });
  return written;
}

void write_timeseries_csv(std::ostream& os, const std::vector<TimeseriesRow>& rows) {
  os << kTimeseriesHeader << '\n';
  for (const auto& r : rows)
    os << format_double(r.time) << ',' << format_double(r.strokes) << ',' << format_double(r.head_x) << ','
       << format_double(r.head_y) << ',' << format_double(r.distance_bl) << ','
       << format_double(r.speed_bl_per_stroke) << '\n';
}

void write_timeseries_csv(const fs::path& path, const std::vector<TimeseriesRow>& rows) {
  auto out = open_out(path);
  write_timeseries_csv(out, rows);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<TimeseriesRow> read_timeseries_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != kTimeseriesHeader) fail(path, 1, "unexpected header");
  std::vector<TimeseriesRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cols.push_back(cell);
    if (cols.size() != 6) fail(path, lineno, "expected 6 columns");
    TimeseriesRow r;
    double* dst[] = {&r.time, &r.strokes, &r.head_x, &r.head_y, &r.distance_bl, &r.speed_bl_per_stroke};
    for (std::size_t c = 0; c < 6; ++c) *dst[c] = parse_double(path, lineno, cols[c]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ibs
