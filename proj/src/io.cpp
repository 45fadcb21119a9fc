#include "latwave/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latwave/errors.hpp"

namespace latwave {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary); // binary: no newline translation
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

json displacement_to_json(const Displacement2& d) {
  // Real drive amplitudes are the common case; keep them plain.
  if (d.x.imag() == 0.0 && d.y.imag() == 0.0) return json::array({d.x.real(), d.y.real()});
  return json::array({d.x.real(), d.x.imag(), d.y.real(), d.y.imag()});
}

} // namespace

void write_surface_csv(const fs::path& path, const SurfaceGrid& grid) {
  std::ofstream out = open_out(path);
  out << "kx,ky,omega\n";
  for (int iy = 0; iy < grid.resolution; ++iy)
    for (int ix = 0; ix < grid.resolution; ++ix)
      out << format_double(grid.kx_at(ix)) << ',' << format_double(grid.ky_at(iy)) << ','
          << format_double(grid.at(ix, iy)) << '\n';
  finish(out, path);
}

void write_contours_json(const fs::path& path, const IsoContour& contour) {
  json doc;
  doc["branch"] = contour.branch;
  doc["omega"] = contour.omega;
  doc["tolerance"] = contour.tolerance;
  json lines = json::array();
  for (const auto& line : contour.polylines) {
    json pts = json::array();
    for (const WaveVector& v : line) pts.push_back(json::array({v.kx, v.ky}));
    lines.push_back(std::move(pts));
  }
  doc["polylines"] = std::move(lines);
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

void write_critical_json(const fs::path& path, const std::vector<CriticalPoint>& points) {
  json rows = json::array();
  for (const CriticalPoint& cp : points) {
    json row;
    row["branch"] = cp.branch;
    row["omega_star"] = cp.omega_star;
    row["kx"] = cp.k.kx;
    row["ky"] = cp.k.ky;
    row["class"] = to_string(cp.klass);
    row["a"] = cp.quad.a;
    row["b"] = cp.quad.b;
    row["c"] = cp.quad.c;
    row["label"] = cp.label;
    json angles = json::array();
    if (cp.klass == PointClass::saddle)
      for (double alpha : characteristic_fan(cp.quad, false).angles) angles.push_back(alpha);
    row["angles"] = std::move(angles);
    rows.push_back(std::move(row));
  }
  std::ofstream out = open_out(path);
  out << rows.dump(2) << '\n';
  finish(out, path);
}

namespace {

void write_grid_csv(std::ofstream& out, int extent, bool mask_column,
                    const std::vector<Displacement2>& values,
                    const std::vector<unsigned char>* masked) {
  out << "m,n,x,y,re_ux,im_ux,re_uy,im_uy";
  if (mask_column) out << ",masked";
  out << '\n';
  const int side = 2 * extent + 1;
  for (int n = -extent; n <= extent; ++n) {
    for (int m = -extent; m <= extent; ++m) {
      const std::size_t i = static_cast<std::size_t>(n + extent) * side + (m + extent);
      const Position pos = node_position({m, n});
      const Displacement2& d = values[i];
      out << m << ',' << n << ',' << format_double(pos.x) << ',' << format_double(pos.y) << ','
          << format_double(d.x.real()) << ',' << format_double(d.x.imag()) << ','
          << format_double(d.y.real()) << ',' << format_double(d.y.imag());
      if (mask_column) out << ',' << (masked && (*masked)[i] ? 1 : 0);
      out << '\n';
    }
  }
}

} // namespace

void write_field_csv(const fs::path& path, const AsymptoticField& field) {
  std::ofstream out = open_out(path);
  write_grid_csv(out, field.extent, true, field.values, &field.masked);
  finish(out, path);
}

void write_field_meta_json(const fs::path& path, const AsymptoticField& field,
                           const Displacement2& P) {
  json doc;
  doc["resonance"] = field.resonance;
  doc["omega_star"] = field.omega_star;
  doc["t"] = field.t;
  doc["P"] = displacement_to_json(P);
  doc["families"] = field.families;
  doc["extent"] = field.extent;
  doc["r_floor"] = field.r_floor;
  doc["star_angles"] = field.star_angles;
  doc["source_slope"] = field.source_slope;
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

void write_snapshot_csv(const fs::path& path, const AmplitudeSnapshot& snap) {
  std::ofstream out = open_out(path);
  write_grid_csv(out, snap.half_size, false, snap.amplitude, nullptr);
  finish(out, path);
}

void write_trace_csv(const fs::path& path, const std::vector<double>& times,
                     const std::vector<Displacement2>& amplitude) {
  std::ofstream out = open_out(path);
  out << "t,re_ux,im_ux,re_uy,im_uy\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Displacement2& d = amplitude[i];
    out << format_double(times[i]) << ',' << format_double(d.x.real()) << ','
        << format_double(d.x.imag()) << ',' << format_double(d.y.real()) << ','
        << format_double(d.y.imag()) << '\n';
  }
  finish(out, path);
}

void write_sim_meta_json(const fs::path& path, const SimConfig& cfg,
                         const std::vector<std::string>& snapshot_files,
                         const std::string& trace_file) {
  json doc;
  doc["half_size"] = cfg.half_size;
  doc["dt"] = cfg.dt;
  doc["t_end"] = cfg.t_end;
  doc["drive_omega"] = cfg.drive_omega;
  doc["drive_P"] = displacement_to_json(cfg.drive_P);
  doc["drive_node"] = json::array({cfg.drive_node.m, cfg.drive_node.n});
  doc["snapshot_times"] = cfg.snapshot_times;
  doc["snapshot_files"] = snapshot_files;
  doc["trace_file"] = trace_file;
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

void write_manifest(const fs::path& path, const std::string& command, const json& parameters,
                    const std::vector<std::string>& outputs) {
  json doc;
  doc["command"] = command;
  doc["parameters"] = parameters;
  doc["tool_version"] = "1.0.0";
  doc["outputs"] = outputs;
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

json read_json(const fs::path& path) {
  std::ifstream in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return doc;
}

namespace {

Displacement2 displacement_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array() || (arr.size() != 2 && arr.size() != 4))
    throw ValidationError(where + ": expected [px, py] or [re_x, im_x, re_y, im_y]");
  if (arr.size() == 2)
    return {complexd(arr[0].get<double>(), 0.0), complexd(arr[1].get<double>(), 0.0)};
  return {complexd(arr[0].get<double>(), arr[1].get<double>()),
          complexd(arr[2].get<double>(), arr[3].get<double>())};
}

} // namespace

SimConfig read_sim_config_json(const fs::path& path) {
  const json doc = read_json(path);
  SimConfig cfg;
  try {
    cfg.half_size = doc.at("half_size").get<int>();
    cfg.dt = doc.at("dt").get<double>();
    cfg.t_end = doc.at("t_end").get<double>();
    cfg.drive_omega = doc.at("drive_omega").get<double>();
    cfg.drive_P = displacement_from_json(doc.at("drive_P"), "drive_P");
    if (doc.contains("drive_node")) {
      const json& node = doc.at("drive_node");
      cfg.drive_node = {node.at(0).get<int>(), node.at(1).get<int>()};
    }
    if (doc.contains("snapshot_times"))
      cfg.snapshot_times = doc.at("snapshot_times").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError("sim config " + path.string() + ": " + e.what());
  }
  return cfg;
}

AmplitudeSnapshot LoadedField::to_snapshot() const {
  AmplitudeSnapshot snap;
  snap.t = t;
  snap.half_size = extent;
  snap.amplitude = values;
  return snap;
}

LoadedField read_field_csv(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path.string());

  struct Row {
    int m, n;
    Displacement2 d;
    unsigned char masked;
  };
  std::vector<Row> rows;
  int max_abs = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 8) throw IoError("short CSV row in " + path.string());
    Row r;
    try {
      r.m = std::stoi(cells[0]);
      r.n = std::stoi(cells[1]);
      r.d.x = complexd(std::stod(cells[4]), std::stod(cells[5]));
      r.d.y = complexd(std::stod(cells[6]), std::stod(cells[7]));
      r.masked = cells.size() > 8 && std::stoi(cells[8]) != 0 ? 1 : 0;
    } catch (const std::exception&) {
      throw IoError("unparsable CSV row in " + path.string() + ": " + line);
    }
    max_abs = std::max({max_abs, std::abs(r.m), std::abs(r.n)});
    rows.push_back(r);
  }
  LoadedField field;
  field.extent = max_abs;
  const std::size_t total = static_cast<std::size_t>(field.side()) * field.side();
  if (rows.size() != total)
    throw ValidationError("field CSV " + path.string() + " is not a full square node range");
  field.values.assign(total, Displacement2{});
  field.masked.assign(total, 0);
  for (const Row& r : rows) {
    field.values[field.index(r.m, r.n)] = r.d;
    field.masked[field.index(r.m, r.n)] = r.masked;
  }
  return field;
}

} // namespace latwave
