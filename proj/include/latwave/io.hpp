#pragma once

// File formats. CSV floats are written with 17 significant digits through
// std::to_chars, so identical inputs reproduce byte-identical outputs on any
// locale. Structured metadata goes to JSON sidecars.

#include <filesystem>
#include <string>
#include <vector>

#include "latwave/critical_points.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/greens.hpp"
#include "latwave/transient.hpp"

#include <nlohmann/json_fwd.hpp>

namespace latwave {

/// Shortest-exact decimal for doubles in CSV cells (17 significant digits).
std::string format_double(double value);

void write_surface_csv(const std::filesystem::path& path, const SurfaceGrid& grid);
void write_contours_json(const std::filesystem::path& path, const IsoContour& contour);
void write_critical_json(const std::filesystem::path& path,
                         const std::vector<CriticalPoint>& points);

void write_field_csv(const std::filesystem::path& path, const AsymptoticField& field);
void write_field_meta_json(const std::filesystem::path& path, const AsymptoticField& field,
                           const Displacement2& P);

void write_snapshot_csv(const std::filesystem::path& path, const AmplitudeSnapshot& snap);
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& times,
                     const std::vector<Displacement2>& amplitude);
void write_sim_meta_json(const std::filesystem::path& path, const SimConfig& cfg,
                         const std::vector<std::string>& snapshot_files,
                         const std::string& trace_file);

/// Run manifest: command, parameters, tool version and produced files.
void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& parameters, const std::vector<std::string>& outputs);

SimConfig read_sim_config_json(const std::filesystem::path& path);

/// A field loaded back from CSV: square node range [-extent, extent]^2.
struct LoadedField {
  int extent = 0;
  double t = 0.0; // filled from metadata when available
  std::vector<Displacement2> values;
  std::vector<unsigned char> masked;

  int side() const { return 2 * extent + 1; }
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n + extent) * side() + (m + extent);
  }
  AmplitudeSnapshot to_snapshot() const;
};
LoadedField read_field_csv(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

} // namespace latwave
