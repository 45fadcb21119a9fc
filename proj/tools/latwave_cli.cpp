// Command-line front end: every analysis as a reproducible, file-emitting
// command. Outputs land in --out DIR together with a manifest.json capturing
// the command, parameters and produced files; identical inputs give
// byte-identical outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "latwave/compare.hpp"
#include "latwave/critical_points.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/errors.hpp"
#include "latwave/greens.hpp"
#include "latwave/io.hpp"
#include "latwave/transient.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latwave;

namespace {

// Exit classes: 0 ok, 64 usage, 65 validation, 66 numerical, 74 I/O.
constexpr int kExitUsage = 64;
constexpr int kExitValidation = 65;
constexpr int kExitNumerical = 66;
constexpr int kExitIo = 74;

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

Displacement2 parse_force(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ValidationError("force must be given as 'px,py', got: " + text);
  try {
    const double px = std::stod(text.substr(0, comma));
    const double py = std::stod(text.substr(comma + 1));
    return {complexd(px, 0.0), complexd(py, 0.0)};
  } catch (const std::exception&) {
    throw ValidationError("force must be given as 'px,py', got: " + text);
  }
}

struct CommonOut {
  std::string out_dir = "out";
  int threads = 0;
  unsigned seed = 0; // reserved; all computations here are deterministic

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
    cmd->add_option("--seed", seed, "Unused; kept for interface stability");
  }
};

int run_dispersion(const CommonOut& common, int branch, int resolution) {
  apply_threads(common.threads);
  const SurfaceGrid grid = sample_surface(branch, resolution);
  const fs::path dir(common.out_dir);
  const fs::path csv = dir / "surface.csv";
  write_surface_csv(csv, grid);
  write_manifest(dir / "manifest.json", "dispersion",
                 json{{"branch", branch}, {"resolution", resolution}}, {"surface.csv"});
  std::cout << "wrote " << csv.string() << " (" << resolution << "x" << resolution << ")\n";
  return 0;
}

int run_contours(const CommonOut& common, int branch, double omega, int resolution) {
  apply_threads(common.threads);
  const IsoContour contour = isofrequency_contours(branch, omega, resolution);
  const fs::path dir(common.out_dir);
  write_contours_json(dir / "contours.json", contour);
  write_manifest(dir / "manifest.json", "contours",
                 json{{"branch", branch}, {"omega", omega}, {"resolution", resolution}},
                 {"contours.json"});
  std::cout << "wrote " << (dir / "contours.json").string() << ": " << contour.polylines.size()
            << " polylines, tolerance " << contour.tolerance << "\n";
  return 0;
}

int run_critical(const CommonOut& common) {
  apply_threads(common.threads);
  std::vector<CriticalPoint> all;
  for (int branch : {1, 2}) {
    const CensusReport census = find_critical_points(branch);
    if (census.failed > 0)
      std::cerr << "branch " << branch << ": " << census.failed
                << " Newton seeds did not converge (reported, not dropped)\n";
    all.insert(all.end(), census.points.begin(), census.points.end());
  }
  const fs::path dir(common.out_dir);
  write_critical_json(dir / "critical_points.json", all);
  write_manifest(dir / "manifest.json", "critical", json::object(), {"critical_points.json"});
  std::cout << "wrote " << (dir / "critical_points.json").string() << ": " << all.size()
            << " stationary points\n";
  return 0;
}

int run_field(const CommonOut& common, int resonance, const std::string& force, double t,
              int extent, double r_floor) {
  apply_threads(common.threads);
  const Displacement2 P = parse_force(force);
  const AsymptoticField field = total_field(resonance, P, t, extent, r_floor);
  if (field.families.empty())
    std::cerr << "warning: no saddle carriers at this resonance; the star set is empty and "
                 "the emitted field is the bounded (non-growing) zero contribution\n";
  const fs::path dir(common.out_dir);
  write_field_csv(dir / "field.csv", field);
  write_field_meta_json(dir / "field_meta.json", field, P);
  write_manifest(dir / "manifest.json", "field",
                 json{{"resonance", resonance},
                      {"P", force},
                      {"t", t},
                      {"extent", extent},
                      {"r_floor", r_floor}},
                 {"field.csv", "field_meta.json"});
  std::cout << "wrote " << (dir / "field.csv").string() << " with "
            << field.families.size() << " carrier families\n";
  return 0;
}

int run_simulate(const CommonOut& common, const std::string& config_path) {
  apply_threads(common.threads);
  const SimConfig cfg = read_sim_config_json(config_path);
  const std::string warning = validate(cfg);
  if (!warning.empty()) std::cerr << "warning: " << warning << "\n";

  const SimResult result = run(cfg);
  const fs::path dir(common.out_dir);
  std::vector<std::string> snapshot_files;
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
    write_snapshot_csv(dir / name, result.snapshots[i]);
    snapshot_files.push_back(name);
    outputs.push_back(name);
  }
  write_trace_csv(dir / "source_trace.csv", result.trace_times, result.trace_amplitude);
  outputs.push_back("source_trace.csv");
  write_sim_meta_json(dir / "sim_meta.json", cfg, snapshot_files, "source_trace.csv");
  outputs.push_back("sim_meta.json");
  write_manifest(dir / "manifest.json", "simulate", json{{"config", config_path}}, outputs);

  // Steady-versus-growing diagnostic from the source trace.
  if (result.trace_times.size() >= 8) {
    const std::size_t n = result.trace_times.size();
    auto mag = [&](std::size_t i) { return std::sqrt(norm2(result.trace_amplitude[i])); };
    double early = 0.0, late = 0.0;
    const std::size_t w = n / 4;
    for (std::size_t i = 0; i < w; ++i) {
      early += mag(n / 4 + i) / w;
      late += mag(n - w + i) / w;
    }
    std::cout << "source |U| window means: mid " << early << ", late " << late
              << (late < 1.15 * early ? " (steady)" : " (growing)") << "\n";
  }
  std::cout << "wrote " << result.snapshots.size() << " snapshots to " << dir.string() << "\n";
  return 0;
}

int run_compare(const CommonOut& common, const std::string& sim_dir,
                const std::string& asym_dir, double radius) {
  apply_threads(common.threads);
  const fs::path simd(sim_dir), asymd(asym_dir);

  // Accept either a directory with metadata or a bare field CSV.
  LoadedField sim, asym;
  std::vector<double> star_angles;
  std::vector<double> trace_times, trace_magnitude;
  double predicted_slope = 0.0;

  if (fs::is_directory(simd)) {
    const json meta = read_json(simd / "sim_meta.json");
    const auto files = meta.at("snapshot_files").get<std::vector<std::string>>();
    if (files.empty()) throw ValidationError("compare: sim run has no snapshots");
    sim = read_field_csv(simd / files.back());
    if (meta.contains("trace_file")) {
      std::ifstream trace(simd / meta.at("trace_file").get<std::string>());
      if (!trace) throw IoError("cannot open trace: " + (simd / "source_trace.csv").string());
      std::string line;
      std::getline(trace, line);
      while (std::getline(trace, line)) {
        if (line.empty()) continue;
        double tt, rex, imx, rey, imy;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &tt, &rex, &imx, &rey, &imy) == 5) {
          trace_times.push_back(tt);
          trace_magnitude.push_back(std::sqrt(rex * rex + imx * imx + rey * rey + imy * imy));
        }
      }
    }
  } else {
    sim = read_field_csv(simd);
  }

  if (fs::is_directory(asymd)) {
    asym = read_field_csv(asymd / "field.csv");
    const json meta = read_json(asymd / "field_meta.json");
    star_angles = meta.at("star_angles").get<std::vector<double>>();
    predicted_slope = meta.value("source_slope", 0.0);
  } else {
    asym = read_field_csv(asymd);
  }

  const CompareReport report = compare_fields(sim, asym, star_angles, trace_times,
                                              trace_magnitude, predicted_slope, radius);
  const fs::path dir(common.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  write_compare_report(dir / "compare_report.json", report);
  write_manifest(dir / "manifest.json", "compare",
                 json{{"sim", sim_dir}, {"asym", asym_dir}, {"radius", radius}},
                 {"compare_report.json"});
  std::cout << "magnitude correlation " << report.magnitude_correlation << ", masked fraction "
            << report.masked_fraction << ", " << report.ray_angle_errors_deg.size()
            << " ray maxima scored\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangular-lattice wave laboratory: dispersion surfaces, standing-wave "
               "census, resonant asymptotics and transient verification"};
  app.require_subcommand(1);

  CommonOut common;

  auto* disp = app.add_subcommand("dispersion", "Sample a dispersion surface to CSV");
  int branch = 1, resolution = 256;
  disp->add_option("--branch", branch, "Surface branch (1 upper, 2 lower)")
      ->check(CLI::Range(1, 2));
  disp->add_option("--resolution", resolution, "Grid nodes per axis (>= 2)")
      ->check(CLI::Range(2, 1 << 20));
  common.attach(disp);

  auto* cont = app.add_subcommand("contours", "Extract isofrequency contours to JSON");
  int cbranch = 1, cres = 512;
  double comega = 1.0;
  cont->add_option("--branch", cbranch)->check(CLI::Range(1, 2));
  cont->add_option("--omega", comega, "Contour frequency")->required();
  cont->add_option("--resolution", cres)->check(CLI::Range(2, 1 << 20));
  common.attach(cont);

  auto* crit = app.add_subcommand("critical", "Standing-wave point census to JSON");
  common.attach(crit);

  auto* field = app.add_subcommand("field", "Asymptotic resonant field on lattice sites");
  int resonance = 3, extent = 200;
  double t = 2000.0, r_floor = 1e-3;
  std::string force = "1,0";
  field->add_option("--resonance", resonance)->check(CLI::Range(1, 3));
  field->add_option("--P", force, "Force amplitude px,py");
  field->add_option("--t", t, "Evaluation time");
  field->add_option("--extent", extent, "Node range |m|,|n| <= extent");
  field->add_option("--r-floor", r_floor, "Mask radius in the hyperbolic phase");
  common.attach(field);

  auto* sim = app.add_subcommand("simulate", "Transient run from a JSON config");
  std::string config_path;
  sim->add_option("config", config_path, "JSON file with the run parameters")->required();
  common.attach(sim);

  auto* comp = app.add_subcommand("compare", "Score a transient run against an asymptotic field");
  std::string sim_in, asym_in;
  double radius = 0.0;
  comp->add_option("--sim", sim_in, "Simulation output dir (or a field CSV)")->required();
  comp->add_option("--asym", asym_in, "Asymptotic output dir (or a field CSV)")->required();
  comp->add_option("--radius", radius, "Ray-profile radius (0 = auto)");
  common.attach(comp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (disp->parsed()) return run_dispersion(common, branch, resolution);
    if (cont->parsed()) return run_contours(common, cbranch, comega, cres);
    if (crit->parsed()) return run_critical(common);
    if (field->parsed()) return run_field(common, resonance, force, t, extent, r_floor);
    if (sim->parsed()) return run_simulate(common, config_path);
    if (comp->parsed()) return run_compare(common, sim_in, asym_in, radius);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
