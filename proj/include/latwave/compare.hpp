#pragma once

// Scoring of a transient run against the asymptotic field: ray angles,
// source-node log-growth slope, magnitude correlation.

#include <optional>
#include <vector>

#include "latwave/io.hpp"
#include "latwave/transient.hpp"

namespace latwave {

/// Circular local maxima of an angular profile after moving-average
/// smoothing; only peaks above min_rel_height * global max are kept, and
/// peaks closer than ~5 degrees merge into the taller one. Negative
/// smooth_halfwidth picks a window from the profile radius.
std::vector<double> profile_maxima(const RayProfile& profile, int smooth_halfwidth = -1,
                                   double min_rel_height = 0.4);

/// Distance (degrees) from each found angle to the nearest reference angle.
std::vector<double> angle_errors_deg(const std::vector<double>& found,
                                     const std::vector<double>& reference);

/// Pearson correlation of |U| between two fields over common unmasked nodes
/// with radius in [r_min, r_max].
double magnitude_correlation(const LoadedField& a, const LoadedField& b, double r_min,
                             double r_max);

/// Least-squares slope of |U(t)| against ln t over [t_min, t_max].
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;
  int samples = 0;
};
LogFit fit_against_log_time(const std::vector<double>& times,
                            const std::vector<double>& magnitudes, double t_min, double t_max);

struct CompareReport {
  std::vector<double> ray_angle_errors_deg;
  std::optional<double> log_growth_slope_ratio;
  double masked_fraction = 0.0;
  double magnitude_correlation = 0.0;
  double profile_radius = 0.0;
};

/// Full comparison. `sim` and `asym` must overlap; throws ValidationError on
/// disjoint node ranges. Ray angles come from the sim profile matched
/// against `star_angles`; the slope ratio needs the source trace and the
/// predicted coefficient, otherwise it stays empty.
CompareReport compare_fields(const LoadedField& sim, const LoadedField& asym,
                             const std::vector<double>& star_angles,
                             const std::vector<double>& trace_times,
                             const std::vector<double>& trace_magnitude,
                             double predicted_slope, double profile_radius = 0.0);

void write_compare_report(const std::filesystem::path& path, const CompareReport& report);

} // namespace latwave
