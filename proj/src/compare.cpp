#include "latwave/compare.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "latwave/errors.hpp"

namespace latwave {

namespace {
constexpr double kPi = std::numbers::pi;

double circular_gap(double a, double b) {
  double d = std::remainder(a - b, 2.0 * kPi);
  return std::abs(d);
}
} // namespace

std::vector<double> profile_maxima(const RayProfile& profile, int smooth_halfwidth,
                                   double min_rel_height) {
  const int n = static_cast<int>(profile.magnitude.size());
  if (n < 8) throw ValidationError("profile_maxima: profile too short");

  // Default smoothing window: a couple of lattice spacings of arc, at least
  // two degrees, so carrier-scale beats wash out but ~30-degree ray spacing
  // survives.
  if (smooth_halfwidth < 0) {
    const double arc = std::max(2.0 * kPi / 180.0, 2.5 / std::max(profile.radius, 1.0));
    smooth_halfwidth = std::max(2, static_cast<int>(std::lround(arc * n / (2.0 * kPi))));
  }
  std::vector<double> smooth(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int w = -smooth_halfwidth; w <= smooth_halfwidth; ++w)
      acc += profile.magnitude[static_cast<std::size_t>(((i + w) % n + n) % n)];
    smooth[static_cast<std::size_t>(i)] = acc / (2 * smooth_halfwidth + 1);
  }

  const double peak = *std::max_element(smooth.begin(), smooth.end());
  struct Peak {
    double angle;
    double height;
  };
  std::vector<Peak> peaks;
  for (int i = 0; i < n; ++i) {
    const double v = smooth[static_cast<std::size_t>(i)];
    if (v < min_rel_height * peak) continue;
    const double prev = smooth[static_cast<std::size_t>((i + n - 1) % n)];
    const double next = smooth[static_cast<std::size_t>((i + 1) % n)];
    if (v > prev && v >= next) peaks.push_back({profile.angle[static_cast<std::size_t>(i)], v});
  }

  // Merge maxima closer than ~5 degrees, keeping the taller one; one ray can
  // split into twin bumps at finite time.
  const double merge_gap = 5.0 * kPi / 180.0;
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return a.height > b.height;
  });
  std::vector<Peak> kept;
  for (const Peak& cand : peaks) {
    bool close = false;
    for (const Peak& k : kept) close = close || circular_gap(cand.angle, k.angle) < merge_gap;
    if (!close) kept.push_back(cand);
  }
  std::vector<double> maxima;
  maxima.reserve(kept.size());
  for (const Peak& k : kept) maxima.push_back(k.angle);
  std::sort(maxima.begin(), maxima.end());
  return maxima;
}

std::vector<double> angle_errors_deg(const std::vector<double>& found,
                                     const std::vector<double>& reference) {
  std::vector<double> errors;
  errors.reserve(found.size());
  for (double alpha : found) {
    double best = 2.0 * kPi;
    for (double ref : reference) best = std::min(best, circular_gap(alpha, ref));
    errors.push_back(best * 180.0 / kPi);
  }
  return errors;
}

double magnitude_correlation(const LoadedField& a, const LoadedField& b, double r_min,
                             double r_max) {
  const int extent = std::min(a.extent, b.extent);
  if (extent < 1) throw ValidationError("magnitude_correlation: node ranges do not overlap");
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  long count = 0;
  for (int n = -extent; n <= extent; ++n) {
    for (int m = -extent; m <= extent; ++m) {
      if (a.masked[a.index(m, n)] || b.masked[b.index(m, n)]) continue;
      const Position pos = node_position({m, n});
      const double r = std::hypot(pos.x, pos.y);
      if (r < r_min || r > r_max) continue;
      const double va = std::sqrt(norm2(a.values[a.index(m, n)]));
      const double vb = std::sqrt(norm2(b.values[b.index(m, n)]));
      sx += va;
      sy += vb;
      sxx += va * va;
      syy += vb * vb;
      sxy += va * vb;
      ++count;
    }
  }
  if (count < 16) throw ValidationError("magnitude_correlation: too few comparable nodes");
  const double cov = sxy - sx * sy / count;
  const double vx = sxx - sx * sx / count;
  const double vy = syy - sy * sy / count;
  if (vx <= 0.0 || vy <= 0.0) return vx == vy ? 1.0 : 0.0;
  return cov / std::sqrt(vx * vy);
}

LogFit fit_against_log_time(const std::vector<double>& times,
                            const std::vector<double>& magnitudes, double t_min,
                            double t_max) {
  LogFit fit;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    const double x = std::log(times[i]);
    const double y = magnitudes[i];
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++fit.samples;
  }
  if (fit.samples < 4) throw ValidationError("fit_against_log_time: too few samples in window");
  const double n = fit.samples;
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  fit.slope = cov / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.correlation = vy > 0.0 ? cov / std::sqrt(vx * vy) : 1.0;
  return fit;
}

CompareReport compare_fields(const LoadedField& sim, const LoadedField& asym,
                             const std::vector<double>& star_angles,
                             const std::vector<double>& trace_times,
                             const std::vector<double>& trace_magnitude,
                             double predicted_slope, double profile_radius) {
  if (std::min(sim.extent, asym.extent) < 1)
    throw ValidationError("compare_fields: node ranges do not overlap");
  CompareReport report;

  long masked = 0;
  for (unsigned char flag : asym.masked) masked += flag ? 1 : 0;
  report.masked_fraction = static_cast<double>(masked) / asym.masked.size();

  const double safe_extent = 0.5 * std::numbers::sqrt3 * std::min(sim.extent, asym.extent) - 2.0;
  const double r_min = 10.0;
  const double r_max = std::max(r_min + 5.0, safe_extent);
  report.magnitude_correlation = magnitude_correlation(sim, asym, r_min, r_max);

  report.profile_radius =
      profile_radius > 0.0 ? profile_radius : std::min(60.0, 0.75 * safe_extent);
  if (!star_angles.empty()) {
    const AmplitudeSnapshot snap = sim.to_snapshot();
    const RayProfile profile = ray_profile(snap, report.profile_radius, 720);
    report.ray_angle_errors_deg = angle_errors_deg(profile_maxima(profile), star_angles);
  }

  if (!trace_times.empty() && predicted_slope > 0.0) {
    const double t_hi = trace_times.back();
    const LogFit fit = fit_against_log_time(trace_times, trace_magnitude, 0.25 * t_hi, t_hi);
    report.log_growth_slope_ratio = fit.slope / predicted_slope;
  }
  return report;
}

void write_compare_report(const std::filesystem::path& path, const CompareReport& report) {
  nlohmann::json doc;
  doc["ray_angle_errors_deg"] = report.ray_angle_errors_deg;
  if (report.log_growth_slope_ratio)
    doc["log_growth_slope_ratio"] = *report.log_growth_slope_ratio;
  else
    doc["log_growth_slope_ratio"] = nullptr;
  doc["masked_fraction"] = report.masked_fraction;
  doc["magnitude_correlation"] = report.magnitude_correlation;
  doc["profile_radius"] = report.profile_radius;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

} // namespace latwave
