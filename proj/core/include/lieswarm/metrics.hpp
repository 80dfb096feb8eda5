#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lieswarm/harness.hpp"

namespace lieswarm {

/// Adjacent differences of the sorted wrapped phases, in degrees. The last
/// entry closes the circle, so the result sums to 360.
std::vector<double> separations(std::span<const double> phases);

double min_pairwise_distance(std::span<const Vec3> positions);
double max_pairwise_distance(std::span<const Vec3> positions);

/// 1 degree from ten agents up, 5 degrees below.
double default_band_deg(std::size_t n);

/// First time t[k] such that every separation of frames k..k+hold stays
/// within band of 360/n. `separations` holds one vector per tick.
std::optional<double> convergence_time(std::span<const double> times,
                                       std::span<const std::vector<double>> separations,
                                       std::size_t n, double band_deg, double hold_s);

/// A stretch of ticks with an unchanged set of agents.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;  // time of the last tick in the segment
  std::size_t n = 0;
  double band_deg = 0.0;
  std::optional<double> convergence_time_s;  // absolute
  std::optional<double> settle_s;            // convergence_time_s - t_start
  std::optional<double> steady_oscillation_deg;
  std::optional<double> steady_min_distance_m;
  double min_distance_m = 0.0;
};

struct MetricsSeries {
  std::vector<double> t;
  std::vector<std::vector<double>> separations_deg;
  std::vector<double> min_distance_m;
  std::vector<double> max_distance_m;
  std::vector<double> lyapunov;
  /// Per tick, ||x_d - x|| for each agent in record order.
  std::vector<std::vector<double>> tracking_error_m;
};

struct MetricsSummary {
  /// Settling time of the last segment, measured from its start.
  std::optional<double> convergence_time_s;
  std::optional<double> steady_oscillation_deg;
  std::optional<double> steady_min_distance_m;
  double min_distance_m = 0.0;
  double max_distance_m = 0.0;
  std::vector<double> final_separations_deg;
  double lyapunov_final = 0.0;
  std::vector<Segment> segments;
  MetricsSeries series;
};

struct MetricsOptions {
  std::optional<double> band_deg;  // per-segment default_band_deg when unset
  double hold_s = 2.0;
};

MetricsSummary summarize(std::span<const TickFrame> frames, const MetricsOptions& opts = {});

struct SeriesPaths {
  std::filesystem::path separations;
  std::filesystem::path distances;
  std::filesystem::path lyapunov;
  std::filesystem::path tracking;
};

/// Writes the per-tick series as CSV files into `dir`. Throws IoError.
SeriesPaths write_series(const MetricsSeries& series, const std::filesystem::path& dir);

/// MetricsSummary as a JSON document. Missing optionals and non-finite
/// numbers become null.
std::string to_json(const MetricsSummary& m, const SeriesPaths& paths = {});

}  // namespace lieswarm
