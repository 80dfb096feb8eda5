#include "lieswarm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "lieswarm/errors.hpp"

namespace lieswarm {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

std::vector<Vec3> positions_of(const TickFrame& f) {
  std::vector<Vec3> out;
  out.reserve(f.agents.size());
  for (const auto& r : f.agents) out.push_back(r.x);
  return out;
}

std::vector<AgentId> ids_of(const TickFrame& f) {
  std::vector<AgentId> out;
  for (const auto& r : f.agents) out.push_back(r.id);
  return out;
}

nlohmann::json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", p.string()));
  return out;
}

}  // namespace

std::vector<double> separations(std::span<const double> phases) {
  std::vector<double> deg;
  deg.reserve(phases.size());
  for (double p : phases) deg.push_back(wrap_to_pi(p) * kDeg);
  std::sort(deg.begin(), deg.end());
  std::vector<double> out;
  out.reserve(deg.size());
  for (std::size_t i = 0; i + 1 < deg.size(); ++i) out.push_back(deg[i + 1] - deg[i]);
  if (!deg.empty()) out.push_back(deg.front() + 360.0 - deg.back());
  return out;
}

double min_pairwise_distance(std::span<const Vec3> positions) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      best = std::min(best, (positions[i] - positions[j]).norm());
    }
  }
  return best;
}

double max_pairwise_distance(std::span<const Vec3> positions) {
  double best = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      best = std::max(best, (positions[i] - positions[j]).norm());
    }
  }
  return best;
}

double default_band_deg(std::size_t n) { return n >= 10 ? 1.0 : 5.0; }

std::optional<double> convergence_time(std::span<const double> times,
                                       std::span<const std::vector<double>> seps,
                                       std::size_t n, double band_deg, double hold_s) {
  if (!(band_deg > 0.0)) throw Error("convergence band must be > 0");
  const std::size_t m = std::min(times.size(), seps.size());
  if (m == 0 || n == 0) return std::nullopt;
  const double target = 360.0 / static_cast<double>(n);
  std::vector<bool> ok(m);
  for (std::size_t k = 0; k < m; ++k) {
    ok[k] = seps[k].size() == n && std::all_of(seps[k].begin(), seps[k].end(), [&](double s) {
              return std::abs(s - target) <= band_deg;
            });
  }
  // Walking backwards, run_end marks where the current run of good ticks stops.
  std::size_t run_end = m;  // one past the last tick of the current good run
  std::optional<double> found;
  for (std::size_t k = m; k-- > 0;) {
    if (!ok[k]) {
      run_end = k;
      continue;
    }
    if (times[run_end - 1] - times[k] >= hold_s - 1e-9) found = times[k];
  }
  return found;
}

MetricsSummary summarize(std::span<const TickFrame> frames, const MetricsOptions& opts) {
  MetricsSummary m;
  auto& s = m.series;
  for (const auto& f : frames) {
    const auto pos = positions_of(f);
    std::vector<double> phis;
    std::vector<double> track;
    for (const auto& r : f.agents) {
      phis.push_back(r.phi);
      track.push_back((r.x_d - r.x).norm());
    }
    s.t.push_back(f.t);
    s.separations_deg.push_back(separations(phis));
    s.min_distance_m.push_back(min_pairwise_distance(pos));
    s.max_distance_m.push_back(max_pairwise_distance(pos));
    s.lyapunov.push_back(f.lyapunov);
    s.tracking_error_m.push_back(std::move(track));
  }
  if (frames.empty()) return m;

  m.min_distance_m = *std::min_element(s.min_distance_m.begin(), s.min_distance_m.end());
  m.max_distance_m = *std::max_element(s.max_distance_m.begin(), s.max_distance_m.end());
  m.final_separations_deg = s.separations_deg.back();
  m.lyapunov_final = s.lyapunov.back();

  std::size_t begin = 0;
  while (begin < frames.size()) {
    const auto ids = ids_of(frames[begin]);
    std::size_t end = begin + 1;
    while (end < frames.size() && ids_of(frames[end]) == ids) ++end;

    Segment seg;
    seg.t_start = s.t[begin];
    seg.t_end = s.t[end - 1];
    seg.n = ids.size();
    seg.band_deg = opts.band_deg ? *opts.band_deg : default_band_deg(seg.n);
    seg.min_distance_m =
        *std::min_element(s.min_distance_m.begin() + static_cast<std::ptrdiff_t>(begin),
                          s.min_distance_m.begin() + static_cast<std::ptrdiff_t>(end));
    const std::span<const double> ts(s.t.data() + begin, end - begin);
    const std::span<const std::vector<double>> sp(s.separations_deg.data() + begin, end - begin);
    seg.convergence_time_s = convergence_time(ts, sp, seg.n, seg.band_deg, opts.hold_s);
    if (seg.convergence_time_s) {
      seg.settle_s = *seg.convergence_time_s - seg.t_start;
      const double target = 360.0 / static_cast<double>(seg.n);
      double osc = 0.0;
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = begin; k < end; ++k) {
        if (s.t[k] < *seg.convergence_time_s) continue;
        for (double v : s.separations_deg[k]) osc = std::max(osc, std::abs(v - target));
        dmin = std::min(dmin, s.min_distance_m[k]);
      }
      seg.steady_oscillation_deg = osc;
      seg.steady_min_distance_m = dmin;
    }
    m.segments.push_back(seg);
    begin = end;
  }

  const auto& last = m.segments.back();
  m.convergence_time_s = last.settle_s;
  m.steady_oscillation_deg = last.steady_oscillation_deg;
  m.steady_min_distance_m = last.steady_min_distance_m;
  return m;
}

SeriesPaths write_series(const MetricsSeries& s, const std::filesystem::path& dir) {
  SeriesPaths p{dir / "separations.csv", dir / "distances.csv", dir / "lyapunov.csv",
                dir / "tracking.csv"};
  {
    auto out = open_out(p.separations);
    out << "t,separations_deg\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      out << fmt::format("{:.9g},{:.9g}\n", s.t[k], fmt::join(s.separations_deg[k], ";"));
    }
  }
  {
    auto out = open_out(p.distances);
    out << "t,min_distance_m,max_distance_m\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      out << fmt::format("{:.9g},{:.9g},{:.9g}\n", s.t[k], s.min_distance_m[k],
                         s.max_distance_m[k]);
    }
  }
  {
    auto out = open_out(p.lyapunov);
    out << "t,V\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      out << fmt::format("{:.9g},{:.9g}\n", s.t[k], s.lyapunov[k]);
    }
  }
  {
    auto out = open_out(p.tracking);
    out << "t,tracking_error_m\n";
    for (std::size_t k = 0; k < s.t.size(); ++k) {
      out << fmt::format("{:.9g},{:.9g}\n", s.t[k], fmt::join(s.tracking_error_m[k], ";"));
    }
  }
  return p;
}

std::string to_json(const MetricsSummary& m, const SeriesPaths& paths) {
  nlohmann::json j;
  j["convergence_time_s"] = number_or_null(m.convergence_time_s);
  j["steady_oscillation_deg"] = number_or_null(m.steady_oscillation_deg);
  j["steady_min_distance_m"] = number_or_null(m.steady_min_distance_m);
  j["min_distance_m"] = number_or_null(m.min_distance_m);
  j["max_distance_m"] = number_or_null(m.max_distance_m);
  j["final_separations_deg"] = m.final_separations_deg;
  j["lyapunov_final"] = number_or_null(m.lyapunov_final);
  auto segs = nlohmann::json::array();
  for (const auto& s : m.segments) {
    segs.push_back({{"t_start", s.t_start},
                    {"t_end", s.t_end},
                    {"n", s.n},
                    {"band_deg", s.band_deg},
                    {"convergence_time_s", number_or_null(s.convergence_time_s)},
                    {"settle_s", number_or_null(s.settle_s)},
                    {"steady_oscillation_deg", number_or_null(s.steady_oscillation_deg)},
                    {"steady_min_distance_m", number_or_null(s.steady_min_distance_m)},
                    {"min_distance_m", number_or_null(s.min_distance_m)}});
  }
  j["segments"] = segs;
  auto series = nlohmann::json::object();
  const auto add = [&](const char* key, const std::filesystem::path& p) {
    if (!p.empty()) series[key] = p.filename().string();
  };
  add("separations", paths.separations);
  add("distances", paths.distances);
  add("lyapunov", paths.lyapunov);
  add("tracking", paths.tracking);
  j["series"] = series;
  return j.dump(2) + "\n";
}

}  // namespace lieswarm
