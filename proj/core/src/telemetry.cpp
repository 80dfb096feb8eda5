#include "lieswarm/telemetry.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lieswarm/errors.hpp"

namespace lieswarm {

void write_csv_rows(std::ostream& out, const TickFrame& frame) {
  fmt::memory_buffer buf;
  for (const auto& r : frame.agents) {
    fmt::format_to(std::back_inserter(buf),
                   "{:.9g},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", r.t,
                   r.id, r.x.x, r.x.y, r.x.z, r.x_d.x, r.x_d.y, r.x_d.z, r.phi, r.omega_zdi,
                   r.flags);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

TelemetryWriter::TelemetryWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out_ << kTelemetryHeader << '\n';
}

void TelemetryWriter::write(const TickFrame& frame) { write_csv_rows(out_, frame); }

void TelemetryWriter::close() {
  out_.flush();
  if (!out_) throw IoError(fmt::format("error while writing '{}'", path_.string()));
  out_.close();
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

template <typename T>
T parse_field(std::string_view s, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ScenarioError(fmt::format("telemetry line {}: bad field '{}'", line_no, s));
  }
  return value;
}

void finish_frame(TickFrame& f) {
  std::vector<IdPhase> phases;
  for (const auto& r : f.agents) phases.push_back({r.id, r.phi});
  const Ring ring = Ring::assign(phases);
  f.ring = ring.order();
  std::vector<double> ordered;
  for (AgentId id : f.ring) {
    for (const auto& r : f.agents) {
      if (r.id == id) ordered.push_back(r.phi);
    }
  }
  try {
    f.lyapunov = lyapunov_value(ring_errors(ordered));
  } catch (const CoincidentPhase&) {
    f.lyapunov = std::numeric_limits<double>::infinity();
  }
}

}  // namespace

std::vector<TickFrame> read_telemetry_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != kTelemetryHeader) {
    throw ScenarioError(fmt::format("{}: missing telemetry header", path.string()));
  }
  std::vector<TickFrame> frames;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) {
      throw ScenarioError(fmt::format("telemetry line {}: expected 11 fields", line_no));
    }
    TelemetryRecord r;
    r.t = parse_field<double>(f[0], line_no);
    r.id = parse_field<AgentId>(f[1], line_no);
    r.x = {parse_field<double>(f[2], line_no), parse_field<double>(f[3], line_no),
           parse_field<double>(f[4], line_no)};
    r.x_d = {parse_field<double>(f[5], line_no), parse_field<double>(f[6], line_no),
             parse_field<double>(f[7], line_no)};
    r.phi = parse_field<double>(f[8], line_no);
    r.omega_zdi = parse_field<double>(f[9], line_no);
    r.flags = parse_field<std::uint32_t>(f[10], line_no);
    if (frames.empty() || frames.back().t != r.t) {
      if (!frames.empty()) finish_frame(frames.back());
      TickFrame fr;
      fr.tick = static_cast<long>(frames.size());
      fr.t = r.t;
      frames.push_back(std::move(fr));
    }
    frames.back().agents.push_back(r);
  }
  if (!frames.empty()) finish_frame(frames.back());
  return frames;
}

}  // namespace lieswarm
