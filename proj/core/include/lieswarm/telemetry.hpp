#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "lieswarm/harness.hpp"

namespace lieswarm {

inline constexpr const char* kTelemetryHeader = "t,id,x,y,z,xd,yd,zd,phi,omega_zdi,flags";

/// One CSV row per record, floats with 9 significant digits, no header.
void write_csv_rows(std::ostream& out, const TickFrame& frame);

/// Streams frames to telemetry.csv. Throws IoError.
class TelemetryWriter {
 public:
  explicit TelemetryWriter(const std::filesystem::path& path);
  void write(const TickFrame& frame);
  /// Flushes and checks the stream. Throws IoError.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Reads a telemetry CSV back into frames grouped by t. Ring order is
/// rebuilt by sorting phases and the Lyapunov value is recomputed from it.
/// Throws IoError for an unreadable file and ScenarioError for bad content.
std::vector<TickFrame> read_telemetry_csv(const std::filesystem::path& path);

}  // namespace lieswarm
