#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "torusflow/heat.hpp"

namespace torusflow {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Minimal CSV emitter: header row always present, floats via format_double.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  const std::string& text() const { return text_; }
  void write(const std::filesystem::path& path) const;

private:
  std::size_t columns_;
  std::string text_;
};

/// FNV-1a 64-bit content hash, hex-encoded; used for stage-cache validation.
std::uint64_t fnv1a(const std::string& data);
std::string hash_hex(const std::string& data);

// ---- binary artifacts (little-endian doubles, fixed headers) ----

void save_trajectory(const FlowTrajectory& traj, const std::filesystem::path& path);
FlowTrajectory load_trajectory(const std::filesystem::path& path);

void save_solution(const HeatSolution& sol, const std::filesystem::path& path);
HeatSolution load_solution(const std::filesystem::path& path, const PeriodicGrid& grid);

} // namespace torusflow
