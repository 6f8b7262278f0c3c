#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusflow/harnack.hpp"
#include "torusflow/setups.hpp"
#include "torusflow/verify.hpp"

namespace torusflow {

/// Parsed, validated run configuration. The file format is flat key-per-line
/// sections ([grid] / [flow] / [heat] / [check] / [output]); see
/// docs/config.md for the exact grammar.
struct RunConfig {
  // [grid]
  int dim = 2;
  std::array<int, 2> points{64, 64};
  std::array<double, 2> period{1.0, 1.0};

  // [flow]
  FlowSpec flow;
  MetricSelector metric = MetricSelector::Flat;
  double metric_amplitude = 0.3;
  double psi_amplitude = 0.2;

  // [heat]
  HeatParams heat;
  bool heat_present = false;

  // [check]
  std::vector<TheoremId> theorems;
  std::vector<IdentityId> identities;
  TheoremCheckOptions check_options;
  int path_pairs = 20;
  std::uint64_t path_seed = 42;
  int levels = 3;
  int draws = 50;
  std::uint64_t verify_seed = 2024;
  int tau_samples = 3;

  // [output]
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_report = true;
  bool write_plots = true;

  // section texts, canonicalized, for content-hash caching
  std::string grid_flow_text;
  std::string heat_text;

  PeriodicGrid make_grid() const;
  MetricState make_initial_state() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Cross-field validation: referenced ids exist, parameter combinations satisfy
/// each requested theorem's preconditions, dt below the stability bound of the
/// initial metric. Throws ConfigError; runs before any compute.
void validate_config(const RunConfig& cfg);

} // namespace torusflow
