#pragma once

#include <filesystem>

#include "torusflow/config.hpp"
#include "torusflow/io.hpp"

namespace torusflow {

enum class Stage { All, Flow, Heat, Check, VerifyIdentities, Convergence };

std::optional<Stage> stage_from_string(const std::string& s);

struct RunResult {
  int exit_code = 0; // max severity: 0 pass, 2 violation, 3 numerical, 4 hypothesis, 5 config
  std::vector<std::string> lines;
};

/// Config-driven orchestration: flow -> heat -> checks, artifact caching by
/// content hash of the producing config sections, CSV / report / plot output.
class Runner {
public:
  explicit Runner(RunConfig cfg);

  /// Executes the requested stage (Stage::All = flow, heat, check, identities).
  /// Throws ConfigError before any compute on invalid configuration; numeric
  /// failures surface as the error types of the producing module.
  RunResult run(Stage stage);

private:
  void ensure_trajectory(bool allow_compute);
  void ensure_solution(bool allow_compute);
  void stage_flow(RunResult& res);
  void stage_heat(RunResult& res);
  void stage_check(RunResult& res, bool allow_compute);
  void stage_identities(RunResult& res, bool allow_compute);
  void stage_convergence(RunResult& res);
  void write_report(const RunResult& res) const;
  void write_plot_script() const;
  std::filesystem::path out(const std::string& name) const;

  RunConfig cfg_;
  std::optional<FlowTrajectory> traj_;
  std::optional<HeatSolution> sol_;
};

} // namespace torusflow
