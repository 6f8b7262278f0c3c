// Command-line front end: config-driven flow runs, heat solves, theorem checks,
// identity verification and convergence studies.

#include <CLI11.hpp>

#include <iostream>

#include "torusflow/runner.hpp"

namespace {

int run_stage(const std::string& config_path, torusflow::Stage stage, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::optional<int> levels) {
  using namespace torusflow;
  try {
    RunConfig cfg = load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed) {
      cfg.path_seed = *seed;
      cfg.verify_seed = *seed;
    }
    if (levels) cfg.levels = *levels;
    Runner runner(std::move(cfg));
    RunResult res = runner.run(stage);
    for (const std::string& line : res.lines) std::cout << line << "\n";
    std::cout << "exit code: " << res.exit_code << "\n";
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const WrongHeatParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const StaleCache& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"torusflow: geometric flows, backward heat solves and Harnack checks on flat tori"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::string stage_name;
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;

  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--stage", stage_name, "stage filter: flow | heat | check | verify-identities | convergence");
  app.add_option("--seed", seed, "override path_seed and verify_seed");
  app.add_option("--levels", levels, "refinement levels for the convergence stage");

  auto add = [&](const char* name, const char* desc) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->fallthrough(); // global options may follow the subcommand name
    return sc;
  };
  CLI::App* sc_run = add("run", "run flow -> heat -> checks and write artifacts");
  CLI::App* sc_flow = add("run-flow", "integrate the flow and store the trajectory");
  CLI::App* sc_heat = add("solve-heat", "solve the backward heat equation on the cached trajectory");
  CLI::App* sc_check = add("check", "run theorem checks against cached artifacts");
  CLI::App* sc_verify = add("verify-identities", "verify evolution/algebraic identities");
  CLI::App* sc_conv = add("convergence", "refinement study with order fits");

  CLI11_PARSE(app, argc, argv);

  torusflow::Stage stage = torusflow::Stage::All;
  if (sc_run->parsed()) stage = torusflow::Stage::All;
  else if (sc_flow->parsed()) stage = torusflow::Stage::Flow;
  else if (sc_heat->parsed()) stage = torusflow::Stage::Heat;
  else if (sc_check->parsed()) stage = torusflow::Stage::Check;
  else if (sc_verify->parsed()) stage = torusflow::Stage::VerifyIdentities;
  else if (sc_conv->parsed()) stage = torusflow::Stage::Convergence;
  else if (!stage_name.empty()) {
    auto s = torusflow::stage_from_string(stage_name);
    if (!s) {
      std::cerr << "error: unknown stage '" << stage_name << "'\n";
      return 5;
    }
    stage = *s;
  }

  return run_stage(config_path, stage, out_dir, seed, levels);
}
