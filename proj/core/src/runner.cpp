#include "torusflow/runner.hpp"

#include <fstream>
#include <random>

namespace torusflow {

namespace {

std::string read_file_or_empty(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << s;
}

} // namespace

std::optional<Stage> stage_from_string(const std::string& s) {
  if (s == "all" || s == "run") return Stage::All;
  if (s == "flow" || s == "run-flow") return Stage::Flow;
  if (s == "heat" || s == "solve-heat") return Stage::Heat;
  if (s == "check") return Stage::Check;
  if (s == "verify-identities") return Stage::VerifyIdentities;
  if (s == "convergence") return Stage::Convergence;
  return std::nullopt;
}

Runner::Runner(RunConfig cfg) : cfg_(std::move(cfg)) { validate_config(cfg_); }

std::filesystem::path Runner::out(const std::string& name) const {
  return std::filesystem::path(cfg_.out_dir) / name;
}

void Runner::ensure_trajectory(bool allow_compute) {
  if (traj_) return;
  const std::string want = hash_hex(cfg_.grid_flow_text);
  const std::string have = read_file_or_empty(out("trajectory.hash"));
  if (have == want && std::filesystem::exists(out("trajectory.bin"))) {
    traj_ = load_trajectory(out("trajectory.bin"));
    return;
  }
  if (!allow_compute)
    throw StaleCache(have.empty() ? "no cached trajectory for this configuration"
                                  : "cached trajectory was produced by a different [grid]/[flow] "
                                    "section (hash " + have + ", expected " + want + ")");
  traj_ = run_flow(cfg_.make_initial_state(), cfg_.flow);
}

void Runner::ensure_solution(bool allow_compute) {
  if (sol_) return;
  ensure_trajectory(allow_compute);
  const std::string want = hash_hex(cfg_.heat_text);
  const std::string have = read_file_or_empty(out("solution.hash"));
  if (have == want && std::filesystem::exists(out("solution.bin"))) {
    sol_ = load_solution(out("solution.bin"), traj_->grid());
    return;
  }
  if (!allow_compute)
    throw StaleCache(have.empty() ? "no cached heat solution for this configuration"
                                  : "cached solution was produced by a different configuration "
                                    "(hash " + have + ", expected " + want + ")");
  sol_ = solve_backward_heat(*traj_, cfg_.heat);
}

void Runner::stage_flow(RunResult& res) {
  const std::string want = hash_hex(cfg_.grid_flow_text);
  const std::string have = read_file_or_empty(out("trajectory.hash"));
  if (have == want && std::filesystem::exists(out("trajectory.bin"))) {
    res.lines.push_back("flow: reusing cached trajectory (hash " + want + ")");
    traj_ = load_trajectory(out("trajectory.bin"));
    return;
  }
  ensure_trajectory(true);
  save_trajectory(*traj_, out("trajectory.bin"));
  write_text(out("trajectory.hash"), want);

  if (cfg_.write_csv) {
    CsvWriter csv({"t", "min_S", "max_S", "min_R", "max_R", "min_det", "max_det"});
    const SymTensorField* cached = nullptr;
    double rmin = 0, rmax = 0, dmin = 0, dmax = 0;
    for (int k = 0; k <= traj_->steps(); ++k) {
      const FlowSnapshot& sn = traj_->snapshot(k);
      if (cached != sn.g.get()) {
        MetricAlgebra alg(*sn.g);
        const CurvatureBundle& curv = alg.curvature();
        rmin = grid_min(curv.scalar).value;
        rmax = grid_max(curv.scalar).value;
        dmin = grid_min(alg.det()).value;
        dmax = grid_max(alg.det()).value;
        cached = sn.g.get();
      }
      csv.row_values({sn.t, grid_min(*sn.s_trace).value, grid_max(*sn.s_trace).value, rmin, rmax,
                      dmin, dmax});
    }
    csv.write(out("flow.csv"));
  }
  res.lines.push_back("flow: " + std::to_string(traj_->steps()) + " steps stored (hash " + want + ")");
}

void Runner::stage_heat(RunResult& res) {
  if (!cfg_.heat_present) throw ConfigError(0, "heat", "solve-heat needs a [heat] section");
  const std::string want = hash_hex(cfg_.heat_text);
  const std::string have = read_file_or_empty(out("solution.hash"));
  ensure_trajectory(false); // heat never recomputes the flow silently
  if (have == want && std::filesystem::exists(out("solution.bin"))) {
    res.lines.push_back("heat: reusing cached solution (hash " + want + ")");
    sol_ = load_solution(out("solution.bin"), traj_->grid());
    return;
  }
  sol_ = solve_backward_heat(*traj_, cfg_.heat);
  save_solution(*sol_, out("solution.bin"));
  write_text(out("solution.hash"), want);

  if (cfg_.write_csv) {
    CsvWriter csv({"tau", "min_f", "max_f", "min_u", "max_u"});
    for (int j = 0; j <= sol_->steps(); ++j) {
      const ScalarField& f = sol_->f(j);
      const double mn = grid_min(f).value, mx = grid_max(f).value;
      csv.row_values({sol_->tau(j), mn, mx, -std::log(mx), -std::log(mn)});
    }
    csv.write(out("heat.csv"));
  }
  res.lines.push_back("heat: f in [" + format_double(sol_->min_f()) + ", " +
                      format_double(sol_->max_f()) + "] over the run (hash " + want + ")");
}

void Runner::stage_check(RunResult& res, bool allow_compute) {
  if (cfg_.theorems.empty() && cfg_.path_pairs == 0) {
    res.lines.push_back("check: nothing requested");
    return;
  }
  ensure_solution(allow_compute);

  for (TheoremId id : cfg_.theorems) {
    HarnackReport rep = check_theorem(id, *traj_, *sol_, cfg_.check_options);
    if (cfg_.write_csv) {
      CsvWriter csv({"tau", "margin", "argmin_x", "argmin_y"});
      for (const MarginEntry& m : rep.margins)
        csv.row({format_double(m.tau), format_double(m.margin), std::to_string(m.argmin_x),
                 std::to_string(m.argmin_y)});
      csv.write(out(std::string("margins_") + to_string(id) + ".csv"));
    }
    std::string verdict = rep.verdict == HarnackReport::Verdict::Pass              ? "PASS"
                          : rep.verdict == HarnackReport::Verdict::HypothesisFailed ? "HYPOTHESIS-FAILED"
                                                                                    : "VIOLATED";
    res.lines.push_back("check " + std::string(to_string(id)) + ": " + verdict +
                        " (worst margin " + format_double(rep.worst_margin) + ", " +
                        rep.slack_formula + ")");
    for (const HypothesisResult& h : rep.hypotheses)
      res.lines.push_back("  hypothesis: " + h.description + " -> " + (h.ok ? "ok" : "FAILED") +
                          " (worst " + format_double(h.worst) + ", tol " + format_double(h.tol) + ")");
    res.exit_code = std::max(res.exit_code, rep.exit_code());
  }

  // integrated classical inequality on seeded random space-time pairs,
  // available whenever the run uses the gamma = 1, a = 2 parameters
  const bool a1_params = cfg_.heat.gamma.is_constant() && cfg_.heat.gamma(0.0) == 1.0 &&
                         cfg_.heat.a == 2.0;
  if (cfg_.path_pairs > 0 && a1_params) {
    const int K = traj_->steps();
    std::mt19937_64 rng(cfg_.path_seed);
    std::vector<PathPair> pairs;
    for (int p = 0; p < cfg_.path_pairs; ++p) {
      std::uniform_int_distribution<int> k1d(std::max(1, K / 8), K / 2);
      const int k1 = k1d(rng);
      std::uniform_int_distribution<int> k2d(k1 + std::max(1, K / 8), K - 1);
      const int k2 = k2d(rng);
      const int steps = k2 - k1;
      const PeriodicGrid& grid = traj_->grid();
      std::uniform_int_distribution<int> xd(0, grid.n(0) - 1);
      std::uniform_int_distribution<int> yd(0, grid.n(1) - 1);
      const int x1 = xd(rng), y1 = grid.dim() == 2 ? yd(rng) : 0;
      const int rx = std::min(grid.n(0) / 2, steps);
      const int ry = grid.dim() == 2 ? std::min(grid.n(1) / 2, steps) : 0;
      std::uniform_int_distribution<int> dxd(-rx, rx);
      std::uniform_int_distribution<int> dyd(-ry, ry);
      const int x2 = grid.wrap(x1 + dxd(rng), 0);
      const int y2 = grid.dim() == 2 ? grid.wrap(y1 + dyd(rng), 1) : 0;
      pairs.push_back({x1, y1, k1, x2, y2, k2});
    }
    PathCheckReport prep = classical_harnack_check(*traj_, *sol_, pairs,
                                                   cfg_.check_options.slack_kappa);
    if (cfg_.write_csv) {
      CsvWriter csv({"x1", "y1", "t1", "x2", "y2", "t2", "lhs", "rhs", "margin"});
      for (const PathCheckEntry& e : prep.entries)
        csv.row({std::to_string(e.pair.x1), std::to_string(e.pair.y1),
                 format_double(e.pair.k1 * traj_->dt()), std::to_string(e.pair.x2),
                 std::to_string(e.pair.y2), format_double(e.pair.k2 * traj_->dt()),
                 format_double(e.lhs), format_double(e.rhs), format_double(e.margin)});
      csv.write(out("classical_harnack.csv"));
    }
    res.lines.push_back("check classical-harnack: " + std::string(prep.ok ? "PASS" : "VIOLATED") +
                        " (" + std::to_string(prep.entries.size()) + " paths, slack " +
                        format_double(prep.slack) + ")");
    if (!prep.ok) res.exit_code = std::max(res.exit_code, 2);
  }
}

void Runner::stage_identities(RunResult& res, bool allow_compute) {
  if (cfg_.identities.empty()) {
    res.lines.push_back("verify-identities: nothing requested");
    return;
  }
  ensure_solution(allow_compute);

  VerifyParams vp;
  vp.seed = cfg_.verify_seed;
  vp.draws = cfg_.draws;
  vp.tau_samples = cfg_.tau_samples;
  vp.harnack = HarnackParams{2.0, 1.0, cfg_.heat.a, 0.5, -cfg_.heat.a, -2.0, 2.0, cfg_.heat.w};

  CsvWriter csv({"identity", "h", "dt", "linf", "l2", "class", "pass"});
  for (IdentityId id : cfg_.identities) {
    ResidualReport rep = verify_identity(id, *traj_, *sol_, vp);
    const IdentityResidual& r = rep.levels[0];
    csv.row({to_string(id), format_double(r.h), format_double(r.dt), format_double(r.linf),
             format_double(r.l2), rep.machine_precision ? "algebraic" : "discretization",
             rep.pass ? "true" : "false"});
    res.lines.push_back("identity " + std::string(to_string(id)) + ": " +
                        (rep.pass ? "PASS" : "FAIL") + " (linf " + format_double(r.linf) + "; " +
                        rep.note + ")");
    if (!rep.pass) res.exit_code = std::max(res.exit_code, 2);
  }
  if (cfg_.write_csv) csv.write(out("identities.csv"));
}

void Runner::stage_convergence(RunResult& res) {
  if (cfg_.identities.empty())
    throw ConfigError(0, "identities", "convergence needs identity ids in [check]");

  ConvergenceSetup setup;
  setup.metric = cfg_.metric;
  setup.metric_amplitude = cfg_.metric_amplitude;
  setup.variant = cfg_.flow.variant;
  setup.psi_amplitude = cfg_.psi_amplitude;
  setup.mueller_m = cfg_.flow.target_components;
  setup.alpha = cfg_.flow.alpha;
  setup.base_points = cfg_.points[0];
  setup.base_dt = cfg_.flow.dt;
  setup.horizon = cfg_.flow.horizon;
  setup.period = cfg_.period[0];
  setup.heat = cfg_.heat;
  setup.verify.seed = cfg_.verify_seed;
  setup.verify.draws = cfg_.draws;
  setup.verify.tau_samples = cfg_.tau_samples;
  setup.verify.harnack =
      HarnackParams{2.0, 1.0, cfg_.heat.a, 0.5, -cfg_.heat.a, -2.0, 2.0, cfg_.heat.w};
  setup.ids = cfg_.identities;

  ConvergenceTable table = convergence_study(setup, cfg_.levels);

  CsvWriter csv({"identity", "level", "h", "dt", "linf", "l2", "fitted_order", "pass"});
  for (const ResidualReport& rep : table.reports) {
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
      const IdentityResidual& r = rep.levels[l];
      csv.row({to_string(rep.id), std::to_string(l), format_double(r.h), format_double(r.dt),
               format_double(r.linf), format_double(r.l2),
               rep.machine_precision ? "exact" : format_double(rep.fitted_order),
               rep.pass ? "true" : "false"});
    }
    res.lines.push_back("convergence " + std::string(to_string(rep.id)) + ": " +
                        (rep.pass ? "PASS" : "FAIL") +
                        (rep.machine_precision
                             ? " (exact)"
                             : " (order " + format_double(rep.fitted_order) + ")"));
    if (!rep.pass) res.exit_code = std::max(res.exit_code, 2);
  }
  if (cfg_.write_csv) csv.write(out("convergence.csv"));
}

void Runner::write_report(const RunResult& res) const {
  if (!cfg_.write_report) return;
  std::string text = "torusflow report\n================\n";
  for (const std::string& l : res.lines) text += l + "\n";
  text += "exit code: " + std::to_string(res.exit_code) + "\n";
  write_text(out("report.txt"), text);
}

void Runner::write_plot_script() const {
  if (!cfg_.write_plots) return;
  std::string gp =
      "# gnuplot script; reads the CSVs next to it\n"
      "set datafile separator ','\n"
      "set key autotitle columnhead\n"
      "set terminal pngcairo size 900,600\n";
  gp += "set output 'flow.png'\nset xlabel 't'\n"
        "plot 'flow.csv' using 1:2 with lines, '' using 1:3 with lines\n";
  gp += "set output 'heat.png'\nset xlabel 'tau'\n"
        "plot 'heat.csv' using 1:2 with lines, '' using 1:3 with lines\n";
  for (TheoremId id : cfg_.theorems) {
    const std::string name = to_string(id);
    gp += "set output 'margins_" + name + ".png'\nset xlabel 'tau'\nset ylabel 'margin'\n" +
          "plot 'margins_" + name + ".csv' using 1:2 with lines\n";
  }
  write_text(out("plots.gp"), gp);
}

RunResult Runner::run(Stage stage) {
  std::filesystem::create_directories(cfg_.out_dir);
  RunResult res;
  switch (stage) {
    case Stage::Flow: stage_flow(res); break;
    case Stage::Heat: stage_heat(res); break;
    case Stage::Check: stage_check(res, false); break;
    case Stage::VerifyIdentities: stage_identities(res, false); break;
    case Stage::Convergence: stage_convergence(res); break;
    case Stage::All:
      stage_flow(res);
      if (cfg_.heat_present) stage_heat(res);
      if (!cfg_.theorems.empty() || cfg_.path_pairs > 0) stage_check(res, true);
      if (!cfg_.identities.empty()) stage_identities(res, true);
      break;
  }
  write_report(res);
  write_plot_script();
  return res;
}

} // namespace torusflow
