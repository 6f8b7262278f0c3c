#include "torusflow/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "torusflow/geometry.hpp"
#include "torusflow/io.hpp"

namespace torusflow {

namespace {

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

struct Sections {
  std::map<std::string, std::map<std::string, Entry>> data;

  Entry* find(const std::string& sec, const std::string& key) {
    auto s = data.find(sec);
    if (s == data.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Sections tokenize(const std::string& text) {
  Sections out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, line, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(lineno, line, "empty section name");
      out.data[section];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, line, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(lineno, key, "key outside any [section]");
    if (key.empty() || value.empty()) throw ConfigError(lineno, key, "empty key or value");
    if (out.data[section].count(key)) throw ConfigError(lineno, key, "duplicate key");
    out.data[section][key] = {value, lineno};
  }
  return out;
}

double to_double(const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(e.line, key, "expected a real number, got '" + e.value + "'");
  }
}

std::int64_t to_int(const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(e.line, key, "expected an integer, got '" + e.value + "'");
  }
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(e.line, key, "expected true/false");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    (void)std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

std::string section_text(const Sections& secs, const std::string& name) {
  auto it = secs.data.find(name);
  if (it == secs.data.end()) return "";
  std::string out = "[" + name + "]\n";
  for (const auto& [k, e] : it->second) out += k + " = " + e.value + "\n";
  return out;
}

} // namespace

PeriodicGrid RunConfig::make_grid() const { return PeriodicGrid(dim, points, period); }

MetricState RunConfig::make_initial_state() const {
  PeriodicGrid grid = make_grid();
  MetricState st{0.0, make_initial_metric(grid, metric, metric_amplitude), std::nullopt, {}};
  if (flow.needs_psi()) st.psi = make_wave_field(grid, psi_amplitude);
  if (flow.needs_phi())
    for (int m = 0; m < flow.target_components; ++m)
      st.phi.push_back(make_wave_field(grid, psi_amplitude));
  return st;
}

RunConfig parse_config_text(const std::string& text) {
  Sections secs = tokenize(text);
  RunConfig cfg;

  for (const auto& [name, _] : secs.data)
    if (name != "grid" && name != "flow" && name != "heat" && name != "check" && name != "output")
      throw ConfigError(0, name, "unknown section");

  // [grid]
  if (Entry* e = secs.find("grid", "dim")) cfg.dim = int(to_int(*e, "dim"));
  if (Entry* e = secs.find("grid", "points")) {
    auto toks = split_ws(e->value);
    try {
      if (toks.size() == 1) {
        cfg.points = {int(std::stoll(toks[0])), int(std::stoll(toks[0]))};
      } else if (toks.size() == 2) {
        cfg.points = {int(std::stoll(toks[0])), int(std::stoll(toks[1]))};
      } else {
        throw std::invalid_argument("");
      }
    } catch (const std::logic_error&) {
      throw ConfigError(e->line, "points", "expected one or two integers, got '" + e->value + "'");
    }
  }
  if (Entry* e = secs.find("grid", "period")) {
    auto toks = split_ws(e->value);
    try {
      if (toks.size() == 1) {
        cfg.period = {std::stod(toks[0]), std::stod(toks[0])};
      } else if (toks.size() == 2) {
        cfg.period = {std::stod(toks[0]), std::stod(toks[1])};
      } else {
        throw std::invalid_argument("");
      }
    } catch (const std::logic_error&) {
      throw ConfigError(e->line, "period", "expected one or two reals, got '" + e->value + "'");
    }
  }

  // [flow]
  if (Entry* e = secs.find("flow", "variant")) {
    const std::string& v = e->value;
    if (v == "static") cfg.flow.variant = FlowVariant::Static;
    else if (v == "ricci") cfg.flow.variant = FlowVariant::Ricci;
    else if (v == "list") cfg.flow.variant = FlowVariant::List;
    else if (v == "mueller") cfg.flow.variant = FlowVariant::Mueller;
    else throw ConfigError(e->line, "variant", "unknown flow variant '" + v + "'");
  }
  if (Entry* e = secs.find("flow", "T")) cfg.flow.horizon = to_double(*e, "T");
  if (Entry* e = secs.find("flow", "dt")) cfg.flow.dt = to_double(*e, "dt");
  if (Entry* e = secs.find("flow", "metric")) {
    const std::string& v = e->value;
    if (v == "flat") cfg.metric = MetricSelector::Flat;
    else if (v == "conformal") cfg.metric = MetricSelector::Conformal;
    else if (v == "flat_anisotropic") cfg.metric = MetricSelector::FlatAnisotropic;
    else throw ConfigError(e->line, "metric", "unknown initial metric '" + v + "'");
  }
  if (Entry* e = secs.find("flow", "amplitude")) cfg.metric_amplitude = to_double(*e, "amplitude");
  if (Entry* e = secs.find("flow", "psi_amplitude"))
    cfg.psi_amplitude = to_double(*e, "psi_amplitude");
  if (Entry* e = secs.find("flow", "phi_components"))
    cfg.flow.target_components = int(to_int(*e, "phi_components"));
  if (Entry* e = secs.find("flow", "alpha")) {
    if (e->value == "constant") cfg.flow.alpha.kind = AlphaSchedule::Kind::Constant;
    else if (e->value == "decay") cfg.flow.alpha.kind = AlphaSchedule::Kind::Decay;
    else throw ConfigError(e->line, "alpha", "expected constant | decay");
  }
  if (Entry* e = secs.find("flow", "alpha0")) cfg.flow.alpha.alpha0 = to_double(*e, "alpha0");

  // [heat]
  cfg.heat_present = secs.data.count("heat") > 0;
  if (Entry* e = secs.find("heat", "gamma")) {
    if (is_number(e->value)) {
      cfg.heat.gamma = GammaFn::constant(std::stod(e->value));
    } else if (e->value == "linear") {
      double g0 = 0.0, g1 = 0.0;
      if (Entry* e0 = secs.find("heat", "gamma0")) g0 = to_double(*e0, "gamma0");
      if (Entry* e1 = secs.find("heat", "gamma1")) g1 = to_double(*e1, "gamma1");
      cfg.heat.gamma = GammaFn::linear(g0, g1);
    } else {
      throw ConfigError(e->line, "gamma", "expected a number or 'linear'");
    }
  }
  if (Entry* e = secs.find("heat", "a")) cfg.heat.a = to_double(*e, "a");
  if (Entry* e = secs.find("heat", "profile")) {
    const std::string& v = e->value;
    if (v == "constant") cfg.heat.profile.kind = TerminalProfile::Kind::Constant;
    else if (v == "fourier") cfg.heat.profile.kind = TerminalProfile::Kind::Fourier;
    else if (v == "bump") cfg.heat.profile.kind = TerminalProfile::Kind::Bump;
    else if (v == "positive_free") cfg.heat.profile.kind = TerminalProfile::Kind::PositiveFree;
    else throw ConfigError(e->line, "profile", "unknown terminal profile '" + v + "'");
  }
  if (Entry* e = secs.find("heat", "profile_param")) cfg.heat.profile.param = to_double(*e, "profile_param");
  if (Entry* e = secs.find("heat", "gauge")) {
    if (e->value == "zero") cfg.heat.w.kind = GaugeFn::Kind::Zero;
    else if (e->value == "quadratic") cfg.heat.w.kind = GaugeFn::Kind::QuadraticTau;
    else throw ConfigError(e->line, "gauge", "expected zero | quadratic");
  }
  if (Entry* e = secs.find("heat", "gauge_coeff")) cfg.heat.w.coeff = to_double(*e, "gauge_coeff");

  // [check]
  if (Entry* e = secs.find("check", "theorems")) {
    for (const std::string& tok : split_ws(e->value)) {
      bool found = false;
      for (TheoremId id : {TheoremId::A1, TheoremId::A2, TheoremId::Aa, TheoremId::B,
                           TheoremId::Bvar, TheoremId::C, TheoremId::E})
        if (tok == to_string(id)) {
          cfg.theorems.push_back(id);
          found = true;
        }
      if (!found) throw ConfigError(e->line, "theorems", "unknown theorem id '" + tok + "'");
    }
  }
  if (Entry* e = secs.find("check", "identities")) {
    for (const std::string& tok : split_ws(e->value)) {
      auto id = identity_from_string(tok);
      if (!id) throw ConfigError(e->line, "identities", "unknown identity id '" + tok + "'");
      cfg.identities.push_back(*id);
    }
  }
  if (Entry* e = secs.find("check", "slack_kappa"))
    cfg.check_options.slack_kappa = to_double(*e, "slack_kappa");
  if (Entry* e = secs.find("check", "tau_min_steps"))
    cfg.check_options.tau_min_steps = int(to_int(*e, "tau_min_steps"));
  if (Entry* e = secs.find("check", "hypothesis_samples"))
    cfg.check_options.hypothesis_samples = int(to_int(*e, "hypothesis_samples"));
  if (Entry* e = secs.find("check", "bvar_A")) cfg.check_options.bvar_A = to_double(*e, "bvar_A");
  if (Entry* e = secs.find("check", "paths")) cfg.path_pairs = int(to_int(*e, "paths"));
  if (Entry* e = secs.find("check", "path_seed"))
    cfg.path_seed = std::uint64_t(to_int(*e, "path_seed"));
  if (Entry* e = secs.find("check", "levels")) cfg.levels = int(to_int(*e, "levels"));
  if (Entry* e = secs.find("check", "draws")) cfg.draws = int(to_int(*e, "draws"));
  if (Entry* e = secs.find("check", "verify_seed"))
    cfg.verify_seed = std::uint64_t(to_int(*e, "verify_seed"));
  if (Entry* e = secs.find("check", "tau_samples")) cfg.tau_samples = int(to_int(*e, "tau_samples"));

  // [output]
  if (Entry* e = secs.find("output", "dir")) cfg.out_dir = e->value;
  if (Entry* e = secs.find("output", "csv")) cfg.write_csv = to_bool(*e, "csv");
  if (Entry* e = secs.find("output", "report")) cfg.write_report = to_bool(*e, "report");
  if (Entry* e = secs.find("output", "plots")) cfg.write_plots = to_bool(*e, "plots");

  // reject unknown keys: typos must not silently change a run
  for (const auto& [sec, kv] : secs.data)
    for (const auto& [key, entry] : kv)
      if (!entry.used) throw ConfigError(entry.line, key, "unknown key in [" + sec + "]");

  cfg.grid_flow_text = section_text(secs, "grid") + section_text(secs, "flow");
  cfg.heat_text = cfg.grid_flow_text + section_text(secs, "heat");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const RunConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > 2) throw ConfigError(0, "dim", "dim must be 1 or 2");
  for (int ax = 0; ax < cfg.dim; ++ax) {
    if (cfg.points[ax] < 8) throw ConfigError(0, "points", "need >= 8 points per axis");
    if (cfg.period[ax] <= 0) throw ConfigError(0, "period", "period must be positive");
  }
  try {
    cfg.flow.validate();
  } catch (const Error& e) {
    throw ConfigError(0, "flow", e.what());
  }
  if (cfg.heat_present) {
    try {
      cfg.heat.profile.validate();
    } catch (const Error& e) {
      throw ConfigError(0, "profile", e.what());
    }
  }

  // dt against the stability bound of the initial metric (it tightens only
  // mildly along the smoothing flows at desk scale; the run re-checks every step)
  if (cfg.flow.variant != FlowVariant::Static || cfg.heat_present) {
    PeriodicGrid grid = cfg.make_grid();
    MetricAlgebra alg(make_initial_metric(grid, cfg.metric, cfg.metric_amplitude));
    double hmin = grid.h(0);
    for (int ax = 1; ax < grid.dim(); ++ax) hmin = std::min(hmin, grid.h(ax));
    const double bound = 0.2 * hmin * hmin / alg.max_inverse_eigenvalue();
    if (cfg.flow.dt > bound)
      throw ConfigError(0, "dt",
                        "dt = " + format_double(cfg.flow.dt) +
                            " exceeds the stability bound " + format_double(bound));
  }

  // theorem preconditions on the heat parameters, before any compute
  for (TheoremId id : cfg.theorems) {
    if (!cfg.heat_present)
      throw ConfigError(0, "theorems", "theorem checks need a [heat] section");
    try {
      switch (id) {
        case TheoremId::A1:
          if (!(cfg.heat.gamma.is_constant() && cfg.heat.gamma(0) == 1.0 && cfg.heat.a == 2.0))
            throw WrongHeatParams("A1 needs gamma = 1, a = 2");
          break;
        case TheoremId::A2:
        case TheoremId::Aa:
          if (!(cfg.heat.gamma.is_constant() && cfg.heat.gamma(0) == 1.0 && cfg.heat.a == 1.0))
            throw WrongHeatParams(std::string(to_string(id)) + " needs gamma = 1, a = 1");
          break;
        case TheoremId::B:
          if (!(cfg.heat.a == 0.0 && cfg.heat.gamma.is_constant() && cfg.heat.gamma(0) > 0.0))
            throw WrongHeatParams("B needs a = 0 and constant gamma > 0");
          if (!cfg.heat.profile.sub_unity())
            throw WrongHeatParams("B needs a terminal profile inside (0,1)");
          break;
        case TheoremId::Bvar:
          if (!(cfg.heat.a == 0.0 && cfg.heat.gamma.min_on(cfg.flow.horizon) > 0.0))
            throw WrongHeatParams("Bvar needs a = 0 and gamma(tau) > 0");
          if (!cfg.heat.profile.sub_unity())
            throw WrongHeatParams("Bvar needs a terminal profile inside (0,1)");
          break;
        case TheoremId::C:
          if (!(cfg.heat.a == 0.0 && cfg.heat.gamma.is_constant() && cfg.heat.gamma(0) == 0.0))
            throw WrongHeatParams("C needs gamma = 0, a = 0");
          if (!cfg.heat.profile.sub_unity())
            throw WrongHeatParams("C needs a terminal profile inside (0,1)");
          break;
        case TheoremId::E:
          if (!(cfg.heat.gamma.is_constant() && cfg.heat.gamma(0) == 0.0 && cfg.heat.a == 1.0))
            throw WrongHeatParams("E needs gamma = 0, a = 1");
          break;
      }
    } catch (const WrongHeatParams& e) {
      throw ConfigError(0, "theorems", e.what());
    }
  }
}

} // namespace torusflow
