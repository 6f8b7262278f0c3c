#include "torusflow/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace torusflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text_;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(const std::string& data) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

namespace {

constexpr char kTrajMagic[8] = {'T', 'F', 'T', 'R', 'A', 'J', '0', '1'};
constexpr char kSolMagic[8] = {'T', 'F', 'S', 'O', 'L', '0', '1', '\0'};

void put_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), std::streamsize(n));
}
void put_i32(std::ofstream& out, std::int32_t v) { put_bytes(out, &v, 4); }
void put_f64(std::ofstream& out, double v) { put_bytes(out, &v, 8); }
void put_field(std::ofstream& out, const ScalarField& f) {
  put_bytes(out, f.data().data(), f.size() * sizeof(double));
}

void get_bytes(std::ifstream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), std::streamsize(n));
  if (!in) throw Error("truncated artifact file");
}
std::int32_t get_i32(std::ifstream& in) {
  std::int32_t v;
  get_bytes(in, &v, 4);
  return v;
}
double get_f64(std::ifstream& in) {
  double v;
  get_bytes(in, &v, 8);
  return v;
}
ScalarField get_field(std::ifstream& in, const PeriodicGrid& grid) {
  ScalarField f(grid);
  get_bytes(in, f.data().data(), f.size() * sizeof(double));
  return f;
}

} // namespace

void save_trajectory(const FlowTrajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const PeriodicGrid& grid = traj.grid();
  const FlowSpec& spec = traj.spec();
  put_bytes(out, kTrajMagic, 8);
  put_i32(out, grid.dim());
  put_i32(out, grid.n(0));
  put_i32(out, grid.dim() == 2 ? grid.n(1) : 1);
  put_f64(out, grid.period(0));
  put_f64(out, grid.dim() == 2 ? grid.period(1) : 1.0);
  put_i32(out, int(spec.variant));
  put_i32(out, spec.target_components);
  put_i32(out, int(spec.alpha.kind));
  put_f64(out, spec.alpha.alpha0);
  put_f64(out, spec.horizon);
  put_f64(out, spec.dt);
  put_i32(out, traj.steps());
  const bool has_psi = spec.needs_psi();
  const int n_phi = spec.needs_phi() ? spec.target_components : 0;
  put_i32(out, has_psi ? 1 : 0);
  put_i32(out, n_phi);
  for (int k = 0; k <= traj.steps(); ++k) {
    const FlowSnapshot& sn = traj.snapshot(k);
    for (int c = 0; c < sn.g->components(); ++c) put_field(out, sn.g->flat(c));
    if (has_psi) put_field(out, *sn.psi);
    for (int m = 0; m < n_phi; ++m) put_field(out, *sn.phi[m]);
    put_field(out, *sn.s_trace);
  }
  if (!out) throw Error("failed writing " + path.string());
}

FlowTrajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  char magic[8];
  get_bytes(in, magic, 8);
  if (std::memcmp(magic, kTrajMagic, 8) != 0) throw Error("not a trajectory artifact: " + path.string());
  const int dim = get_i32(in);
  const int n0 = get_i32(in);
  const int n1 = get_i32(in);
  const double p0 = get_f64(in);
  const double p1 = get_f64(in);
  PeriodicGrid grid(dim, {n0, n1}, {p0, p1});
  FlowSpec spec;
  spec.variant = FlowVariant(get_i32(in));
  spec.target_components = get_i32(in);
  spec.alpha.kind = AlphaSchedule::Kind(get_i32(in));
  spec.alpha.alpha0 = get_f64(in);
  spec.horizon = get_f64(in);
  spec.dt = get_f64(in);
  const int K = get_i32(in);
  const bool has_psi = get_i32(in) != 0;
  const int n_phi = get_i32(in);

  FlowTrajectory traj(grid, spec);
  for (int k = 0; k <= K; ++k) {
    FlowSnapshot sn;
    sn.t = k * spec.dt;
    SymTensorField g(grid, IndexKind::Lower);
    for (int c = 0; c < g.components(); ++c) g.flat(c) = get_field(in, grid);
    sn.g = std::make_shared<const SymTensorField>(std::move(g));
    if (has_psi) sn.psi = std::make_shared<const ScalarField>(get_field(in, grid));
    for (int m = 0; m < n_phi; ++m)
      sn.phi.push_back(std::make_shared<const ScalarField>(get_field(in, grid)));
    sn.s_trace = std::make_shared<const ScalarField>(get_field(in, grid));
    traj.append(std::move(sn));
  }
  return traj;
}

void save_solution(const HeatSolution& sol, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  put_bytes(out, kSolMagic, 8);
  const HeatParams& hp = sol.params();
  put_i32(out, int(hp.gamma.kind));
  put_f64(out, hp.gamma.c0);
  put_f64(out, hp.gamma.c1);
  put_f64(out, hp.a);
  put_i32(out, int(hp.profile.kind));
  put_f64(out, hp.profile.param);
  put_i32(out, int(hp.w.kind));
  put_f64(out, hp.w.coeff);
  put_f64(out, sol.dt());
  put_f64(out, sol.horizon());
  put_i32(out, sol.steps());
  put_f64(out, sol.min_f());
  put_f64(out, sol.max_f());
  put_i32(out, sol.sub_unity_applicable() ? 1 : 0);
  put_i32(out, sol.sub_unity_preserved() ? 1 : 0);
  for (int j = 0; j <= sol.steps(); ++j) put_field(out, sol.f(j));
  if (!out) throw Error("failed writing " + path.string());
}

HeatSolution load_solution(const std::filesystem::path& path, const PeriodicGrid& grid) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  char magic[8];
  get_bytes(in, magic, 8);
  if (std::memcmp(magic, kSolMagic, 8) != 0) throw Error("not a solution artifact: " + path.string());
  HeatParams hp;
  hp.gamma.kind = GammaFn::Kind(get_i32(in));
  hp.gamma.c0 = get_f64(in);
  hp.gamma.c1 = get_f64(in);
  hp.a = get_f64(in);
  hp.profile.kind = TerminalProfile::Kind(get_i32(in));
  hp.profile.param = get_f64(in);
  hp.w.kind = GaugeFn::Kind(get_i32(in));
  hp.w.coeff = get_f64(in);
  const double dt = get_f64(in);
  const double horizon = get_f64(in);
  const int K = get_i32(in);
  const double mn = get_f64(in);
  const double mx = get_f64(in);
  const bool applicable = get_i32(in) != 0;
  const bool preserved = get_i32(in) != 0;

  HeatSolution sol(grid, dt, horizon, hp);
  for (int j = 0; j <= K; ++j)
    sol.append(std::make_shared<const ScalarField>(get_field(in, grid)));
  sol.set_extrema(mn, mx);
  sol.set_sub_unity(applicable, preserved);
  return sol;
}

} // namespace torusflow
