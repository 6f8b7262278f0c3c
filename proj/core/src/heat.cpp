#include "torusflow/heat.hpp"

#include <cmath>
#include <numbers>

namespace torusflow {

namespace {
constexpr double kPositivityFloor = 1e-300;
}

ScalarField TerminalProfile::build(const PeriodicGrid& grid) const {
  validate();
  ScalarField f(grid);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int iy = 0; iy < grid.n(1); ++iy)
    for (int ix = 0; ix < grid.n(0); ++ix) {
      const double cx = two_pi * ix / grid.n(0);
      const double cy = two_pi * iy / grid.n(1);
      double v = 0.0;
      switch (kind) {
        case Kind::Constant: v = param; break;
        case Kind::Fourier:
          v = 0.5 + param * std::sin(cx) * (grid.dim() == 2 ? std::cos(cy) : 1.0);
          break;
        case Kind::Bump:
          v = 0.9 * std::exp(-param * (1.0 - std::cos(cx) * (grid.dim() == 2 ? std::cos(cy) : 1.0)));
          break;
        case Kind::PositiveFree: v = std::exp(param * std::sin(cx)); break;
      }
      f(ix, iy) = v;
    }
  return f;
}

bool TerminalProfile::sub_unity() const {
  switch (kind) {
    case Kind::Constant: return param < 1.0;
    case Kind::Fourier: return true; // eps < 1/2 validated
    case Kind::Bump: return true;
    case Kind::PositiveFree: return false;
  }
  return false;
}

void TerminalProfile::validate() const {
  switch (kind) {
    case Kind::Constant:
      if (param <= 0.0) throw Error("constant terminal profile must be positive");
      break;
    case Kind::Fourier:
      if (param <= 0.0 || param >= 0.5)
        throw Error("fourier terminal profile needs eps in (0, 1/2)");
      break;
    case Kind::Bump:
      if (param <= 0.0) throw Error("bump terminal profile needs A > 0");
      break;
    case Kind::PositiveFree:
      if (param == 0.0) throw Error("positive-free terminal profile needs amp != 0");
      break;
  }
}

HeatSolution solve_backward_heat(const FlowTrajectory& traj, const HeatParams& params) {
  const PeriodicGrid& grid = traj.grid();
  const int K = traj.steps();
  const double dt = traj.dt();
  const double a = params.a;

  ScalarField f = params.profile.build(grid);
  double min_f = grid_min(f).value, max_f = grid_max(f).value;
  if (min_f <= 0.0) throw Error("terminal profile is not strictly positive");
  const bool sub_unity_applies =
      params.gamma.min_on(traj.horizon()) >= 0.0 && a == 0.0 && max_f < 1.0;
  bool sub_unity_ok = true;

  HeatSolution sol(grid, dt, traj.horizon(), params);
  sol.append(std::make_shared<const ScalarField>(f));

  // per-step scratch, reused when consecutive snapshots share their metric
  const SymTensorField* cached_g = nullptr;
  std::optional<MetricAlgebra> alg;

  ScalarField k1(grid), k2(grid), k3(grid), k4(grid), stage(grid);

  auto rhs = [&](const ScalarField& fv, double tau_stage, const ScalarField& s_trace,
                 ScalarField& out) {
    out = alg->laplacian(fv);
    const double g = params.gamma(tau_stage);
    for (int iy = 0; iy < grid.n(1); ++iy)
      for (int ix = 0; ix < grid.n(0); ++ix) {
        const double v = fv(ix, iy);
        if (!(v >= kPositivityFloor)) throw PositivityLoss(tau_stage, ix, iy, v);
        out(ix, iy) -= g * v * std::log(v) + a * s_trace(ix, iy) * v;
      }
  };

  for (int j = 0; j < K; ++j) {
    const double tau = j * dt;
    const FlowSnapshot& sn = traj.at_tau(j);
    if (cached_g != sn.g.get()) {
      alg.emplace(*sn.g);
      cached_g = sn.g.get();
    }
    const ScalarField& S = *sn.s_trace;

    rhs(f, tau, S, k1);
    stage = f;
    for (std::size_t p = 0; p < f.size(); ++p) stage[p] = f[p] + 0.5 * dt * k1[p];
    rhs(stage, tau + 0.5 * dt, S, k2);
    for (std::size_t p = 0; p < f.size(); ++p) stage[p] = f[p] + 0.5 * dt * k2[p];
    rhs(stage, tau + 0.5 * dt, S, k3);
    for (std::size_t p = 0; p < f.size(); ++p) stage[p] = f[p] + dt * k3[p];
    rhs(stage, tau + dt, S, k4);
    for (std::size_t p = 0; p < f.size(); ++p)
      f[p] += dt / 6.0 * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);

    const double tau_next = (j + 1) * dt;
    if (!f.all_finite()) throw StabilityFailure(tau_next, "heat solution became non-finite");
    ArgExtremum mn = grid_min(f);
    if (!(mn.value >= kPositivityFloor))
      throw PositivityLoss(tau_next, mn.ix, mn.iy, mn.value);
    ArgExtremum mx = grid_max(f);
    min_f = std::min(min_f, mn.value);
    max_f = std::max(max_f, mx.value);
    if (sub_unity_applies && mx.value >= 1.0 + 1e-10) sub_unity_ok = false;
    sol.append(std::make_shared<const ScalarField>(f));
  }

  sol.set_extrema(min_f, max_f);
  sol.set_sub_unity(sub_unity_applies, sub_unity_ok);
  return sol;
}

ScalarField HeatSolution::u(int j) const {
  const ScalarField& fj = f(j);
  ScalarField out(grid_);
  for (int iy = 0; iy < grid_.n(1); ++iy)
    for (int ix = 0; ix < grid_.n(0); ++ix) {
      const double v = fj(ix, iy);
      if (!(v >= kPositivityFloor)) throw PositivityLoss(tau(j), ix, iy, v);
      out(ix, iy) = -std::log(v);
    }
  return out;
}

ScalarField HeatSolution::v(int j) const { return u(j) - params_.w.value(tau(j)); }

ScalarField u_field(const HeatSolution& sol, int tau_j) { return sol.u(tau_j); }

ScalarField v_field(const HeatSolution& sol, const HeatParams& params, int tau_j) {
  return sol.u(tau_j) - params.w.value(sol.tau(tau_j));
}

ScalarField u_evolution_residual(const HeatSolution& sol, const FlowTrajectory& traj,
                                 const HeatParams& params, int tau_j) {
  if (tau_j < 1 || tau_j > sol.steps() - 1) throw BoundaryTime(tau_j);
  const double dt = sol.dt();
  ScalarField up = sol.u(tau_j + 1);
  ScalarField um = sol.u(tau_j - 1);
  ScalarField uj = sol.u(tau_j);
  MetricAlgebra alg(*traj.at_tau(tau_j).g);
  const ScalarField& S = *traj.at_tau(tau_j).s_trace;
  ScalarField res(sol.grid());
  ScalarField lap = alg.laplacian(uj);
  ScalarField gn = alg.grad_norm2(uj);
  const double gamma = params.gamma(sol.tau(tau_j));
  const double c = params.c();
  for (std::size_t p = 0; p < res.size(); ++p)
    res[p] = (up[p] - um[p]) / (2.0 * dt) - (lap[p] - gn[p] - c * S[p] - gamma * uj[p]);
  return res;
}

} // namespace torusflow
