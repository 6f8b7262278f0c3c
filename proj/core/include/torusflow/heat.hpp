#pragma once

#include <memory>
#include <string>
#include <vector>

#include "torusflow/flow.hpp"

namespace torusflow {

/// gamma, either a constant or an evaluable function of tau.
struct GammaFn {
  enum class Kind { Constant, Linear } kind = Kind::Constant; // Linear: c0 + c1*tau
  double c0 = 0.0;
  double c1 = 0.0;

  double operator()(double tau) const { return kind == Kind::Constant ? c0 : c0 + c1 * tau; }
  bool is_constant() const { return kind == Kind::Constant || c1 == 0.0; }
  double min_on(double horizon) const {
    return kind == Kind::Constant ? c0 : std::min(c0, c0 + c1 * horizon);
  }
  static GammaFn constant(double g) { return {Kind::Constant, g, 0.0}; }
  static GammaFn linear(double g0, double g1) { return {Kind::Linear, g0, g1}; }
};

/// Spatially constant gauge w(tau); only enters quantities multiplied by b.
struct GaugeFn {
  enum class Kind { Zero, QuadraticTau } kind = Kind::Zero; // QuadraticTau: coeff * tau^2
  double coeff = 0.0;

  double value(double tau) const { return kind == Kind::Zero ? 0.0 : coeff * tau * tau; }
  double derivative(double tau) const { return kind == Kind::Zero ? 0.0 : 2.0 * coeff * tau; }
  static GaugeFn zero() { return {}; }
  static GaugeFn quadratic(double c) { return {Kind::QuadraticTau, c}; }
};

/// Terminal data f(tau = 0) at t = T.
struct TerminalProfile {
  enum class Kind {
    Constant,     // c0 in (0, inf)
    Fourier,      // 1/2 + eps * sin(2 pi x/L) [* cos(2 pi y/L) in 2D], eps in (0, 1/2)
    Bump,         // 0.9 * exp(-A (1 - cos(2 pi x/L) [* cos(2 pi y/L)])), inside (0,1)
    PositiveFree, // exp(amp * sin(2 pi x/L)), positive, may exceed 1
  } kind = Kind::Fourier;
  double param = 0.1;

  ScalarField build(const PeriodicGrid& grid) const;
  /// Strictly inside (0,1) for every grid?
  bool sub_unity() const;
  void validate() const;
  static TerminalProfile constant(double c0) { return {Kind::Constant, c0}; }
  static TerminalProfile fourier(double eps) { return {Kind::Fourier, eps}; }
  static TerminalProfile bump(double A) { return {Kind::Bump, A}; }
  static TerminalProfile positive_free(double amp) { return {Kind::PositiveFree, amp}; }
};

struct HeatParams {
  GammaFn gamma;
  double a = 0.0; // coefficient of the S f term; the potential-form constant is c = -a
  TerminalProfile profile;
  GaugeFn w;

  double c() const { return -a; }
};

/// Positive solution f(tau_k, .) on the trajectory's reversed time grid.
class HeatSolution {
public:
  HeatSolution(PeriodicGrid grid, double dt, double horizon, HeatParams params)
      : grid_(std::move(grid)), dt_(dt), horizon_(horizon), params_(params) {}

  const PeriodicGrid& grid() const { return grid_; }
  const HeatParams& params() const { return params_; }
  double dt() const { return dt_; }
  double horizon() const { return horizon_; }
  int steps() const { return int(f_.size()) - 1; }
  double tau(int j) const { return j * dt_; }

  const ScalarField& f(int j) const { return *f_[j]; }
  /// u = -log f
  ScalarField u(int j) const;
  /// v = u - w(tau_j)
  ScalarField v(int j) const;

  double min_f() const { return min_f_; }
  double max_f() const { return max_f_; }
  /// True when the run qualified for the sub-unity maximum principle
  /// (gamma >= 0, a = 0, 0 < f(0) < 1) and max f stayed < 1 + 1e-10.
  bool sub_unity_preserved() const { return sub_unity_applicable_ && sub_unity_ok_; }
  bool sub_unity_applicable() const { return sub_unity_applicable_; }

  void append(std::shared_ptr<const ScalarField> f) { f_.push_back(std::move(f)); }
  void set_extrema(double mn, double mx) { min_f_ = mn; max_f_ = mx; }
  void set_sub_unity(bool applicable, bool ok) {
    sub_unity_applicable_ = applicable;
    sub_unity_ok_ = ok;
  }

private:
  PeriodicGrid grid_;
  double dt_, horizon_;
  HeatParams params_;
  std::vector<std::shared_ptr<const ScalarField>> f_;
  double min_f_ = 0.0, max_f_ = 0.0;
  bool sub_unity_applicable_ = false, sub_unity_ok_ = false;
};

/// RK4 in tau with the metric and S frozen at the snapshot of each step;
/// gamma(tau) is sampled at the stage times.
HeatSolution solve_backward_heat(const FlowTrajectory& traj, const HeatParams& params);

ScalarField u_field(const HeatSolution& sol, int tau_j);
ScalarField v_field(const HeatSolution& sol, const HeatParams& params, int tau_j);

/// Residual of d u/d tau = Lap u - |grad u|^2 - c S - gamma(tau) u at interior tau_j,
/// with the tau-derivative by centered differences of the stored u.
ScalarField u_evolution_residual(const HeatSolution& sol, const FlowTrajectory& traj,
                                 const HeatParams& params, int tau_j);

} // namespace torusflow
