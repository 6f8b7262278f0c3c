#pragma once

#include <cstdint>
#include <optional>

#include "torusflow/harnack.hpp"
#include "torusflow/setups.hpp"

namespace torusflow {

/// Evolution laws and algebraic rewritings of the Harnack quantities, one id each.
enum class IdentityId {
  L31_LAP,     // evolution of Lap(u)
  L31_GRAD,    // evolution of |grad u|^2
  P32,         // full H_S evolution, constant gamma
  T1_EQUIV,    // completion-of-square rewriting == the raw evolution (pure algebra)
  T2_EQUIV,    // v-form rewriting via P_S = H_S - (b/tau) w(tau) (pure algebra)
  C31_TRACE,   // |hess v + S - g/tau|^2 >= (1/n)(Lap v + S - n/tau)^2 pointwise
  C31_FULL,    // one-sided bound on dP_S/dtau with 0 <= gamma <= 1
  P71,         // H_S evolution with gamma(tau); the Delta S coefficient uses c = -a
  GAMMA_VAR_U, // du/dtau = Lap u - |grad u|^2 + a S - gamma(tau) u
};

const char* to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(const std::string& s);

/// Algebraic identities hold at machine precision with no refinement; the rest
/// are centered-in-tau discretization residuals that converge under refinement.
bool is_algebraic(IdentityId id);

struct VerifyParams {
  HarnackParams harnack; // alpha, beta, a, b, c, d, lambda, w
  int tau_samples = 3;
  std::uint64_t seed = 2024;
  int draws = 50; // random field draws for algebraic identities
};

struct IdentityResidual {
  double h = 0.0;
  double dt = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
};

struct ResidualReport {
  IdentityId id;
  std::vector<IdentityResidual> levels;
  double fitted_order = 0.0; // least-squares log-log fit on the finest 3 levels
  bool order_fitted = false;
  bool machine_precision = false; // algebraic identity class
  bool pass = false;
  std::string note;
};

/// Residual of one identity on one run (one refinement level). Algebraic
/// identities ignore the solution and evaluate on seeded random smooth fields
/// (which solve no PDE); their residual is relative.
IdentityResidual eval_identity_residual(IdentityId id, const FlowTrajectory& traj,
                                        const HeatSolution& sol, const VerifyParams& params);

/// Algebraic identities, standalone: worst relative residual over `draws`
/// random (g, S, dS/dtau, u, constants) draws on the given grid.
IdentityResidual eval_algebraic_residual(IdentityId id, const PeriodicGrid& grid,
                                         std::uint64_t seed, int draws);

/// Single-level report (order fitting requires convergence_study).
ResidualReport verify_identity(IdentityId id, const FlowTrajectory& traj, const HeatSolution& sol,
                               const VerifyParams& params);

/// Recipe for one refinement ladder: level l runs N = base_points * 2^l,
/// dt = base_dt / 4^l (dt scaled as h^2).
struct ConvergenceSetup {
  MetricSelector metric = MetricSelector::Conformal;
  double metric_amplitude = 0.3;
  FlowVariant variant = FlowVariant::Ricci;
  double psi_amplitude = 0.2; // List psi / Mueller phi initial amplitude
  int mueller_m = 1;
  AlphaSchedule alpha;
  int base_points = 16;
  double base_dt = 4e-4;
  double horizon = 0.02;
  double period = 1.0;
  HeatParams heat;
  VerifyParams verify;
  std::vector<IdentityId> ids;
};

struct ConvergenceTable {
  std::vector<IdentityId> ids;
  std::vector<ResidualReport> reports; // one per id, all levels filled
  bool pass = false;
};

/// Runs `levels` refinements (>= 3, else InsufficientLevels) and fits orders.
ConvergenceTable convergence_study(const ConvergenceSetup& setup, int levels);

} // namespace torusflow
