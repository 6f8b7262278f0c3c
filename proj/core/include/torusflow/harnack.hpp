#pragma once

#include <string>
#include <vector>

#include "torusflow/heat.hpp"

namespace torusflow {

/// Constants of the general Harnack quantity H_S = alpha*Lap(u) - beta*|grad u|^2
/// + a*S + b*u/tau + d*n/tau, plus the completion constant lambda and gauge w.
struct HarnackParams {
  double alpha = 2.0;
  double beta = 1.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double lambda = 0.0;
  GaugeFn w;
};

/// E_a(S, X) of the abstract flow: (a dS/dtau + a Lap S + 2|S_ij|^2)
/// - 2(2 div(S)_l - grad(S)_l) X^l - 2 (R - S)(X, X).
/// X may carry either index kind; it is raised internally when needed.
/// tau_j must be interior (centered dS/dtau), else BoundaryTime.
ScalarField eval_E_a(const FlowTrajectory& traj, int tau_j, const VectorField& X, double a);

/// The four-parameter error term of the general rewriting; alpha != beta required.
ScalarField eval_E_general(const FlowTrajectory& traj, int tau_j, const VectorField& X,
                           const HarnackParams& p);

/// Rank-decision tolerances for the exact quadratic supremum.
struct SupETolerances {
  double psd = 0.0;   // eigenvalue threshold: lambda < -psd means indefinite
  double range = 0.0; // |D . eigvec| threshold on null directions
};

struct SupEField {
  ScalarField value;   // exact sup where bounded; the finite part elsewhere
  ScalarField bounded; // 1.0 bounded, 0.0 unbounded
  bool all_bounded = true;
};

/// Pointwise exact supremum of E_a over X in R^n via eigen-decomposition of
/// M = R - S: sup = C + (1/2) D^T M^+ D when M >= 0 and D in range(M);
/// flagged unbounded otherwise. Unboundedness is data, not an error.
SupEField sup_E_over_X(const FlowTrajectory& traj, int tau_j, double a, SupETolerances tol);

/// H_S at tau_j (> 0) from the stored solution; u = -log f.
ScalarField eval_H_S(const FlowTrajectory& traj, const HeatSolution& sol, int tau_j,
                     const HarnackParams& p);
/// P_S: same with v = u - w(tau); equals H_S - (b/tau) w(tau).
ScalarField eval_P_S(const FlowTrajectory& traj, const HeatSolution& sol, int tau_j,
                     const HarnackParams& p);

enum class TheoremId { A1, A2, Aa, B, Bvar, C, E };
const char* to_string(TheoremId id);

struct TheoremCheckOptions {
  double slack_kappa = 10.0; // slack = kappa * (h^2 + dt) * Q_scale
  int tau_min_steps = 5;
  int hypothesis_samples = 9; // interior tau slices where X-quantified checks run
  double bvar_A = 0.0;        // the constant A of the gamma(tau) variant
};

struct HypothesisResult {
  std::string description;
  double worst = 0.0; // worst margin (>= -tol passes)
  double tol = 0.0;
  bool ok = true;
};

struct MarginEntry {
  double tau;
  double margin; // min over grid; >= -slack passes (E: per-tau min of the quantity)
  int argmin_x, argmin_y;
};

struct HarnackReport {
  TheoremId id;
  std::vector<MarginEntry> margins;
  std::vector<HypothesisResult> hypotheses;
  double slack = 0.0;
  double q_scale = 0.0;
  std::string slack_formula;
  double worst_margin = 0.0; // min margin (E: worst per-step dip along tau)
  bool hypothesis_ok = true;
  bool conclusion_ok = true;

  enum class Verdict { Pass, ConclusionViolated, HypothesisFailed } verdict = Verdict::Pass;
  /// 0 pass, 2 conclusion violated beyond slack, 4 hypothesis failed
  int exit_code() const;
};

/// Checks one theorem's hypothesis and conclusion on the given run.
/// Throws WrongHeatParams when the solution was produced with parameters other
/// than the theorem requires. A failed hypothesis is a verdict, not an error.
HarnackReport check_theorem(TheoremId id, const FlowTrajectory& traj, const HeatSolution& sol,
                            const TheoremCheckOptions& opt = {});

/// Space-time path from (x1, t1) to (x2, t2), t1 < t2, straight in the
/// coordinate torus with constant coordinate speed, sampled on the
/// trajectory's time grid. Consecutive samples move at most one grid cell.
class SpaceTimePath {
public:
  struct Sample {
    int k;      // flow time index
    int ix, iy; // nearest grid point
    double speed2; // |ldot|^2 in g(t_k) at the sample point
  };

  static SpaceTimePath straight(const FlowTrajectory& traj, int x1, int y1, int k1, int x2,
                                int y2, int k2);

  const std::vector<Sample>& samples() const { return samples_; }

private:
  std::vector<Sample> samples_;
};

struct PathPair {
  int x1, y1, k1; // flow index k, t = k*dt
  int x2, y2, k2;
};

struct PathCheckEntry {
  PathPair pair;
  double lhs, rhs, margin; // margin = rhs - lhs
  bool ok;
};

struct PathCheckReport {
  std::vector<PathCheckEntry> entries;
  double slack;
  bool ok;
};

/// Integrated classical Harnack inequality (gamma = 1, a = 2 setting):
/// e^{t2} log f(x2,t2) - e^{t1} log f(x1,t1)
///   <= (1/2) int e^{tau} (|ldot|^2 + 2S + n/2 + 2n/tau) dt, trapezoid rule.
PathCheckReport classical_harnack_check(const FlowTrajectory& traj, const HeatSolution& sol,
                                        const std::vector<PathPair>& pairs,
                                        double slack_kappa = 10.0);

/// Residual between eval_E_a and the closed form the flow variant admits
/// (List / Mueller); WrongVariant otherwise.
ScalarField example_identity_probe(const FlowTrajectory& traj, int tau_j, const VectorField& X,
                                   double a);

} // namespace torusflow
