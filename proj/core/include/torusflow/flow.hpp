#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "torusflow/geometry.hpp"

namespace torusflow {

enum class FlowVariant { Static, Ricci, List, Mueller };

const char* to_string(FlowVariant v);

/// Coupling schedule alpha(t) for Mueller's flow: alpha >= 0 and nonincreasing.
struct AlphaSchedule {
  enum class Kind { Constant, Decay } kind = Kind::Decay; // Decay: alpha0 / (1 + t)
  double alpha0 = 2.0;

  double value(double t) const { return kind == Kind::Constant ? alpha0 : alpha0 / (1.0 + t); }
  double derivative(double t) const {
    return kind == Kind::Constant ? 0.0 : -alpha0 / ((1.0 + t) * (1.0 + t));
  }
  /// Sampled admissibility check on [0, horizon].
  void validate(double horizon) const;
};

struct FlowSpec {
  FlowVariant variant = FlowVariant::Static;
  int target_components = 1; // m, Mueller only
  AlphaSchedule alpha;
  double horizon = 0.0; // T
  double dt = 0.0;

  bool needs_psi() const { return variant == FlowVariant::List; }
  bool needs_phi() const { return variant == FlowVariant::Mueller; }
  int steps() const; // K with K*dt == horizon (validated integral)
  void validate() const;
};

/// Metric plus the variant's auxiliary fields at one time.
struct MetricState {
  double t = 0.0;
  SymTensorField g;
  std::optional<ScalarField> psi;  // List
  std::vector<ScalarField> phi;    // Mueller, m components
};

/// S_ij of the variant and its trace S = g^{ij} S_ij.
std::pair<SymTensorField, ScalarField> s_tensor(const MetricState& state, const FlowSpec& spec);

/// One explicit RK4 step of the coupled system (g, psi, phi).
MetricState step_flow(const MetricState& state, const FlowSpec& spec);

/// Stored snapshot. Fields are shared immutably; consecutive bitwise-identical
/// fields (static runs, exact fixed points) share storage.
struct FlowSnapshot {
  double t = 0.0;
  std::shared_ptr<const SymTensorField> g;
  std::shared_ptr<const ScalarField> psi;
  std::vector<std::shared_ptr<const ScalarField>> phi;
  std::shared_ptr<const ScalarField> s_trace;
};

/// Curvature and S_ij of one snapshot, rebuilt on demand (storage keeps only
/// the state and the trace S; desk-scale trajectories stay within memory).
struct DerivedGeometry {
  MetricAlgebra alg; // curvature() available lazily
  SymTensorField s_lower;
};

class FlowTrajectory {
public:
  FlowTrajectory(PeriodicGrid grid, FlowSpec spec) : grid_(std::move(grid)), spec_(spec) {}

  const PeriodicGrid& grid() const { return grid_; }
  const FlowSpec& spec() const { return spec_; }
  int steps() const { return int(snaps_.size()) - 1; } // K
  double dt() const { return spec_.dt; }
  double horizon() const { return spec_.horizon; }
  double time(int k) const { return snaps_[k].t; }

  const FlowSnapshot& snapshot(int k) const { return snaps_[k]; }
  /// Flow index holding the state at tau_j = j*dt (tau = T - t).
  int flow_index_of_tau(int tau_j) const { return steps() - tau_j; }
  const FlowSnapshot& at_tau(int tau_j) const { return snaps_[flow_index_of_tau(tau_j)]; }

  DerivedGeometry derived(int k) const;
  DerivedGeometry derived_at_tau(int tau_j) const { return derived(flow_index_of_tau(tau_j)); }

  void append(FlowSnapshot s) { snaps_.push_back(std::move(s)); }

private:
  PeriodicGrid grid_;
  FlowSpec spec_;
  std::vector<FlowSnapshot> snaps_;
};

/// Integrate the flow from t=0 to t=T, storing every step.
FlowTrajectory run_flow(const MetricState& initial, const FlowSpec& spec);

/// Per-time minimum of S + n/(2t), the maximum-principle lower-bound monitor.
struct MonitorEntry {
  double t;
  double min_value; // min over grid of S + n/(2t)
  int argmin_x, argmin_y;
};
struct MonitorReport {
  std::vector<MonitorEntry> entries;
  double tol;
  bool ok; // every entry >= -tol
};
MonitorReport s_lower_bound_monitor(const FlowTrajectory& traj, double tol);

} // namespace torusflow
