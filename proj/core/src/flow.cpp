#include "torusflow/flow.hpp"

#include <cmath>
#include <cstring>

namespace torusflow {

const char* to_string(FlowVariant v) {
  switch (v) {
    case FlowVariant::Static: return "static";
    case FlowVariant::Ricci: return "ricci";
    case FlowVariant::List: return "list";
    case FlowVariant::Mueller: return "mueller";
  }
  return "?";
}

void AlphaSchedule::validate(double horizon) const {
  double prev = value(0.0);
  for (int k = 0; k <= 32; ++k) {
    const double t = horizon * k / 32.0;
    const double a = value(t);
    if (a < 0.0) throw Error("alpha(t) must be nonnegative");
    if (a > prev + 1e-12 * std::abs(prev)) throw Error("alpha(t) must be nonincreasing");
    prev = a;
  }
}

int FlowSpec::steps() const {
  const double k = horizon / dt;
  const int ki = int(std::lround(k));
  if (std::abs(k - ki) > 1e-9 * std::max(1.0, k) || ki < 1)
    throw Error("flow horizon T must be an integral multiple of dt");
  return ki;
}

void FlowSpec::validate() const {
  if (horizon <= 0.0) throw Error("flow horizon T must be positive");
  if (dt <= 0.0) throw Error("flow dt must be positive");
  steps();
  if (variant == FlowVariant::Mueller) {
    if (target_components < 1) throw Error("Mueller flow needs m >= 1 target components");
    alpha.validate(horizon);
  }
}

namespace {

void check_aux(const MetricState& state, const FlowSpec& spec) {
  if (spec.needs_psi() && !state.psi) throw MissingAuxiliaryField("psi");
  if (spec.needs_phi() && int(state.phi.size()) != spec.target_components)
    throw MissingAuxiliaryField("phi[" + std::to_string(spec.target_components) + "]");
  if (!spec.needs_psi() && state.psi) throw Error("state carries psi unused by this variant");
  if (!spec.needs_phi() && !state.phi.empty()) throw Error("state carries phi unused by this variant");
}

// RHS of the coupled system at a stage state.
struct StageRhs {
  SymTensorField dg;
  std::optional<ScalarField> dpsi;
  std::vector<ScalarField> dphi;
};

std::pair<SymTensorField, ScalarField> s_tensor_impl(const MetricAlgebra& alg,
                                                     const MetricState& state,
                                                     const FlowSpec& spec) {
  const PeriodicGrid& grid = alg.grid();
  const int dim = grid.dim();
  if (spec.variant == FlowVariant::Static)
    return {SymTensorField(grid, IndexKind::Lower), ScalarField(grid)};

  SymTensorField S = alg.curvature().ricci;
  if (spec.variant == FlowVariant::List) {
    VectorField d = alg.gradient(*state.psi);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        ScalarField& s = S.comp(i, j);
        const ScalarField& di = d.comp(i);
        const ScalarField& dj = d.comp(j);
        for (std::size_t p = 0; p < grid.size(); ++p) s[p] -= 2.0 * di[p] * dj[p];
      }
  } else if (spec.variant == FlowVariant::Mueller) {
    const double a = spec.alpha.value(state.t);
    for (const ScalarField& phi : state.phi) {
      VectorField d = alg.gradient(phi);
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          ScalarField& s = S.comp(i, j);
          const ScalarField& di = d.comp(i);
          const ScalarField& dj = d.comp(j);
          for (std::size_t p = 0; p < grid.size(); ++p) s[p] -= a * di[p] * dj[p];
        }
    }
  }
  ScalarField trace = alg.trace(S);
  return {std::move(S), std::move(trace)};
}

StageRhs flow_rhs(const MetricState& state, const FlowSpec& spec) {
  MetricAlgebra alg(state.g);
  auto [S, trace] = s_tensor_impl(alg, state, spec);
  StageRhs r{SymTensorField(state.g.grid(), IndexKind::Lower), std::nullopt, {}};
  for (int k = 0; k < S.components(); ++k) {
    for (std::size_t p = 0; p < S.flat(k).size(); ++p) r.dg.flat(k)[p] = -2.0 * S.flat(k)[p];
  }
  if (state.psi) r.dpsi = alg.laplacian(*state.psi);
  for (const ScalarField& phi : state.phi) r.dphi.push_back(alg.laplacian(phi));
  return r;
}

MetricState axpy(const MetricState& y, const StageRhs& k, double c, double t_new) {
  MetricState out{t_new, y.g, y.psi, y.phi};
  for (int m = 0; m < out.g.components(); ++m)
    for (std::size_t p = 0; p < out.g.flat(m).size(); ++p) out.g.flat(m)[p] += c * k.dg.flat(m)[p];
  if (out.psi)
    for (std::size_t p = 0; p < out.psi->size(); ++p) (*out.psi)[p] += c * (*k.dpsi)[p];
  for (std::size_t m = 0; m < out.phi.size(); ++m)
    for (std::size_t p = 0; p < out.phi[m].size(); ++p) out.phi[m][p] += c * k.dphi[m][p];
  return out;
}

void combine_rk4(MetricState& y, const StageRhs& k1, const StageRhs& k2, const StageRhs& k3,
                 const StageRhs& k4, double dt) {
  const double w = dt / 6.0;
  for (int m = 0; m < y.g.components(); ++m)
    for (std::size_t p = 0; p < y.g.flat(m).size(); ++p)
      y.g.flat(m)[p] += w * (k1.dg.flat(m)[p] + 2.0 * k2.dg.flat(m)[p] + 2.0 * k3.dg.flat(m)[p] +
                             k4.dg.flat(m)[p]);
  if (y.psi)
    for (std::size_t p = 0; p < y.psi->size(); ++p)
      (*y.psi)[p] += w * ((*k1.dpsi)[p] + 2.0 * (*k2.dpsi)[p] + 2.0 * (*k3.dpsi)[p] + (*k4.dpsi)[p]);
  for (std::size_t m = 0; m < y.phi.size(); ++m)
    for (std::size_t p = 0; p < y.phi[m].size(); ++p)
      y.phi[m][p] += w * (k1.dphi[m][p] + 2.0 * k2.dphi[m][p] + 2.0 * k3.dphi[m][p] + k4.dphi[m][p]);
}

bool same_values(const ScalarField& a, const ScalarField& b) {
  return std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(double)) == 0;
}

std::shared_ptr<const ScalarField> dedup(std::shared_ptr<const ScalarField> prev,
                                         ScalarField cur) {
  if (prev && same_values(*prev, cur)) return prev;
  return std::make_shared<const ScalarField>(std::move(cur));
}

std::shared_ptr<const SymTensorField> dedup(std::shared_ptr<const SymTensorField> prev,
                                            SymTensorField cur) {
  if (prev) {
    bool eq = true;
    for (int k = 0; k < cur.components() && eq; ++k) eq = same_values(prev->flat(k), cur.flat(k));
    if (eq) return prev;
  }
  return std::make_shared<const SymTensorField>(std::move(cur));
}

} // namespace

std::pair<SymTensorField, ScalarField> s_tensor(const MetricState& state, const FlowSpec& spec) {
  check_aux(state, spec);
  MetricAlgebra alg(state.g);
  return s_tensor_impl(alg, state, spec);
}

MetricState step_flow(const MetricState& state, const FlowSpec& spec) {
  check_aux(state, spec);
  const double dt = spec.dt;
  if (spec.variant == FlowVariant::Static) {
    MetricState out = state;
    out.t = state.t + dt;
    return out;
  }
  StageRhs k1 = flow_rhs(state, spec);
  MetricState y2 = axpy(state, k1, dt / 2.0, state.t + dt / 2.0);
  StageRhs k2 = flow_rhs(y2, spec);
  MetricState y3 = axpy(state, k2, dt / 2.0, state.t + dt / 2.0);
  StageRhs k3 = flow_rhs(y3, spec);
  MetricState y4 = axpy(state, k3, dt, state.t + dt);
  StageRhs k4 = flow_rhs(y4, spec);

  MetricState out = state;
  out.t = state.t + dt;
  combine_rk4(out, k1, k2, k3, k4, dt);

  if (!out.g.all_finite()) throw StabilityFailure(out.t, "metric became non-finite");
  if (out.psi && !out.psi->all_finite()) throw StabilityFailure(out.t, "psi became non-finite");
  for (const ScalarField& phi : out.phi)
    if (!phi.all_finite()) throw StabilityFailure(out.t, "phi became non-finite");
  return out;
}

DerivedGeometry FlowTrajectory::derived(int k) const {
  const FlowSnapshot& sn = snaps_[k];
  MetricState state{sn.t, *sn.g, std::nullopt, {}};
  if (sn.psi) state.psi = *sn.psi;
  for (const auto& p : sn.phi) state.phi.push_back(*p);
  MetricAlgebra alg(*sn.g);
  auto [S, trace] = s_tensor_impl(alg, state, spec_);
  (void)trace; // stored at run time
  return DerivedGeometry{std::move(alg), std::move(S)};
}

FlowTrajectory run_flow(const MetricState& initial, const FlowSpec& spec) {
  spec.validate();
  check_aux(initial, spec);
  if (initial.t != 0.0) throw Error("run_flow expects initial state at t = 0");
  const PeriodicGrid& grid = initial.g.grid();
  const int K = spec.steps();
  const double hmin2 = [&] {
    double h = grid.h(0);
    for (int ax = 1; ax < grid.dim(); ++ax) h = std::min(h, grid.h(ax));
    return h * h;
  }();

  FlowTrajectory traj(grid, spec);
  MetricState state = initial;
  for (int k = 0; k <= K; ++k) {
    std::optional<MetricAlgebra> alg_opt;
    try {
      alg_opt.emplace(state.g);
    } catch (const NonSPDMetric& e) {
      if (k == 0) throw; // bad initial data, not a flow failure
      throw StabilityFailure(state.t, std::string("metric lost positivity: ") + e.what());
    }
    MetricAlgebra& alg = *alg_opt;
    if (spec.variant != FlowVariant::Static) {
      const double bound = 0.2 * hmin2 / alg.max_inverse_eigenvalue();
      if (spec.dt > bound)
        throw StabilityFailure(state.t, "dt " + std::to_string(spec.dt) +
                                            " exceeds stability bound " + std::to_string(bound));
    }
    auto [S, trace] = s_tensor_impl(alg, state, spec);
    (void)S;

    FlowSnapshot sn;
    sn.t = state.t;
    sn.g = dedup(k ? traj.snapshot(k - 1).g : nullptr, state.g);
    if (state.psi) sn.psi = dedup(k ? traj.snapshot(k - 1).psi : nullptr, *state.psi);
    for (std::size_t m = 0; m < state.phi.size(); ++m)
      sn.phi.push_back(dedup(k ? traj.snapshot(k - 1).phi[m] : nullptr, state.phi[m]));
    sn.s_trace = dedup(k ? traj.snapshot(k - 1).s_trace : nullptr, std::move(trace));
    traj.append(std::move(sn));

    if (k < K) {
      try {
        state = step_flow(state, spec);
      } catch (const StabilityFailure&) {
        throw;
      } catch (const NonSPDMetric& e) {
        throw StabilityFailure(state.t, std::string("metric lost positivity during step: ") + e.what());
      }
    }
  }
  return traj;
}

MonitorReport s_lower_bound_monitor(const FlowTrajectory& traj, double tol) {
  MonitorReport rep;
  rep.tol = tol;
  rep.ok = true;
  const double n = traj.grid().dim();
  for (int k = 1; k <= traj.steps(); ++k) {
    const FlowSnapshot& sn = traj.snapshot(k);
    ScalarField q = *sn.s_trace + n / (2.0 * sn.t);
    ArgExtremum m = grid_min(q);
    rep.entries.push_back({sn.t, m.value, m.ix, m.iy});
    if (m.value < -tol) rep.ok = false;
  }
  return rep;
}

} // namespace torusflow
