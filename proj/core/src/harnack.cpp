#include "torusflow/harnack.hpp"

#include <algorithm>
#include <cmath>

namespace torusflow {

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::A1: return "A1";
    case TheoremId::A2: return "A2";
    case TheoremId::Aa: return "Aa";
    case TheoremId::B: return "B";
    case TheoremId::Bvar: return "Bvar";
    case TheoremId::C: return "C";
    case TheoremId::E: return "E";
  }
  return "?";
}

namespace {

// Everything E-shaped needs at one interior tau slice.
struct ETermContext {
  DerivedGeometry der;
  ScalarField s_trace;
  ScalarField ds_dtau;  // centered over the stored trajectory
  VectorField div_term; // D_l = 2 (div S)_l - (grad S)_l, lower
  double div_scale;     // magnitude scale of the unsubtracted divergence pieces
};

ETermContext make_context(const FlowTrajectory& traj, int tau_j) {
  const int K = traj.steps();
  if (tau_j < 1 || tau_j > K - 1) throw BoundaryTime(tau_j);
  DerivedGeometry der = traj.derived_at_tau(tau_j);
  ScalarField s_trace = *traj.at_tau(tau_j).s_trace;
  const ScalarField& sp = *traj.at_tau(tau_j + 1).s_trace;
  const ScalarField& sm = *traj.at_tau(tau_j - 1).s_trace;
  ScalarField ds(traj.grid());
  const double inv2dt = 1.0 / (2.0 * traj.dt());
  for (std::size_t p = 0; p < ds.size(); ++p) ds[p] = (sp[p] - sm[p]) * inv2dt;

  VectorField dv = der.alg.div2(der.s_lower);
  VectorField gs = der.alg.gradient(s_trace);
  VectorField D(traj.grid(), IndexKind::Lower);
  double scale = 0.0;
  for (int l = 0; l < traj.grid().dim(); ++l) {
    for (std::size_t p = 0; p < D.comp(l).size(); ++p)
      D.comp(l)[p] = 2.0 * dv.comp(l)[p] - gs.comp(l)[p];
    scale = std::max(scale, 2.0 * linf_norm(dv.comp(l)) + linf_norm(gs.comp(l)));
  }
  return ETermContext{std::move(der), std::move(s_trace), std::move(ds), std::move(D), scale};
}

VectorField as_raised(const MetricAlgebra& alg, const VectorField& X) {
  if (X.kind() == IndexKind::Raised) return X;
  return alg.raise(X);
}

ScalarField e_a_impl(const ETermContext& ctx, const VectorField& Xr, double a) {
  const MetricAlgebra& alg = ctx.der.alg;
  const PeriodicGrid& grid = alg.grid();
  const int dim = grid.dim();
  const CurvatureBundle& curv = alg.curvature();

  ScalarField out = a * ctx.ds_dtau + a * alg.laplacian(ctx.s_trace) +
                    2.0 * alg.tensor_norm2(ctx.der.s_lower);
  for (int l = 0; l < dim; ++l) out -= 2.0 * ctx.div_term.comp(l) * Xr.comp(l);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out -= 2.0 * (curv.ricci.comp(i, j) - ctx.der.s_lower.comp(i, j)) * Xr.comp(i) * Xr.comp(j);
  return out;
}

ScalarField e_general_impl(const ETermContext& ctx, const VectorField& Xr, double a, double c,
                           double alpha, double beta) {
  if (alpha == beta) throw DegenerateParams("alpha == beta in E_(a,c,alpha,beta)");
  const MetricAlgebra& alg = ctx.der.alg;
  const int dim = alg.grid().dim();
  const CurvatureBundle& curv = alg.curvature();

  ScalarField out = a * ctx.ds_dtau - (a + alpha * c) * alg.laplacian(ctx.s_trace) +
                    (alpha * alpha / (2.0 * (alpha - beta))) * alg.tensor_norm2(ctx.der.s_lower);
  for (int l = 0; l < dim; ++l) out -= alpha * ctx.div_term.comp(l) * Xr.comp(l);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const ScalarField& R = curv.ricci.comp(i, j);
      const ScalarField& S = ctx.der.s_lower.comp(i, j);
      ScalarField coef = alpha * R - beta * (R + S);
      out -= 2.0 * coef * Xr.comp(i) * Xr.comp(j);
    }
  return out;
}

// eigen pairs of a symmetric 2x2 [[a,b],[b,c]]
struct Eig2 {
  double l1, l2;   // l1 <= l2
  double v1x, v1y; // unit eigenvector of l1
  double v2x, v2y;
};

Eig2 sym_eig2(double a, double b, double c) {
  const double tr = a + c;
  const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  Eig2 e;
  e.l1 = 0.5 * (tr - disc);
  e.l2 = 0.5 * (tr + disc);
  if (b == 0.0) {
    if (a <= c) {
      e.v1x = 1.0; e.v1y = 0.0; e.v2x = 0.0; e.v2y = 1.0;
    } else {
      e.v1x = 0.0; e.v1y = 1.0; e.v2x = 1.0; e.v2y = 0.0;
    }
    return e;
  }
  double x = b, y = e.l1 - a;
  double nm = std::sqrt(x * x + y * y);
  e.v1x = x / nm; e.v1y = y / nm;
  x = b; y = e.l2 - a;
  nm = std::sqrt(x * x + y * y);
  e.v2x = x / nm; e.v2y = y / nm;
  return e;
}

double lambda_min2(double a, double b, double c) {
  const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
  return 0.5 * (a + c - disc);
}

} // namespace

ScalarField eval_E_a(const FlowTrajectory& traj, int tau_j, const VectorField& X, double a) {
  ETermContext ctx = make_context(traj, tau_j);
  return e_a_impl(ctx, as_raised(ctx.der.alg, X), a);
}

ScalarField eval_E_general(const FlowTrajectory& traj, int tau_j, const VectorField& X,
                           const HarnackParams& p) {
  ETermContext ctx = make_context(traj, tau_j);
  return e_general_impl(ctx, as_raised(ctx.der.alg, X), p.a, p.c, p.alpha, p.beta);
}

SupEField sup_E_over_X(const FlowTrajectory& traj, int tau_j, double a, SupETolerances tol) {
  ETermContext ctx = make_context(traj, tau_j);
  const MetricAlgebra& alg = ctx.der.alg;
  const PeriodicGrid& grid = alg.grid();
  const int dim = grid.dim();
  const CurvatureBundle& curv = alg.curvature();

  ScalarField C = a * ctx.ds_dtau + a * alg.laplacian(ctx.s_trace) +
                  2.0 * alg.tensor_norm2(ctx.der.s_lower);
  SupEField out{C, ScalarField(grid, 1.0), true};

  for (int iy = 0; iy < grid.n(1); ++iy)
    for (int ix = 0; ix < grid.n(0); ++ix) {
      const double d0 = ctx.div_term.comp(0)(ix, iy);
      const double d1 = dim == 2 ? ctx.div_term.comp(1)(ix, iy) : 0.0;
      const double m00 = curv.ricci.comp(0, 0)(ix, iy) - ctx.der.s_lower.comp(0, 0)(ix, iy);
      double sup_add = 0.0;
      bool bounded = true;
      auto handle = [&](double lam, double proj) {
        // E restricted to this eigendirection: -2 lam s^2 - 2 proj s
        if (lam < -tol.psd) {
          bounded = false; // genuinely indefinite
          return;
        }
        if (std::abs(proj) <= tol.range && lam <= tol.psd) return; // flat null direction
        if (lam > 0.0) {
          // exact supremum along the direction, also for small positive lam
          // with a genuine linear part (proj^2 scales with lam on the
          // degenerate flows, so this stays finite where it should)
          sup_add += 0.5 * proj * proj / lam;
          return;
        }
        bounded = false;
      };
      if (dim == 1) {
        handle(m00, d0);
      } else {
        const double m01 = curv.ricci.comp(0, 1)(ix, iy) - ctx.der.s_lower.comp(0, 1)(ix, iy);
        const double m11 = curv.ricci.comp(1, 1)(ix, iy) - ctx.der.s_lower.comp(1, 1)(ix, iy);
        const Eig2 e = sym_eig2(m00, m01, m11);
        handle(e.l1, d0 * e.v1x + d1 * e.v1y);
        handle(e.l2, d0 * e.v2x + d1 * e.v2y);
      }
      if (bounded) {
        out.value(ix, iy) += sup_add;
      } else {
        out.bounded(ix, iy) = 0.0;
        out.all_bounded = false;
      }
    }
  return out;
}

namespace {

ScalarField harnack_quantity(const MetricAlgebra& alg, const ScalarField& uv,
                             const ScalarField& s_trace, const HarnackParams& p, double tau) {
  const double n = alg.grid().dim();
  ScalarField out = p.alpha * alg.laplacian(uv) - p.beta * alg.grad_norm2(uv) + p.a * s_trace;
  out += (p.b / tau) * uv;
  out += p.d * n / tau;
  return out;
}

} // namespace

ScalarField eval_H_S(const FlowTrajectory& traj, const HeatSolution& sol, int tau_j,
                     const HarnackParams& p) {
  if (tau_j < 1) throw BoundaryTime(tau_j);
  MetricAlgebra alg(*traj.at_tau(tau_j).g);
  return harnack_quantity(alg, sol.u(tau_j), *traj.at_tau(tau_j).s_trace, p, sol.tau(tau_j));
}

ScalarField eval_P_S(const FlowTrajectory& traj, const HeatSolution& sol, int tau_j,
                     const HarnackParams& p) {
  if (tau_j < 1) throw BoundaryTime(tau_j);
  MetricAlgebra alg(*traj.at_tau(tau_j).g);
  ScalarField v = sol.u(tau_j) - p.w.value(sol.tau(tau_j));
  return harnack_quantity(alg, v, *traj.at_tau(tau_j).s_trace, p, sol.tau(tau_j));
}

int HarnackReport::exit_code() const {
  switch (verdict) {
    case Verdict::Pass: return 0;
    case Verdict::ConclusionViolated: return 2;
    case Verdict::HypothesisFailed: return 4;
  }
  return 0;
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw WrongHeatParams(msg);
}

void validate_heat_params(TheoremId id, const HeatSolution& sol, double horizon) {
  const HeatParams& hp = sol.params();
  const bool gamma_const = hp.gamma.is_constant();
  switch (id) {
    case TheoremId::A1:
      require(gamma_const && hp.gamma(0.0) == 1.0 && hp.a == 2.0, "A1 needs gamma = 1, a = 2");
      break;
    case TheoremId::A2:
      require(gamma_const && hp.gamma(0.0) == 1.0 && hp.a == 1.0, "A2 needs gamma = 1, a = 1");
      break;
    case TheoremId::Aa:
      require(gamma_const && hp.gamma(0.0) == 1.0 && hp.a == 1.0, "Aa needs gamma = 1, a = 1");
      break;
    case TheoremId::B:
      require(hp.a == 0.0 && gamma_const && hp.gamma(0.0) > 0.0,
              "B needs a = 0 and constant gamma > 0");
      require(hp.profile.sub_unity(), "B needs a terminal profile strictly inside (0,1)");
      break;
    case TheoremId::Bvar:
      require(hp.a == 0.0 && hp.gamma.min_on(horizon) > 0.0, "Bvar needs a = 0, gamma(tau) > 0");
      require(hp.profile.sub_unity(), "Bvar needs a terminal profile strictly inside (0,1)");
      break;
    case TheoremId::C:
      require(hp.a == 0.0 && gamma_const && hp.gamma(0.0) == 0.0, "C needs gamma = 0, a = 0");
      require(hp.profile.sub_unity(), "C needs a terminal profile strictly inside (0,1)");
      break;
    case TheoremId::E:
      require(gamma_const && hp.gamma(0.0) == 0.0 && hp.a == 1.0, "E needs gamma = 0, a = 1");
      break;
  }
}

std::vector<int> sample_indices(int lo, int hi, int count) {
  std::vector<int> out;
  if (hi < lo) return out;
  count = std::max(2, count);
  for (int s = 0; s < count; ++s) {
    int j = lo + int(std::llround(double(s) * (hi - lo) / double(count - 1)));
    if (out.empty() || out.back() != j) out.push_back(j);
  }
  return out;
}

} // namespace

HarnackReport check_theorem(TheoremId id, const FlowTrajectory& traj, const HeatSolution& sol,
                            const TheoremCheckOptions& opt) {
  if (sol.grid() != traj.grid() || sol.steps() != traj.steps() || sol.dt() != traj.dt())
    throw Error("heat solution and trajectory use different grids");
  validate_heat_params(id, sol, traj.horizon());

  const PeriodicGrid& grid = traj.grid();
  const double n = grid.dim();
  const int K = traj.steps();
  const int j_lo = opt.tau_min_steps;
  const int j_hi = id == TheoremId::Aa ? K / 2 : K;
  if (j_hi - j_lo < 2) throw Error("run too short for the checked tau window");
  const double hmax = std::max(grid.h(0), grid.dim() == 2 ? grid.h(1) : 0.0);
  const double disc = hmax * hmax + traj.dt();

  HarnackReport rep;
  rep.id = id;

  // ---- conclusion sweep over every checked tau ----
  const SymTensorField* cached = nullptr;
  std::optional<MetricAlgebra> alg;
  double q_scale = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const FlowSnapshot& sn = traj.at_tau(j);
    if (cached != sn.g.get()) {
      alg.emplace(*sn.g);
      cached = sn.g.get();
    }
    const double tau = sol.tau(j);
    ScalarField u = sol.u(j);
    ScalarField lap = alg->laplacian(u);
    ScalarField gn = alg->grad_norm2(u);
    const ScalarField& S = *sn.s_trace;

    ScalarField q(grid);
    switch (id) {
      case TheoremId::A1:
        for (std::size_t p = 0; p < q.size(); ++p)
          q[p] = -2.0 * lap[p] + gn[p] - 2.0 * S[p] + 2.0 * n / tau + n / 2.0;
        break;
      case TheoremId::A2:
        for (std::size_t p = 0; p < q.size(); ++p)
          q[p] = -2.0 * lap[p] + gn[p] - S[p] + 2.0 * n / tau + n / 4.0;
        break;
      case TheoremId::Aa:
        for (std::size_t p = 0; p < q.size(); ++p)
          q[p] = -2.0 * lap[p] + gn[p] - S[p] + 3.0 * n / tau + n / 4.0;
        break;
      case TheoremId::B:
      case TheoremId::Bvar:
      case TheoremId::C:
        for (std::size_t p = 0; p < q.size(); ++p) q[p] = u[p] / tau - gn[p];
        break;
      case TheoremId::E:
        for (std::size_t p = 0; p < q.size(); ++p) q[p] = -2.0 * lap[p] + gn[p] - S[p];
        break;
    }
    ArgExtremum mn = grid_min(q);
    rep.margins.push_back({tau, mn.value, mn.ix, mn.iy});
    q_scale = std::max(q_scale, linf_norm(q));
  }
  rep.q_scale = q_scale;
  rep.slack = opt.slack_kappa * disc * q_scale;
  rep.slack_formula = "slack = " + std::to_string(opt.slack_kappa) + " * (h^2 + dt) * Q_scale = " +
                      std::to_string(opt.slack_kappa) + " * " + std::to_string(disc) + " * " +
                      std::to_string(q_scale);

  if (id == TheoremId::E) {
    // The maximum principle drives min_M(2 Lap log f + |grad log f|^2 - S)
    // monotonically along tau (the parabolic direction of the solve); the
    // per-step dips must stay within slack.
    double worst_dip = 0.0;
    for (std::size_t m = 1; m < rep.margins.size(); ++m)
      worst_dip = std::min(worst_dip, rep.margins[m].margin - rep.margins[m - 1].margin);
    rep.worst_margin = worst_dip;
    rep.conclusion_ok = worst_dip >= -rep.slack;
  } else {
    double worst = rep.margins.front().margin;
    for (const MarginEntry& m : rep.margins) worst = std::min(worst, m.margin);
    rep.worst_margin = worst;
    rep.conclusion_ok = worst >= -rep.slack;
  }

  // ---- hypothesis checks on sampled tau slices ----
  const std::vector<int> samples =
      sample_indices(std::max(j_lo, 1), std::min(j_hi, K - 1), opt.hypothesis_samples);

  auto sup_hypothesis = [&](double a_sup, bool add_2s2_over_n, const char* label) {
    double worst = 0.0, tol = 0.0;
    bool all_bounded = true;
    for (int j : samples) {
      ETermContext ctx = make_context(traj, j);
      double m_scale = 0.0;
      for (int c = 0; c < ctx.der.s_lower.components(); ++c)
        m_scale = std::max(m_scale, linf_norm(ctx.der.alg.curvature().ricci.flat(c)) +
                                        linf_norm(ctx.der.s_lower.flat(c)));
      SupETolerances st{opt.slack_kappa * disc * m_scale, opt.slack_kappa * disc * ctx.div_scale};
      SupEField sup = sup_E_over_X(traj, j, a_sup, st);
      ScalarField field = sup.value;
      // E measures a near-cancellation of its constituent terms; the slack must
      // scale with the size of what cancels, not with the residual itself
      double scale = std::abs(a_sup) * linf_norm(ctx.ds_dtau) +
                     std::abs(a_sup) * linf_norm(ctx.der.alg.laplacian(ctx.s_trace)) +
                     2.0 * linf_norm(ctx.der.alg.tensor_norm2(ctx.der.s_lower));
      if (add_2s2_over_n) {
        const ScalarField& S = ctx.s_trace;
        for (std::size_t p = 0; p < field.size(); ++p) field[p] += 2.0 * S[p] * S[p] / n;
        scale += linf_norm(ctx.s_trace) * linf_norm(ctx.s_trace) * 2.0 / n;
      }
      all_bounded = all_bounded && sup.all_bounded;
      worst = std::max(worst, grid_max(field).value);
      tol = std::max(tol, opt.slack_kappa * disc * scale);
    }
    HypothesisResult h{label, worst, tol, all_bounded && worst <= tol};
    if (!all_bounded) h.description += " (sup over X unbounded at some point)";
    return h;
  };

  auto eig_hypothesis = [&](double add_g_coeff, const char* label) {
    // lambda_min(R + S + add_g_coeff * g) >= -tol pointwise
    double worst = 1e300, tol = 0.0;
    for (int j : samples) {
      DerivedGeometry der = traj.derived_at_tau(j);
      const CurvatureBundle& curv = der.alg.curvature();
      const SymTensorField& g = der.alg.metric();
      double scale = 0.0;
      for (int c = 0; c < g.components(); ++c)
        scale = std::max(scale, linf_norm(curv.ricci.flat(c)) + linf_norm(der.s_lower.flat(c)) +
                                    std::abs(add_g_coeff) * linf_norm(g.flat(c)));
      for (int iy = 0; iy < grid.n(1); ++iy)
        for (int ix = 0; ix < grid.n(0); ++ix) {
          const double a00 = curv.ricci.comp(0, 0)(ix, iy) + der.s_lower.comp(0, 0)(ix, iy) +
                             add_g_coeff * g.comp(0, 0)(ix, iy);
          double lm;
          if (grid.dim() == 1) {
            lm = a00;
          } else {
            const double a01 = curv.ricci.comp(0, 1)(ix, iy) + der.s_lower.comp(0, 1)(ix, iy) +
                               add_g_coeff * g.comp(0, 1)(ix, iy);
            const double a11 = curv.ricci.comp(1, 1)(ix, iy) + der.s_lower.comp(1, 1)(ix, iy) +
                               add_g_coeff * g.comp(1, 1)(ix, iy);
            lm = lambda_min2(a00, a01, a11);
          }
          worst = std::min(worst, lm);
        }
      tol = std::max(tol, opt.slack_kappa * disc * scale);
    }
    return HypothesisResult{label, worst, tol, worst >= -tol};
  };

  auto sub_unity_hypothesis = [&]() {
    return HypothesisResult{"0 < f < 1", 1.0 - sol.max_f(), 0.0,
                            sol.max_f() < 1.0 && sol.min_f() > 0.0};
  };

  switch (id) {
    case TheoremId::A1:
      rep.hypotheses.push_back(sup_hypothesis(2.0, true, "sup_X E_2 + 2S^2/n <= 0"));
      break;
    case TheoremId::A2: {
      rep.hypotheses.push_back(sup_hypothesis(1.0, false, "sup_X E_1 <= 0"));
      double worst_s = 1e300, tol_s = 0.0;
      for (int j : samples) {
        worst_s = std::min(worst_s, grid_min(*traj.at_tau(j).s_trace).value);
        tol_s = std::max(tol_s, opt.slack_kappa * disc * linf_norm(*traj.at_tau(j).s_trace));
      }
      rep.hypotheses.push_back({"S >= 0", worst_s, tol_s, worst_s >= -tol_s});
      break;
    }
    case TheoremId::Aa: {
      rep.hypotheses.push_back(sup_hypothesis(1.0, false, "sup_X E_1 <= 0 on [T/2, T)"));
      double worst_s = 1e300, tol_s = 0.0;
      for (int k = (K + 1) / 2; k < K; ++k) {
        const FlowSnapshot& sn = traj.snapshot(k);
        ScalarField q = *sn.s_trace + n / (2.0 * sn.t);
        worst_s = std::min(worst_s, grid_min(q).value);
        tol_s = std::max(tol_s, opt.slack_kappa * disc * linf_norm(q));
      }
      rep.hypotheses.push_back({"S >= -n/(2t) on [T/2, T)", worst_s, tol_s, worst_s >= -tol_s});
      break;
    }
    case TheoremId::B:
      rep.hypotheses.push_back(
          eig_hypothesis(0.5 * sol.params().gamma(0.0), "R_ij + S_ij >= -(gamma/2) g_ij"));
      rep.hypotheses.push_back(sub_unity_hypothesis());
      break;
    case TheoremId::Bvar: {
      const double A = opt.bvar_A;
      const double gmin = sol.params().gamma.min_on(traj.horizon());
      rep.hypotheses.push_back(eig_hypothesis(A, "R_ij + S_ij >= -A g_ij"));
      rep.hypotheses.push_back({"0 <= A <= gamma(tau)/2", std::min(A, 0.5 * gmin - A), 0.0,
                                A >= 0.0 && A <= 0.5 * gmin});
      rep.hypotheses.push_back(sub_unity_hypothesis());
      break;
    }
    case TheoremId::C:
      rep.hypotheses.push_back(eig_hypothesis(0.0, "R_ij + S_ij >= 0"));
      rep.hypotheses.push_back(sub_unity_hypothesis());
      break;
    case TheoremId::E:
      rep.hypotheses.push_back(sup_hypothesis(1.0, false, "sup_X E_1 <= 0"));
      break;
  }

  rep.hypothesis_ok = true;
  for (const HypothesisResult& h : rep.hypotheses) rep.hypothesis_ok = rep.hypothesis_ok && h.ok;

  rep.verdict = !rep.hypothesis_ok   ? HarnackReport::Verdict::HypothesisFailed
                : !rep.conclusion_ok ? HarnackReport::Verdict::ConclusionViolated
                                     : HarnackReport::Verdict::Pass;
  return rep;
}

SpaceTimePath SpaceTimePath::straight(const FlowTrajectory& traj, int x1, int y1, int k1, int x2,
                                      int y2, int k2) {
  if (k1 >= k2) throw PathInfeasible("t1 >= t2");
  const PeriodicGrid& grid = traj.grid();
  const int steps = k2 - k1;
  // shortest wrapped displacement per axis
  auto disp = [&](int a, int b, int axis) {
    const int N = grid.n(axis);
    int d = (b - a) % N;
    if (d > N / 2) d -= N;
    if (d < -N / 2) d += N;
    return d;
  };
  const int dx = disp(x1, x2, 0);
  const int dy = grid.dim() == 2 ? disp(y1, y2, 1) : 0;
  if (std::abs(dx) > steps || std::abs(dy) > steps)
    throw PathInfeasible("path would move more than one grid cell per time step");

  SpaceTimePath path;
  const double vx = dx * grid.h(0) / (steps * traj.dt());
  const double vy = grid.dim() == 2 ? dy * grid.h(1) / (steps * traj.dt()) : 0.0;
  for (int k = k1; k <= k2; ++k) {
    const double lam = double(k - k1) / steps;
    const int ix = grid.wrap(int(std::lround(x1 + lam * dx)), 0);
    const int iy = grid.dim() == 2 ? grid.wrap(int(std::lround(y1 + lam * dy)), 1) : 0;
    const SymTensorField& g = *traj.snapshot(k).g;
    double sp2 = g.comp(0, 0)(ix, iy) * vx * vx;
    if (grid.dim() == 2)
      sp2 += 2.0 * g.comp(0, 1)(ix, iy) * vx * vy + g.comp(1, 1)(ix, iy) * vy * vy;
    path.samples_.push_back({k, ix, iy, sp2});
  }
  return path;
}

PathCheckReport classical_harnack_check(const FlowTrajectory& traj, const HeatSolution& sol,
                                        const std::vector<PathPair>& pairs, double slack_kappa) {
  const HeatParams& hp = sol.params();
  if (!(hp.gamma.is_constant() && hp.gamma(0.0) == 1.0 && hp.a == 2.0))
    throw WrongHeatParams("classical Harnack integration needs the gamma = 1, a = 2 run");

  const PeriodicGrid& grid = traj.grid();
  const double n = grid.dim();
  const int K = traj.steps();
  const double dt = traj.dt();
  const double T = traj.horizon();
  const double hmax = std::max(grid.h(0), grid.dim() == 2 ? grid.h(1) : 0.0);
  const double disc = hmax * hmax + dt;

  PathCheckReport rep;
  rep.ok = true;
  rep.slack = 0.0;
  for (const PathPair& pr : pairs) {
    if (pr.k1 < 1 || pr.k2 > K - 1) throw PathInfeasible("endpoints must satisfy 0 < t1 < t2 < T");
    SpaceTimePath path = SpaceTimePath::straight(traj, pr.x1, pr.y1, pr.k1, pr.x2, pr.y2, pr.k2);

    auto logf = [&](int k, int ix, int iy) {
      const double v = sol.f(K - k)(ix, iy);
      if (!(v > 0.0)) throw PositivityLoss(T - k * dt, ix, iy, v);
      return std::log(v);
    };
    const double t1 = pr.k1 * dt, t2 = pr.k2 * dt;
    const double lhs =
        std::exp(t2) * logf(pr.k2, pr.x2, pr.y2) - std::exp(t1) * logf(pr.k1, pr.x1, pr.y1);

    double integral = 0.0;
    const auto& ss = path.samples();
    for (std::size_t m = 0; m < ss.size(); ++m) {
      const auto& s = ss[m];
      const double tau = T - s.k * dt;
      const double S = (*traj.snapshot(s.k).s_trace)(s.ix, s.iy);
      const double integrand = std::exp(tau) * (s.speed2 + 2.0 * S + n / 2.0 + 2.0 * n / tau);
      const double w = (m == 0 || m + 1 == ss.size()) ? 0.5 : 1.0;
      integral += w * integrand * dt;
    }
    const double rhs = 0.5 * integral;
    const double slack = slack_kappa * disc * (std::abs(lhs) + std::abs(rhs));
    rep.slack = std::max(rep.slack, slack);
    const bool ok = rhs - lhs >= -slack;
    rep.entries.push_back({pr, lhs, rhs, rhs - lhs, ok});
    rep.ok = rep.ok && ok;
  }
  return rep;
}

ScalarField example_identity_probe(const FlowTrajectory& traj, int tau_j, const VectorField& X,
                                   double a) {
  const FlowVariant variant = traj.spec().variant;
  if (variant != FlowVariant::List && variant != FlowVariant::Mueller)
    throw WrongVariant("example_identity_probe needs a List or Mueller trajectory");

  ETermContext ctx = make_context(traj, tau_j);
  const MetricAlgebra& alg = ctx.der.alg;
  const PeriodicGrid& grid = alg.grid();
  const int dim = grid.dim();
  VectorField Xr = as_raised(alg, X);
  ScalarField ea = e_a_impl(ctx, Xr, a);

  ScalarField closed = -2.0 * (a - 1.0) * alg.tensor_norm2(ctx.der.s_lower);
  const FlowSnapshot& sn = traj.at_tau(tau_j);
  if (variant == FlowVariant::List) {
    ScalarField lap_psi = alg.laplacian(*sn.psi);
    VectorField dpsi = alg.gradient(*sn.psi);
    ScalarField nabla_X(grid);
    for (int l = 0; l < dim; ++l) nabla_X += Xr.comp(l) * dpsi.comp(l);
    for (std::size_t p = 0; p < closed.size(); ++p) {
      const double lp = lap_psi[p];
      const double diff = lp - nabla_X[p];
      closed[p] += -4.0 * (a - 1.0) * lp * lp - 4.0 * diff * diff;
    }
  } else {
    const double t = sn.t;
    const double al = traj.spec().alpha.value(t);
    const double dal = traj.spec().alpha.derivative(t);
    ScalarField grad_phi_n2(grid);
    for (const auto& phi_p : sn.phi) {
      const ScalarField& phi = *phi_p;
      ScalarField lap_phi = alg.laplacian(phi);
      VectorField dphi = alg.gradient(phi);
      ScalarField nabla_X(grid);
      for (int l = 0; l < dim; ++l) nabla_X += Xr.comp(l) * dphi.comp(l);
      for (std::size_t p = 0; p < closed.size(); ++p) {
        const double lp = lap_phi[p];
        const double diff = lp - nabla_X[p];
        closed[p] += -2.0 * al * (a - 1.0) * lp * lp - 2.0 * al * diff * diff;
      }
      grad_phi_n2 += alg.grad_norm2(phi);
    }
    closed += (a * dal) * grad_phi_n2;
  }
  return ea - closed;
}

} // namespace torusflow
