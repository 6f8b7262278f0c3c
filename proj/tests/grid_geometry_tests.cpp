#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "torusflow/geometry.hpp"
#include "torusflow/random_fields.hpp"
#include "torusflow/setups.hpp"

using namespace torusflow;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField sample(const PeriodicGrid& g, double (*f)(double, double)) {
  ScalarField out(g);
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix) out(ix, iy) = f(g.x(ix, 0), g.dim() == 2 ? g.x(iy, 1) : 0.0);
  return out;
}

double phi_fn(double x, double y) { return 0.3 * std::sin(kTwoPi * x) * std::sin(kTwoPi * y); }

SymTensorField conformal_metric(const PeriodicGrid& g, const ScalarField& phi) {
  SymTensorField out(g, IndexKind::Lower);
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix) {
      const double e = std::exp(2.0 * phi(ix, iy));
      for (int d = 0; d < g.dim(); ++d) out.comp(d, d)(ix, iy) = e;
    }
  return out;
}

ScalarField flat_lap(const ScalarField& s) {
  ScalarField out = diff2(s, 0);
  if (s.grid().dim() == 2) out += diff2(s, 1);
  return out;
}

} // namespace

TEST_CASE("inverse_metric: identity metric inverts exactly") {
  PeriodicGrid g = PeriodicGrid::square(16);
  SymTensorField id = make_initial_metric(g, MetricSelector::Flat, 0.0);
  SymTensorField inv = inverse_metric(id);
  for (int k = 0; k < inv.components(); ++k)
    for (std::size_t p = 0; p < g.size(); ++p)
      CHECK(inv.flat(k)[p] == (k == 1 ? 0.0 : 1.0));
}

TEST_CASE("inverse_metric: conformal inverse is e^{-2phi} delta pointwise") {
  PeriodicGrid g = PeriodicGrid::square(32);
  ScalarField phi = sample(g, phi_fn);
  SymTensorField gm = conformal_metric(g, phi);
  SymTensorField inv = inverse_metric(gm);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double want = std::exp(-2.0 * phi[p]);
    CHECK(std::abs(inv.flat(0)[p] - want) <= 1e-13 * want);
    CHECK(inv.flat(1)[p] == 0.0);
    CHECK(std::abs(inv.flat(2)[p] - want) <= 1e-13 * want);
  }
}

TEST_CASE("inverse_metric: random SPD metric, g * g^-1 = I to 1e-13") {
  PeriodicGrid g = PeriodicGrid::square(24);
  SymTensorField gm = random_spd_metric(g, 71, 0.2);
  SymTensorField inv = inverse_metric(gm);
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double a = gm.flat(0)[p], b = gm.flat(1)[p], c = gm.flat(2)[p];
    const double ia = inv.flat(0)[p], ib = inv.flat(1)[p], ic = inv.flat(2)[p];
    worst = std::max({worst, std::abs(a * ia + b * ib - 1.0), std::abs(a * ib + b * ic),
                      std::abs(b * ia + c * ib), std::abs(b * ib + c * ic - 1.0)});
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("inverse_metric: non-SPD input raises with point context") {
  PeriodicGrid g = PeriodicGrid::square(8);
  SymTensorField gm = make_initial_metric(g, MetricSelector::Flat, 0.0);
  gm.comp(0, 1)(3, 5) = 2.0; // det = 1 - 4 < 0 at (3,5)
  CHECK_THROWS_AS((void)inverse_metric(gm), NonSPDMetric);
  try {
    (void)inverse_metric(gm);
  } catch (const NonSPDMetric& e) {
    CHECK(e.ix == 3);
    CHECK(e.iy == 5);
    CHECK(e.min_eigenvalue < 0.0);
  }
}

TEST_CASE("christoffel: flat metric gives exact zeros") {
  PeriodicGrid g = PeriodicGrid::square(16);
  CurvatureBundle b = christoffel(make_initial_metric(g, MetricSelector::Flat, 0.0));
  for (const ScalarField& c : b.christoffel)
    CHECK(linf_norm(c) == 0.0);
}

TEST_CASE("christoffel: 1D conformal closed form at second order") {
  double errs[2];
  int idx = 0;
  for (int N : {64, 128}) {
    PeriodicGrid g = PeriodicGrid::line(N);
    SymTensorField gm(g, IndexKind::Lower);
    ScalarField dphi(g);
    for (int ix = 0; ix < N; ++ix) {
      const double x = g.x(ix, 0);
      gm.comp(0, 0)(ix, 0) = std::exp(2.0 * 0.3 * std::sin(kTwoPi * x));
      dphi(ix, 0) = 0.3 * kTwoPi * std::cos(kTwoPi * x);
    }
    CurvatureBundle b = christoffel(gm);
    ScalarField err = b.gamma(0, 0, 0) - dphi;
    errs[idx++] = linf_norm(err);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("christoffel: 2D conformal component closed forms") {
  double errs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    CurvatureBundle b = christoffel(gm);
    ScalarField d1 = diff1(phi, 0); // discrete d_1 phi, itself O(h^2) from the analytic one
    ScalarField d2 = diff1(phi, 1);
    double e = 0.0;
    // Gamma^1_11 = d1 phi, Gamma^1_22 = -d1 phi, Gamma^1_12 = d2 phi (+O(h^2))
    e = std::max(e, linf_norm(b.gamma(0, 0, 0) - d1));
    e = std::max(e, linf_norm(b.gamma(0, 1, 1) + d1));
    e = std::max(e, linf_norm(b.gamma(0, 0, 1) - d2));
    errs[idx++] = e;
  }
  CHECK(errs[0] / errs[1] >= 3.0);
  CHECK(errs[0] <= 0.05);
}

TEST_CASE("ricci: flat torus gives exact zeros") {
  PeriodicGrid g = PeriodicGrid::square(16);
  CurvatureBundle b = ricci(make_initial_metric(g, MetricSelector::FlatAnisotropic, 0.0));
  for (int k = 0; k < b.ricci.components(); ++k) CHECK(linf_norm(b.ricci.flat(k)) == 0.0);
  CHECK(linf_norm(b.scalar) == 0.0);
}

TEST_CASE("ricci: conformal scalar curvature closed form converges at order 2") {
  double errs[3];
  int idx = 0;
  for (int N : {32, 64, 128}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    CurvatureBundle b = ricci(gm);
    ScalarField want(g);
    ScalarField lap_phi = flat_lap(phi);
    for (std::size_t p = 0; p < g.size(); ++p) want[p] = -2.0 * std::exp(-2.0 * phi[p]) * lap_phi[p];
    errs[idx++] = linf_norm(b.scalar - want);
  }
  CHECK(errs[0] / errs[1] >= 3.5);
  CHECK(errs[0] / errs[1] <= 4.5);
  CHECK(errs[1] / errs[2] >= 3.5);
  CHECK(errs[1] / errs[2] <= 4.5);
}

TEST_CASE("ricci: trace of R_ij against g^{ij} reproduces R to roundoff") {
  PeriodicGrid g = PeriodicGrid::square(32);
  SymTensorField gm = random_spd_metric(g, 5, 0.2);
  MetricAlgebra alg(gm);
  const CurvatureBundle& b = alg.curvature();
  ScalarField tr = alg.trace(b.ricci);
  CHECK(linf_norm(tr - b.scalar) <= 1e-11 * std::max(1.0, linf_norm(b.scalar)));
}

// The dimension-2 identity R_ij = (R/2) g_ij holds for the discrete operator
// only up to the stencil's O(h^2) commutation error (the off-diagonal picks up
// the curl of the discrete conformal gradient); it converges at second order.
TEST_CASE("ricci: 2D Einstein identity holds at the discretization order") {
  double devs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    MetricAlgebra alg(gm);
    const CurvatureBundle& b = alg.curvature();
    double dev = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j)
        dev = std::max(dev, linf_norm(b.ricci.comp(i, j) - 0.5 * b.scalar * gm.comp(i, j)));
    devs[idx++] = dev;
  }
  CHECK(devs[0] <= 0.05);
  CHECK(devs[0] / devs[1] >= 3.0);
  // diagonal part of the identity is exact for conformal metrics
  PeriodicGrid g = PeriodicGrid::square(32);
  ScalarField phi = sample(g, phi_fn);
  MetricAlgebra alg(conformal_metric(g, phi));
  CHECK(linf_norm(alg.curvature().ricci.comp(0, 0) - alg.curvature().ricci.comp(1, 1)) <= 1e-12);
}

TEST_CASE("laplace_beltrami: constants map to exact zero") {
  PeriodicGrid g = PeriodicGrid::square(16);
  SymTensorField gm = random_spd_metric(g, 9, 0.2);
  ScalarField c(g, 3.7);
  CHECK(linf_norm(laplace_beltrami(gm, c)) == 0.0);
}

TEST_CASE("laplace_beltrami: flat eigenfunction") {
  double errs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    SymTensorField gm = make_initial_metric(g, MetricSelector::Flat, 0.0);
    ScalarField s = sample(g, [](double x, double) { return std::sin(kTwoPi * x); });
    ScalarField lap = laplace_beltrami(gm, s);
    errs[idx++] = linf_norm(lap + kTwoPi * kTwoPi * s);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("laplace_beltrami: conformal closed form e^{-2phi} Lap_delta") {
  double errs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    ScalarField s = random_smooth_field(g, 13, 1.0);
    ScalarField lap = laplace_beltrami(gm, s);
    ScalarField want = flat_lap(s);
    for (std::size_t p = 0; p < g.size(); ++p) want[p] *= std::exp(-2.0 * phi[p]);
    errs[idx++] = linf_norm(lap - want);
  }
  // for conformal 2D metrics the discrete operator reduces exactly
  CHECK(errs[0] <= 1e-9);
  CHECK(errs[1] <= 1e-9);
}

TEST_CASE("laplace_beltrami: discrete divergence theorem on flat and conformal metrics") {
  PeriodicGrid g = PeriodicGrid::square(64);
  ScalarField s = random_smooth_field(g, 21, 1.0);
  for (MetricSelector sel : {MetricSelector::Flat, MetricSelector::Conformal}) {
    SymTensorField gm = make_initial_metric(g, sel, 0.3);
    MetricAlgebra alg(gm);
    ScalarField lap = alg.laplacian(s);
    double integral = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) integral += alg.sqrt_det()[p] * lap[p];
    integral *= g.h(0) * g.h(1);
    CHECK(std::abs(integral) <= 1e-12 * std::max(1.0, linf_norm(s)));
  }
}

// On a generic (non-conformal) metric the trace-form Laplacian integrates to
// zero only at the discretization order; see the decisions record.
TEST_CASE("laplace_beltrami: divergence defect on generic metrics is O(h^2)") {
  double defs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    SymTensorField gm = random_spd_metric(g, 33, 0.2);
    MetricAlgebra alg(gm);
    ScalarField s = random_smooth_field(g, 34, 1.0);
    ScalarField lap = alg.laplacian(s);
    double integral = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) integral += alg.sqrt_det()[p] * lap[p];
    defs[idx++] = std::abs(integral * g.h(0) * g.h(1));
  }
  CHECK(defs[0] / defs[1] >= 2.5);
}

TEST_CASE("gradient/hessian: constants vanish exactly, eigenfunction trace") {
  PeriodicGrid g = PeriodicGrid::square(32);
  SymTensorField gm = random_spd_metric(g, 3, 0.2);
  ScalarField c(g, -1.25);
  VectorField gc = gradient(gm, c);
  CHECK(linf_norm(gc.comp(0)) == 0.0);
  CHECK(linf_norm(gc.comp(1)) == 0.0);
  SymTensorField hc = hessian(gm, c);
  for (int k = 0; k < hc.components(); ++k) CHECK(linf_norm(hc.flat(k)) == 0.0);

  SymTensorField flat = make_initial_metric(g, MetricSelector::Flat, 0.0);
  ScalarField s = sample(g, [](double x, double) { return std::sin(2.0 * kTwoPi * x); });
  MetricAlgebra alg(flat);
  ScalarField tr = alg.trace(alg.hessian(s));
  const double k2 = 2.0 * kTwoPi * 2.0 * kTwoPi;
  CHECK(linf_norm(tr + k2 * s) <= 0.05 * k2);
}

TEST_CASE("trace consistency: g-trace of hessian equals laplace_beltrami to 1e-11") {
  PeriodicGrid g = PeriodicGrid::square(32);
  SymTensorField gm = random_spd_metric(g, 41, 0.2);
  ScalarField s = random_smooth_field(g, 42, 1.0);
  MetricAlgebra alg(gm);
  ScalarField lap = alg.laplacian(s);
  ScalarField tr = alg.trace(alg.hessian(s));
  CHECK(linf_norm(tr - lap) <= 1e-11 * std::max(1e-30, linf_norm(lap)));
}

TEST_CASE("grad_norm2 is nonnegative") {
  PeriodicGrid g = PeriodicGrid::square(24);
  SymTensorField gm = random_spd_metric(g, 55, 0.2);
  ScalarField s = random_smooth_field(g, 56, 1.0);
  ScalarField gn = grad_norm2(gm, s);
  CHECK(grid_min(gn).value >= 0.0);
}

TEST_CASE("div_2tensor/tensor_norm2: zero tensor and the metric itself") {
  PeriodicGrid g = PeriodicGrid::square(32);
  SymTensorField gm = random_spd_metric(g, 61, 0.2);
  SymTensorField zero(g, IndexKind::Lower);
  VectorField dv = div_2tensor(gm, zero);
  CHECK(linf_norm(dv.comp(0)) == 0.0);
  CHECK(linf_norm(tensor_norm2(gm, zero)) == 0.0);

  // metric compatibility of the discrete connection
  VectorField dg = div_2tensor(gm, gm);
  CHECK(linf_norm(dg.comp(0)) <= 1e-10);
  CHECK(linf_norm(dg.comp(1)) <= 1e-10);
  ScalarField n2 = tensor_norm2(gm, gm);
  CHECK(linf_norm(n2 - 2.0) <= 1e-13);
}

TEST_CASE("contracted Bianchi residual decreases at order >= 1.8") {
  double errs[3];
  int idx = 0;
  for (int N : {32, 64, 128}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    MetricAlgebra alg(gm);
    const CurvatureBundle& b = alg.curvature();
    VectorField dv = alg.div2(b.ricci);
    VectorField gr = alg.gradient(b.scalar);
    double e = 0.0;
    for (int l = 0; l < 2; ++l) e = std::max(e, linf_norm(2.0 * dv.comp(l) - gr.comp(l)));
    errs[idx++] = e;
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
  CHECK(std::log2(errs[1] / errs[2]) >= 1.8);
}

TEST_CASE("bochner_residual: constants exact, flat mode ratio 4, conformal order >= 1.8") {
  PeriodicGrid g16 = PeriodicGrid::square(16);
  SymTensorField gm16 = random_spd_metric(g16, 77, 0.2);
  CHECK(linf_norm(bochner_residual(gm16, ScalarField(g16, 2.0))) == 0.0);

  double errs[2];
  int idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    SymTensorField gm = make_initial_metric(g, MetricSelector::Flat, 0.0);
    ScalarField u = sample(g, [](double x, double) { return std::sin(kTwoPi * x); });
    errs[idx++] = linf_norm(bochner_residual(gm, u));
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.2));

  idx = 0;
  for (int N : {32, 64}) {
    PeriodicGrid g = PeriodicGrid::square(N);
    ScalarField phi = sample(g, phi_fn);
    SymTensorField gm = conformal_metric(g, phi);
    ScalarField u = random_smooth_field(g, 88, 1.0, 4);
    errs[idx++] = linf_norm(bochner_residual(gm, u));
  }
  CHECK(std::log2(errs[0] / errs[1]) >= 1.8);
}

TEST_CASE("rectangular grids carry per-axis spacing through the stencils") {
  PeriodicGrid g(2, {48, 16}, {1.0, 2.0});
  CHECK(g.h(0) == doctest::Approx(1.0 / 48));
  CHECK(g.h(1) == doctest::Approx(2.0 / 16));
  SymTensorField gm = make_initial_metric(g, MetricSelector::Flat, 0.0);
  ScalarField s(g);
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix)
      s(ix, iy) = std::sin(kTwoPi * g.x(ix, 0)) + std::cos(kTwoPi * g.x(iy, 1) / 2.0);
  ScalarField lap = laplace_beltrami(gm, s);
  ScalarField want(g);
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix)
      want(ix, iy) = -kTwoPi * kTwoPi * std::sin(kTwoPi * g.x(ix, 0)) -
                     (kTwoPi / 2.0) * (kTwoPi / 2.0) * std::cos(kTwoPi * g.x(iy, 1) / 2.0);
  CHECK(linf_norm(lap - want) <= 0.05 * kTwoPi * kTwoPi);
}

TEST_CASE("reductions: lexicographic argmin and wrap arithmetic") {
  PeriodicGrid g = PeriodicGrid::square(8);
  ScalarField f(g, 1.0);
  f(2, 1) = -5.0;
  f(6, 3) = -5.0; // same value later in lexicographic order
  ArgExtremum m = grid_min(f);
  CHECK(m.ix == 2);
  CHECK(m.iy == 1);
  CHECK(m.value == -5.0);
  CHECK(g.wrap(-1, 0) == 7);
  CHECK(g.wrap(8, 0) == 0);
  CHECK(g.wrap(-9, 0) == 7);
  CHECK_THROWS_AS(PeriodicGrid::square(4), Error);
  CHECK_THROWS_AS(PeriodicGrid(2, {16, 16}, {0.0, 1.0}), Error);
}
