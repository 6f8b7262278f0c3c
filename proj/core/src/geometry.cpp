#include "torusflow/geometry.hpp"

#include <cmath>

namespace torusflow {

namespace {

void spd_check(const SymTensorField& g) {
  const PeriodicGrid& gr = g.grid();
  if (gr.dim() == 1) {
    const ScalarField& a = g.comp(0, 0);
    for (int iy = 0; iy < gr.n(1); ++iy)
      for (int ix = 0; ix < gr.n(0); ++ix)
        if (!(a(ix, iy) > 1e-12)) throw NonSPDMetric(ix, iy, a(ix, iy));
    return;
  }
  const ScalarField& a = g.comp(0, 0);
  const ScalarField& b = g.comp(0, 1);
  const ScalarField& c = g.comp(1, 1);
  for (int iy = 0; iy < gr.n(1); ++iy)
    for (int ix = 0; ix < gr.n(0); ++ix) {
      const double det = a(ix, iy) * c(ix, iy) - b(ix, iy) * b(ix, iy);
      if (!(det > 1e-12) || !(a(ix, iy) > 0)) {
        const double tr = a(ix, iy) + c(ix, iy);
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        throw NonSPDMetric(ix, iy, 0.5 * (tr - disc));
      }
    }
}

} // namespace

SymTensorField inverse_metric(const SymTensorField& g) {
  spd_check(g);
  const PeriodicGrid& gr = g.grid();
  SymTensorField inv(gr, IndexKind::Raised);
  if (gr.dim() == 1) {
    for (std::size_t k = 0; k < gr.size(); ++k) inv.flat(0)[k] = 1.0 / g.flat(0)[k];
    return inv;
  }
  const auto& a = g.comp(0, 0).data();
  const auto& b = g.comp(0, 1).data();
  const auto& c = g.comp(1, 1).data();
  for (std::size_t k = 0; k < gr.size(); ++k) {
    const double det = a[k] * c[k] - b[k] * b[k];
    inv.flat(0)[k] = c[k] / det;
    inv.flat(1)[k] = -b[k] / det;
    inv.flat(2)[k] = a[k] / det;
  }
  return inv;
}

MetricAlgebra::MetricAlgebra(const SymTensorField& g)
    : g_(std::make_shared<SymTensorField>(g)),
      inv_(inverse_metric(g)),
      det_(g.grid()),
      sqrt_det_(g.grid()) {
  const PeriodicGrid& gr = g.grid();
  const int dim = gr.dim();
  const int nsym = gr.sym_components();

  if (dim == 1) {
    for (std::size_t k = 0; k < gr.size(); ++k) det_[k] = g.flat(0)[k];
  } else {
    for (std::size_t k = 0; k < gr.size(); ++k)
      det_[k] = g.flat(0)[k] * g.flat(2)[k] - g.flat(1)[k] * g.flat(1)[k];
  }
  for (std::size_t k = 0; k < gr.size(); ++k) sqrt_det_[k] = std::sqrt(det_[k]);

  // dg[sym(i,j)][l] = d_l g_ij
  std::vector<std::vector<ScalarField>> dg(nsym);
  for (int s = 0; s < nsym; ++s)
    for (int l = 0; l < dim; ++l) dg[s].push_back(diff1(g.flat(s), l));

  gamma_.reserve(dim * nsym);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        ScalarField G(gr);
        for (int l = 0; l < dim; ++l) {
          const ScalarField& gil = inv_.comp(k, l);
          const ScalarField& t1 = dg[sym_index(j, l)][i];
          const ScalarField& t2 = dg[sym_index(i, l)][j];
          const ScalarField& t3 = dg[sym_index(i, j)][l];
          for (std::size_t p = 0; p < gr.size(); ++p)
            G[p] += 0.5 * gil[p] * (t1[p] + t2[p] - t3[p]);
        }
        gamma_.push_back(std::move(G));
      }
}

const CurvatureBundle& MetricAlgebra::curvature() const {
  if (curv_) return *curv_;
  const PeriodicGrid& gr = grid();
  const int dim = gr.dim();

  CurvatureBundle b{gamma_, SymTensorField(gr, IndexKind::Lower), ScalarField(gr),
                    SymTensorField(gr, IndexKind::Raised)};

  // c_j = Gamma^k_kj
  std::vector<ScalarField> c;
  for (int j = 0; j < dim; ++j) {
    ScalarField cj(gr);
    for (int k = 0; k < dim; ++k) cj += gamma(k, k, j);
    c.push_back(std::move(cj));
  }

  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      ScalarField r(gr);
      for (int k = 0; k < dim; ++k) r += diff1(gamma(k, i, j), k);
      r -= diff1(c[j], i);
      for (int l = 0; l < dim; ++l) r += c[l] * gamma(l, i, j);
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) r -= gamma(k, i, l) * gamma(l, k, j);
      b.ricci.comp(i, j) = r;
    }

  b.scalar = trace(b.ricci);
  b.ricci_raised = raise2(b.ricci);
  curv_ = std::move(b);
  return *curv_;
}

ScalarField MetricAlgebra::laplacian(const ScalarField& s) const {
  const PeriodicGrid& gr = grid();
  const int dim = gr.dim();
  ScalarField out(gr);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double w = (i == j) ? 1.0 : 2.0;
      ScalarField d2 = diff2(s, i, j);
      const ScalarField& a = inv_.comp(i, j);
      for (std::size_t p = 0; p < gr.size(); ++p) out[p] += w * a[p] * d2[p];
    }
  for (int k = 0; k < dim; ++k) {
    ScalarField d1 = diff1(s, k);
    ScalarField coef(gr);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const double w = (i == j) ? 1.0 : 2.0;
        const ScalarField& a = inv_.comp(i, j);
        const ScalarField& G = gamma(k, i, j);
        for (std::size_t p = 0; p < gr.size(); ++p) coef[p] += w * a[p] * G[p];
      }
    for (std::size_t p = 0; p < gr.size(); ++p) out[p] -= coef[p] * d1[p];
  }
  return out;
}

VectorField MetricAlgebra::gradient(const ScalarField& s) const {
  VectorField v(grid(), IndexKind::Lower);
  for (int i = 0; i < grid().dim(); ++i) v.comp(i) = diff1(s, i);
  return v;
}

VectorField MetricAlgebra::raise(const VectorField& x) const {
  VectorField v(grid(), IndexKind::Raised);
  const int dim = grid().dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) v.comp(i) += inv_.comp(i, j) * x.comp(j);
  return v;
}

VectorField MetricAlgebra::lower(const VectorField& x) const {
  VectorField v(grid(), IndexKind::Lower);
  const int dim = grid().dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) v.comp(i) += g_->comp(i, j) * x.comp(j);
  return v;
}

ScalarField MetricAlgebra::grad_norm2(const ScalarField& s) const {
  const int dim = grid().dim();
  std::vector<ScalarField> d;
  for (int i = 0; i < dim; ++i) d.push_back(diff1(s, i));
  ScalarField out(grid());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out += inv_.comp(i, j) * d[i] * d[j];
  return out;
}

SymTensorField MetricAlgebra::hessian(const ScalarField& s) const {
  const int dim = grid().dim();
  SymTensorField H(grid(), IndexKind::Lower);
  std::vector<ScalarField> d;
  for (int k = 0; k < dim; ++k) d.push_back(diff1(s, k));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      ScalarField hij = diff2(s, i, j);
      for (int k = 0; k < dim; ++k) hij -= gamma(k, i, j) * d[k];
      H.comp(i, j) = std::move(hij);
    }
  return H;
}

SymTensorField MetricAlgebra::raise2(const SymTensorField& t) const {
  const int dim = grid().dim();
  SymTensorField U(grid(), IndexKind::Raised);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      ScalarField u(grid());
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) u += inv_.comp(i, k) * inv_.comp(j, l) * t.comp(k, l);
      U.comp(i, j) = std::move(u);
    }
  return U;
}

ScalarField MetricAlgebra::trace(const SymTensorField& t) const {
  const int dim = grid().dim();
  ScalarField out(grid());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out += inv_.comp(i, j) * t.comp(i, j);
  return out;
}

ScalarField MetricAlgebra::tensor_norm2(const SymTensorField& t) const {
  SymTensorField U = raise2(t);
  const int dim = grid().dim();
  ScalarField out(grid());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out += U.comp(i, j) * t.comp(i, j);
  return out;
}

ScalarField MetricAlgebra::dot(const VectorField& a, const VectorField& b) const {
  const int dim = grid().dim();
  ScalarField out(grid());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out += inv_.comp(i, j) * a.comp(i) * b.comp(j);
  return out;
}

VectorField MetricAlgebra::div2(const SymTensorField& S) const {
  const int dim = grid().dim();
  VectorField out(grid(), IndexKind::Lower);
  for (int l = 0; l < dim; ++l) {
    ScalarField s(grid());
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i) {
        ScalarField cov = diff1(S.comp(i, l), k);
        for (int m = 0; m < dim; ++m)
          cov -= gamma(m, k, i) * S.comp(m, l) + gamma(m, k, l) * S.comp(i, m);
        s += inv_.comp(k, i) * cov;
      }
    out.comp(l) = std::move(s);
  }
  return out;
}

double MetricAlgebra::max_inverse_eigenvalue() const {
  const PeriodicGrid& gr = grid();
  double m = 0.0;
  if (gr.dim() == 1) {
    for (std::size_t k = 0; k < gr.size(); ++k) m = std::max(m, inv_.flat(0)[k]);
    return m;
  }
  const auto& a = inv_.flat(0).data();
  const auto& b = inv_.flat(1).data();
  const auto& c = inv_.flat(2).data();
  for (std::size_t k = 0; k < gr.size(); ++k) {
    const double tr = a[k] + c[k];
    const double disc = std::sqrt(std::max(0.0, (a[k] - c[k]) * (a[k] - c[k]) + 4.0 * b[k] * b[k]));
    m = std::max(m, 0.5 * (tr + disc));
  }
  return m;
}

// ---- free functions (the module's public surface) ----

CurvatureBundle christoffel(const SymTensorField& g) {
  MetricAlgebra m(g);
  const PeriodicGrid& gr = g.grid();
  CurvatureBundle b{{}, SymTensorField(gr, IndexKind::Lower), ScalarField(gr),
                    SymTensorField(gr, IndexKind::Raised)};
  for (int k = 0; k < gr.dim(); ++k)
    for (int i = 0; i < gr.dim(); ++i)
      for (int j = i; j < gr.dim(); ++j) b.christoffel.push_back(m.gamma(k, i, j));
  return b;
}

CurvatureBundle ricci(const SymTensorField& g) { return MetricAlgebra(g).curvature(); }

ScalarField laplace_beltrami(const SymTensorField& g, const ScalarField& s) {
  return MetricAlgebra(g).laplacian(s);
}

VectorField gradient(const SymTensorField& g, const ScalarField& s) {
  return MetricAlgebra(g).gradient(s);
}

SymTensorField hessian(const SymTensorField& g, const ScalarField& s) {
  return MetricAlgebra(g).hessian(s);
}

ScalarField grad_norm2(const SymTensorField& g, const ScalarField& s) {
  return MetricAlgebra(g).grad_norm2(s);
}

VectorField div_2tensor(const SymTensorField& g, const SymTensorField& S) {
  return MetricAlgebra(g).div2(S);
}

ScalarField tensor_norm2(const SymTensorField& g, const SymTensorField& S) {
  return MetricAlgebra(g).tensor_norm2(S);
}

ScalarField bochner_residual(const SymTensorField& g, const ScalarField& u) {
  MetricAlgebra m(g);
  const CurvatureBundle& curv = m.curvature();
  ScalarField lap_u = m.laplacian(u);
  VectorField grad_lap = m.gradient(lap_u);
  VectorField grad_u = m.gradient(u);
  ScalarField gn2 = m.grad_norm2(u);
  SymTensorField hess = m.hessian(u);

  ScalarField out = 2.0 * m.dot(grad_lap, grad_u);
  out -= m.laplacian(gn2);
  const int dim = g.grid().dim();
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      out += 2.0 * curv.ricci_raised.comp(i, j) * grad_u.comp(i) * grad_u.comp(j);
  out += 2.0 * m.tensor_norm2(hess);
  return out;
}

} // namespace torusflow
