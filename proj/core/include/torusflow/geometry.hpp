#pragma once

#include <memory>
#include <optional>

#include "torusflow/grid.hpp"

namespace torusflow {

/// Christoffel symbols plus Ricci data of one metric.
struct CurvatureBundle {
  // christoffel[k * nsym + sym_index(i,j)] = Gamma^k_ij; symmetric in (i,j) by storage
  std::vector<ScalarField> christoffel;
  SymTensorField ricci;        // R_ij, lower
  ScalarField scalar;          // R = g^{ij} R_ij
  SymTensorField ricci_raised; // R^{ij}

  const ScalarField& gamma(int k, int i, int j) const {
    const int nsym = ricci.grid().sym_components();
    return christoffel[k * nsym + sym_index(i, j)];
  }
};

/// Pointwise inverse of an SPD metric. Throws NonSPDMetric when the pointwise
/// determinant <= 1e-12 or a diagonal entry <= 0 (Sylvester test).
SymTensorField inverse_metric(const SymTensorField& g);

/// Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij), centered differences.
CurvatureBundle christoffel(const SymTensorField& g);

/// Full bundle: R_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kl Gamma^l_ij
/// - Gamma^k_il Gamma^l_kj, R = g^{ij} R_ij, R^{ij} raised.
CurvatureBundle ricci(const SymTensorField& g);

/// Laplace-Beltrami of the evolving metric, discretized as the g-trace of the
/// discrete Hessian: g^{ij}(d_i d_j s - Gamma^k_ij d_k s). This makes
/// trace-consistency with hessian() exact; see geometry tests.
ScalarField laplace_beltrami(const SymTensorField& g, const ScalarField& s);

/// Coordinate gradient d_i s (lower index).
VectorField gradient(const SymTensorField& g, const ScalarField& s);

/// Covariant Hessian (nabla nabla s)_ij = d_i d_j s - Gamma^k_ij d_k s.
SymTensorField hessian(const SymTensorField& g, const ScalarField& s);

/// |nabla s|^2 = g^{ij} d_i s d_j s >= 0.
ScalarField grad_norm2(const SymTensorField& g, const ScalarField& s);

/// Covariant divergence (nabla^i S)_l = g^{ki}(d_k S_il - Gamma^m_ki S_ml - Gamma^m_kl S_im).
VectorField div_2tensor(const SymTensorField& g, const SymTensorField& S);

/// |S|^2 = g^{ik} g^{jl} S_ij S_kl >= 0.
ScalarField tensor_norm2(const SymTensorField& g, const SymTensorField& S);

/// Residual of the Bochner formula:
/// 2 nabla^i(Lap u) nabla_i u - Lap(|nabla u|^2) + 2 R_ij nabla^i u nabla^j u + 2 |nabla nabla u|^2.
ScalarField bochner_residual(const SymTensorField& g, const ScalarField& u);

/// Shared per-metric scratch: inverse, determinant, Christoffel symbols and the
/// Laplacian's first-order coefficients, computed once and reused. Curvature is
/// computed lazily on first use. All heavy call sites (flow stages, heat steps,
/// verification sweeps) go through one of these.
class MetricAlgebra {
public:
  explicit MetricAlgebra(const SymTensorField& g);

  const PeriodicGrid& grid() const { return g_->grid(); }
  const SymTensorField& metric() const { return *g_; }
  const SymTensorField& inverse() const { return inv_; }
  const ScalarField& det() const { return det_; }
  const ScalarField& sqrt_det() const { return sqrt_det_; }
  const ScalarField& gamma(int k, int i, int j) const {
    return gamma_[k * grid().sym_components() + sym_index(i, j)];
  }

  const CurvatureBundle& curvature() const; // lazy

  ScalarField laplacian(const ScalarField& s) const;
  VectorField gradient(const ScalarField& s) const;
  VectorField raise(const VectorField& x_lower) const;
  VectorField lower(const VectorField& x_raised) const;
  ScalarField grad_norm2(const ScalarField& s) const;
  SymTensorField hessian(const ScalarField& s) const;
  SymTensorField raise2(const SymTensorField& t_lower) const;
  ScalarField trace(const SymTensorField& t_lower) const;
  ScalarField tensor_norm2(const SymTensorField& t_lower) const;
  /// g^{ij} a_i b_j for two lower-index vectors.
  ScalarField dot(const VectorField& a_lower, const VectorField& b_lower) const;
  VectorField div2(const SymTensorField& S_lower) const;
  /// Largest eigenvalue of g^{ij} over the grid (explicit-step stability input).
  double max_inverse_eigenvalue() const;

private:
  std::shared_ptr<const SymTensorField> g_;
  SymTensorField inv_;
  ScalarField det_;
  ScalarField sqrt_det_;
  std::vector<ScalarField> gamma_;
  mutable std::optional<CurvatureBundle> curv_;
};

} // namespace torusflow
