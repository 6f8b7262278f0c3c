#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "torusflow/errors.hpp"

namespace torusflow {

/// Uniform periodic grid on the flat torus T^1 or T^2.
///
/// Points are x_i = i*h along each axis, i in [0, n). Index arithmetic wraps
/// modulo n exactly, so periodic stencils never see a boundary.
class PeriodicGrid {
public:
  PeriodicGrid(int dim, std::array<int, 2> points, std::array<double, 2> period)
      : dim_(dim), n_(points), period_(period) {
    if (dim < 1 || dim > 2) throw Error("grid dimension must be 1 or 2");
    if (dim == 1) {
      n_[1] = 1;
      period_[1] = 1.0;
    }
    for (int ax = 0; ax < dim_; ++ax) {
      if (n_[ax] < 8) throw Error("grid needs >= 8 points per axis");
      if (period_[ax] <= 0) throw Error("grid period must be positive");
      h_[ax] = period_[ax] / n_[ax];
    }
    if (dim == 1) h_[1] = 1.0;
  }

  static PeriodicGrid square(int n, double period = 1.0) {
    return PeriodicGrid(2, {n, n}, {period, period});
  }
  static PeriodicGrid line(int n, double period = 1.0) {
    return PeriodicGrid(1, {n, 1}, {period, 1.0});
  }

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double period(int axis) const { return period_[axis]; }
  std::size_t size() const { return std::size_t(n_[0]) * std::size_t(n_[1]); }

  int sym_components() const { return dim_ * (dim_ + 1) / 2; }

  std::size_t index(int ix, int iy) const { return std::size_t(iy) * n_[0] + ix; }
  int wrap(int i, int axis) const {
    const int n = n_[axis];
    i %= n;
    return i < 0 ? i + n : i;
  }
  double x(int i, int axis) const { return i * h_[axis]; }

  bool operator==(const PeriodicGrid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && period_ == o.period_;
  }
  bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

private:
  int dim_;
  std::array<int, 2> n_;
  std::array<double, 2> period_;
  std::array<double, 2> h_{1.0, 1.0};
};

inline int sym_index(int i, int j) {
  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2 in 2D; (0,0)->0 in 1D
  return i + j;
}

/// One real value per grid point.
class ScalarField {
public:
  explicit ScalarField(const PeriodicGrid& grid, double fill = 0.0)
      : grid_(grid), v_(grid.size(), fill) {}

  const PeriodicGrid& grid() const { return grid_; }

  double& operator()(int ix, int iy) { return v_[grid_.index(ix, iy)]; }
  double operator()(int ix, int iy) const { return v_[grid_.index(ix, iy)]; }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }
  std::size_t size() const { return v_.size(); }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  bool all_finite() const {
    for (double x : v_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  ScalarField& operator+=(const ScalarField& o) {
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
  }
  ScalarField& operator*=(const ScalarField& o) {
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] *= o.v_[k];
    return *this;
  }
  ScalarField& operator+=(double c) {
    for (double& x : v_) x += c;
    return *this;
  }
  ScalarField& operator-=(double c) { return *this += -c; }
  ScalarField& operator*=(double c) {
    for (double& x : v_) x *= c;
    return *this;
  }

private:
  PeriodicGrid grid_;
  std::vector<double> v_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
inline ScalarField operator+(ScalarField a, double c) { return a += c; }
inline ScalarField operator+(double c, ScalarField a) { return a += c; }
inline ScalarField operator-(ScalarField a, double c) { return a += -c; }
inline ScalarField operator*(ScalarField a, double c) { return a *= c; }
inline ScalarField operator*(double c, ScalarField a) { return a *= c; }
inline ScalarField operator-(const ScalarField& a) {
  ScalarField r(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = -a[k];
  return r;
}
inline ScalarField operator-(double c, const ScalarField& a) {
  ScalarField r(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = c - a[k];
  return r;
}

/// Whether components carry lower (covariant) or raised (contravariant) indices.
enum class IndexKind { Lower, Raised };

/// n components per grid point plus an index flag.
class VectorField {
public:
  VectorField(const PeriodicGrid& grid, IndexKind kind)
      : kind_(kind), comps_(grid.dim(), ScalarField(grid)) {}

  const PeriodicGrid& grid() const { return comps_[0].grid(); }
  IndexKind kind() const { return kind_; }
  ScalarField& comp(int i) { return comps_[i]; }
  const ScalarField& comp(int i) const { return comps_[i]; }

private:
  IndexKind kind_;
  std::vector<ScalarField> comps_;
};

/// Symmetric 2-tensor with n(n+1)/2 independent components per point.
/// Symmetry is exact by storage: comp(i,j) and comp(j,i) alias one array.
class SymTensorField {
public:
  SymTensorField(const PeriodicGrid& grid, IndexKind kind)
      : kind_(kind), comps_(grid.sym_components(), ScalarField(grid)) {}

  const PeriodicGrid& grid() const { return comps_[0].grid(); }
  IndexKind kind() const { return kind_; }
  ScalarField& comp(int i, int j) { return comps_[sym_index(i, j)]; }
  const ScalarField& comp(int i, int j) const { return comps_[sym_index(i, j)]; }
  ScalarField& flat(int k) { return comps_[k]; }
  const ScalarField& flat(int k) const { return comps_[k]; }
  int components() const { return int(comps_.size()); }

  bool all_finite() const {
    for (const auto& c : comps_)
      if (!c.all_finite()) return false;
    return true;
  }

private:
  IndexKind kind_;
  std::vector<ScalarField> comps_;
};

// ---- centered second-order periodic stencils (the one shared implementation) ----

/// Centered first difference along `axis`.
ScalarField diff1(const ScalarField& f, int axis);
/// Centered second difference along `axis` (compact 3-point).
ScalarField diff2(const ScalarField& f, int axis);
/// Coordinate second partial d_i d_j. Mixed partials compose two centered
/// first differences; the composition order is fixed (outer = min axis).
ScalarField diff2(const ScalarField& f, int i, int j);

// ---- deterministic reductions: fixed lexicographic point order ----

struct ArgExtremum {
  double value = 0.0;
  int ix = 0;
  int iy = 0;
};

ArgExtremum grid_min(const ScalarField& f);
ArgExtremum grid_max(const ScalarField& f);
double grid_sum(const ScalarField& f);
double linf_norm(const ScalarField& f);
double l2_norm(const ScalarField& f); // sqrt(h^n * sum f^2)

} // namespace torusflow
