#include "torusflow/grid.hpp"

namespace torusflow {

ScalarField diff1(const ScalarField& f, int axis) {
  const PeriodicGrid& g = f.grid();
  ScalarField out(g);
  const double inv2h = 1.0 / (2.0 * g.h(axis));
  const int nx = g.n(0), ny = g.n(1);
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const int ip = ix + 1 == nx ? 0 : ix + 1;
        const int im = ix == 0 ? nx - 1 : ix - 1;
        out(ix, iy) = (f(ip, iy) - f(im, iy)) * inv2h;
      }
  } else {
    for (int iy = 0; iy < ny; ++iy) {
      const int jp = iy + 1 == ny ? 0 : iy + 1;
      const int jm = iy == 0 ? ny - 1 : iy - 1;
      for (int ix = 0; ix < nx; ++ix) out(ix, iy) = (f(ix, jp) - f(ix, jm)) * inv2h;
    }
  }
  return out;
}

ScalarField diff2(const ScalarField& f, int axis) {
  const PeriodicGrid& g = f.grid();
  ScalarField out(g);
  const double invh2 = 1.0 / (g.h(axis) * g.h(axis));
  const int nx = g.n(0), ny = g.n(1);
  if (axis == 0) {
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const int ip = ix + 1 == nx ? 0 : ix + 1;
        const int im = ix == 0 ? nx - 1 : ix - 1;
        out(ix, iy) = (f(ip, iy) - 2.0 * f(ix, iy) + f(im, iy)) * invh2;
      }
  } else {
    for (int iy = 0; iy < ny; ++iy) {
      const int jp = iy + 1 == ny ? 0 : iy + 1;
      const int jm = iy == 0 ? ny - 1 : iy - 1;
      for (int ix = 0; ix < nx; ++ix)
        out(ix, iy) = (f(ix, jp) - 2.0 * f(ix, iy) + f(ix, jm)) * invh2;
    }
  }
  return out;
}

ScalarField diff2(const ScalarField& f, int i, int j) {
  if (i == j) return diff2(f, i);
  return diff1(diff1(f, std::max(i, j)), std::min(i, j));
}

ArgExtremum grid_min(const ScalarField& f) {
  const PeriodicGrid& g = f.grid();
  ArgExtremum best{f(0, 0), 0, 0};
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix)
      if (f(ix, iy) < best.value) best = {f(ix, iy), ix, iy};
  return best;
}

ArgExtremum grid_max(const ScalarField& f) {
  const PeriodicGrid& g = f.grid();
  ArgExtremum best{f(0, 0), 0, 0};
  for (int iy = 0; iy < g.n(1); ++iy)
    for (int ix = 0; ix < g.n(0); ++ix)
      if (f(ix, iy) > best.value) best = {f(ix, iy), ix, iy};
  return best;
}

double grid_sum(const ScalarField& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k];
  return s;
}

double linf_norm(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * f[k];
  double vol = 1.0;
  for (int ax = 0; ax < f.grid().dim(); ++ax) vol *= f.grid().h(ax);
  return std::sqrt(vol * s);
}

} // namespace torusflow
