#include "torusflow/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace torusflow {

ScalarField random_smooth_field(const PeriodicGrid& grid, std::uint64_t seed, double amp,
                                int max_modes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int kmax = std::max(
      1, std::min({grid.n(0) / 4, grid.dim() == 2 ? grid.n(1) / 4 : 1 << 20, max_modes}));
  ScalarField f(grid);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int kx = 0; kx <= kmax; ++kx) {
    const int ky_lo = grid.dim() == 2 ? -kmax : 0;
    const int ky_hi = grid.dim() == 2 ? kmax : 0;
    for (int ky = ky_lo; ky <= ky_hi; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
      const double c = gauss(rng) * decay;
      const double s = gauss(rng) * decay;
      for (int iy = 0; iy < grid.n(1); ++iy)
        for (int ix = 0; ix < grid.n(0); ++ix) {
          const double ph = two_pi * (kx * double(ix) / grid.n(0) + ky * double(iy) / grid.n(1));
          f(ix, iy) += c * std::cos(ph) + s * std::sin(ph);
        }
    }
  }
  const double m = linf_norm(f);
  if (m > 0) f *= amp / m;
  return f;
}

SymTensorField random_spd_metric(const PeriodicGrid& grid, std::uint64_t seed, double eps) {
  const int dim = grid.dim();
  SymTensorField A(grid, IndexKind::Lower);
  for (int k = 0; k < A.components(); ++k)
    A.flat(k) = random_smooth_field(grid, seed + 1000 * (k + 1), 1.0);

  SymTensorField g(grid, IndexKind::Lower);
  if (dim == 1) {
    const ScalarField& a = A.flat(0);
    for (std::size_t p = 0; p < grid.size(); ++p)
      g.flat(0)[p] = 1.0 + eps * a[p] + 0.5 * eps * eps * a[p] * a[p];
    return g;
  }
  const ScalarField& a = A.comp(0, 0);
  const ScalarField& b = A.comp(0, 1);
  const ScalarField& c = A.comp(1, 1);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    // A*A entries for symmetric 2x2 A
    const double sq00 = a[p] * a[p] + b[p] * b[p];
    const double sq01 = a[p] * b[p] + b[p] * c[p];
    const double sq11 = b[p] * b[p] + c[p] * c[p];
    g.comp(0, 0)[p] = 1.0 + eps * a[p] + 0.5 * eps * eps * sq00;
    g.comp(0, 1)[p] = eps * b[p] + 0.5 * eps * eps * sq01;
    g.comp(1, 1)[p] = 1.0 + eps * c[p] + 0.5 * eps * eps * sq11;
  }
  return g;
}

} // namespace torusflow
