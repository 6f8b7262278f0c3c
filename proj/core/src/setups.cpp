#include "torusflow/setups.hpp"

#include <cmath>
#include <numbers>

namespace torusflow {

const char* to_string(MetricSelector m) {
  switch (m) {
    case MetricSelector::Flat: return "flat";
    case MetricSelector::Conformal: return "conformal";
    case MetricSelector::FlatAnisotropic: return "flat_anisotropic";
  }
  return "?";
}

SymTensorField make_initial_metric(const PeriodicGrid& grid, MetricSelector sel, double amplitude) {
  SymTensorField g(grid, IndexKind::Lower);
  const double two_pi = 2.0 * std::numbers::pi;
  switch (sel) {
    case MetricSelector::Flat:
      for (int i = 0; i < grid.dim(); ++i) g.comp(i, i) += 1.0;
      break;
    case MetricSelector::Conformal:
      for (int iy = 0; iy < grid.n(1); ++iy)
        for (int ix = 0; ix < grid.n(0); ++ix) {
          double phi = amplitude * std::sin(two_pi * ix / grid.n(0));
          if (grid.dim() == 2) phi *= std::sin(two_pi * iy / grid.n(1));
          const double e = std::exp(2.0 * phi);
          for (int i = 0; i < grid.dim(); ++i) g.comp(i, i)(ix, iy) = e;
        }
      break;
    case MetricSelector::FlatAnisotropic:
      g.comp(0, 0) += 1.2;
      if (grid.dim() == 2) {
        g.comp(0, 1) += 0.1;
        g.comp(1, 1) += 0.9;
      }
      break;
  }
  return g;
}

ScalarField make_wave_field(const PeriodicGrid& grid, double amplitude) {
  ScalarField f(grid);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int iy = 0; iy < grid.n(1); ++iy)
    for (int ix = 0; ix < grid.n(0); ++ix) {
      double v = std::sin(two_pi * ix / grid.n(0));
      if (grid.dim() == 2) v += 0.5 * std::cos(two_pi * iy / grid.n(1));
      f(ix, iy) = amplitude * v;
    }
  return f;
}

} // namespace torusflow
