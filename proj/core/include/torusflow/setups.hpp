#pragma once

#include "torusflow/grid.hpp"

namespace torusflow {

/// Initial-metric families used by runs, verification setups and tests.
enum class MetricSelector {
  Flat,            // identity metric
  Conformal,       // e^{2 phi} delta, phi = amp * sin(2 pi x/L) [* sin(2 pi y/L)]
  FlatAnisotropic, // constant coefficients (1.2, 0.1, 0.9): flat but not the identity
};

const char* to_string(MetricSelector m);

SymTensorField make_initial_metric(const PeriodicGrid& grid, MetricSelector sel, double amplitude);

/// Smooth low-mode wave, used as psi / phi initial data:
/// amp * (sin(2 pi x/L) + 0.5 cos(2 pi y/L)).
ScalarField make_wave_field(const PeriodicGrid& grid, double amplitude);

} // namespace torusflow
