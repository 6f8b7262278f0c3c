#pragma once

#include <cstdint>

#include "torusflow/grid.hpp"

namespace torusflow {

/// Band-limited random smooth scalar field: Fourier synthesis over modes
/// |k| <= min(N/4, max_modes) with 1/(1+|k|^2) spectral decay, normalized to
/// max|f| = amp. Seeded, fully deterministic.
ScalarField random_smooth_field(const PeriodicGrid& grid, std::uint64_t seed, double amp = 1.0,
                                int max_modes = 8);

/// Random SPD metric g = I + eps*A + (eps^2/2)*A*A with A a random symmetric
/// band-limited field scaled to max|A_ij| <= 1. SPD for eps <= 0.2.
SymTensorField random_spd_metric(const PeriodicGrid& grid, std::uint64_t seed, double eps = 0.2);

} // namespace torusflow
