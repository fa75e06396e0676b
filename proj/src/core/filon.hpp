#pragma once
// Oscillatory quadrature: int f(w) e^{-i w t} dw for the piecewise-linear
// interpolant of f on an arbitrary sorted grid, evaluated at many uniformly
// spaced times in one pass. Exact per panel for every phase, so the grid only
// needs to resolve f itself, never the oscillation.

#include <vector>

#include "core/types.hpp"

namespace cqed {

// times must be uniformly spaced (times[k] = times[0] + k * dt).
std::vector<cplx> filon_transform(const std::vector<double>& grid, const std::vector<double>& f,
                                  const std::vector<double>& times);

}  // namespace cqed
