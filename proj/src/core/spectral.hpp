#pragma once
// Mirror reflection amplitude, exact 1D Green's function / LDOS, coupling
// amplitude and the spectral function F(omega).

#include <vector>

#include "core/types.hpp"

namespace cqed {

struct GreenEvaluation {
  double omega = 0.0;
  cplx G{};       // G+(x_a, x_a, omega)
  double rho = 0.0;  // local density of photonic states, >= 0
};

enum class SpectralSource { closed_form, green_function };

struct SpectralTable {
  std::vector<double> grid;  // strictly increasing frequencies
  std::vector<double> F;     // F(omega) >= 0
  SpectralSource source = SpectralSource::green_function;
};

// r(omega) = i*omega*eta / (2 - i*omega*eta)
cplx mirror_reflection(double omega, double eta);

// Retarded Green's function at the emitter position, built from left- and
// right-outgoing fundamental solutions joined via their Wronskian; finite
// mirrors are handled by 2x2 slab transfer matrices, the delta mirror by its
// reflection amplitude. rho = (2 omega / pi) |Im G|.
GreenEvaluation green_function(double x_a, double omega, const CavityConfig& cavity);

// |g(omega)|^2 = (pi/2) * omega * exp(-(omega-omega_a)^2 / (2 omega_c^2))
double coupling_strength(double omega, const EmitterConfig& emitter);

// Pointwise spectral function. Both sources carry the same overall
// normalization F = rho * |g|^2 / 2 (the 1/2 makes the per-resonance weight
// consistent with the vacuum Rabi splitting sqrt(2 omega_a gamma) and with the
// discrete-mode couplings of the system-and-bath solver; see README).
double spectral_value(double omega, const CavityConfig& cavity, const EmitterConfig& emitter,
                      SpectralSource source);

SpectralTable spectral_function(const std::vector<double>& grid, const CavityConfig& cavity,
                                const EmitterConfig& emitter, SpectralSource source);

}  // namespace cqed
