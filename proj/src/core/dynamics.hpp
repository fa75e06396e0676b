#pragma once
// Emitter dynamics: spectral (Laplace-inversion) solver and the Volterra
// memory-kernel solver, plus their cross-check.

#include "core/response.hpp"
#include "core/types.hpp"

namespace cqed {

struct MemoryKernel {
  std::vector<double> tau;  // uniform delays starting at 0
  std::vector<cplx> K;      // K(tau), rotating frame of the emitter
};

// c(t) = (gamma/pi) e^{i omega_a t} int U(omega) e^{-i omega t} domega over
// the refined response grid; exact Filon phases per panel.
AmplitudeTrace evolve_laplace(const Response& R, double t_end, double dt);

// K(tau) = (gamma/pi) int F(omega) e^{-i (omega - omega_a) tau} domega.
// Requires dt <= 2 pi / (4 (omega_max - omega_a)) so the kernel bandwidth is
// resolved by the delay sampling; throws CqError(numerics) otherwise.
MemoryKernel build_memory_kernel(const Response& R, double t_end, double dt);

// Implicit product-trapezoid stepping of c'(t) = -int_0^t K(t-tau) c(tau) dtau.
AmplitudeTrace evolve_volterra(const Response& R, double t_end, double dt);

struct CrossCheck {
  double max_abs_diff = 0.0;   // sup_t |c_a(t) - c_b(t)|
  double max_abs2_diff = 0.0;  // sup_t | |c_a|^2 - |c_b|^2 |
};

// Both traces must share the same time grid.
CrossCheck cross_check(const AmplitudeTrace& a, const AmplitudeTrace& b);

}  // namespace cqed
