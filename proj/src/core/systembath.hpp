#pragma once
// Independent system-and-bath oracle: discrete cavity modes coupled to the
// emitter, with a non-diagonal damping matrix accounting for leakage through
// the mirrors. Solved as a constant-coefficient ODE in the rotating frame
// (RK4), plus an integral-equation formulation of the same model used as a
// short-horizon consistency check in the tests.

#include <vector>

#include "core/types.hpp"

namespace cqed {

struct ModeBasis {
  std::vector<double> omega;  // omega_lambda = (2 lambda - 1) pi / L
  std::vector<cplx> g;        // emitter-mode couplings
  std::vector<double> v;      // outgoing-channel amplitudes (signed)
};

// Modes are kept while their Gaussian cutoff weight f_c^2 stays above
// mode_cut and omega_lambda <= omega_max.
ModeBasis build_modes(const Config& cfg);

// Spectral leakage density of the outgoing channel:
//   h(omega) = 1 / (pi L omega (1 + eta^2 omega^2))
double bath_leakage_density(double omega, double eta, double L);

// P(wp) = PV int_{wmin}^{inf} h(omega) / (omega - wp) domega.
// Numeric evaluation (singularity-subtracted quadrature + asymptotic tail).
double bath_pv_integral(double wp, double eta, double L, double wmin, double rel_tol);
// Closed form of the same integral by partial fractions (used as an oracle).
double bath_pv_integral_closed(double wp, double eta, double L, double wmin);

// Damping matrix Gamma_{l,l'} = v_l v_l' (-pi h(omega_l') + i P(omega_l')).
// include_principal_value = false drops the imaginary (level-shift) part.
std::vector<std::vector<cplx>> damping_matrix(const Config& cfg, const ModeBasis& modes,
                                              bool include_principal_value = true);

struct BathTrace {
  AmplitudeTrace trace;       // emitter amplitude, rotating frame
  std::vector<double> norm;   // |c|^2 + sum |b_lambda|^2 (decays via leakage)
  int mode_count = 0;
};

// RK4 integration of
//   c'     = -i sum_l g_l b_l
//   b_l'   = -i (omega_l - omega_a) b_l - i conj(g_l) c + sum_l' Gamma_{l,l'} b_l'
// Requires dt * max|omega_l - omega_a| within the RK4 imaginary-axis stability
// limit; throws CqError(numerics) otherwise.
BathTrace evolve_bath(const Config& cfg, double t_end, double dt);

// Direct product-trapezoid stepping of the formally integrated equations for
// (c, c_lambda). Quadratic cost in the step count; intended for short test
// horizons only.
AmplitudeTrace evolve_bath_volterra(const Config& cfg, double t_end, double dt);

}  // namespace cqed
