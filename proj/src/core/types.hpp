#pragma once
// Shared domain types and unit conventions.
//
// Units are dimensionless throughout: the cavity length L is normalized to 1,
// the speed of light c = 1, time is measured in half round-trip times and
// frequency in their inverse.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqed {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

enum class MirrorMode { delta_mirror, finite_mirror };

struct CavityConfig {
  double L = 1.0;                // cavity length (normalized)
  MirrorMode mirror_mode = MirrorMode::delta_mirror;
  double eta = 0.1;              // transparency factor (delta mode); eta = n^2 d
  double n = 0.0;                // refractive index (finite mode)
  double d = 0.0;                // mirror width (finite mode)
  double x_a = 0.5;              // emitter position in (0, L)

  // Effective transparency factor, valid in both modes.
  double eta_eff() const { return mirror_mode == MirrorMode::delta_mirror ? eta : n * n * d; }
};

struct EmitterConfig {
  double omega_a = 19.0 * pi;    // transition frequency
  double gamma = 0.0;            // coupling strength, >= 0
  double omega_c = 38.0 * pi;    // Gaussian cutoff frequency
};

struct NumericsConfig {
  double omega_max = 0.0;        // upper frequency cutoff; 0 => default omega_a + 8 omega_c
  double quad_rel_tol = 1e-8;
  int peak_points = 20;          // samples per resonance half-width
  double dt = 1e-3;
  double t_end = 20.0;
  double omega_min_bath = 0.9 * pi;  // lower limit of the damping-matrix integrals
  double mode_cut = 1e-8;        // truncation threshold on f_c^2
  double eps_reg = 0.0;          // kernel regularization

  double omega_max_or_default(double omega_a, double omega_c) const {
    return omega_max > 0.0 ? omega_max : omega_a + 8.0 * omega_c;
  }
};

struct Config {
  CavityConfig cavity;
  EmitterConfig emitter;
  NumericsConfig numerics;
};

enum class SolverTag { laplace, volterra, systembath };

inline const char* solver_name(SolverTag s) {
  switch (s) {
    case SolverTag::laplace: return "laplace";
    case SolverTag::volterra: return "volterra";
    default: return "systembath";
  }
}

struct AmplitudeTrace {
  std::vector<double> times;   // uniform, starting at 0
  std::vector<cplx> c;         // amplitude per time
  SolverTag solver_tag = SolverTag::laplace;
};

// Error taxonomy shared with the process exit-code contract:
//   config -> exit 2, numerics -> exit 3, bound_state -> exit 4, io -> exit 2.
enum class ErrorKind { config, numerics, bound_state, io };

class CqError : public std::runtime_error {
 public:
  CqError(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cqed
