#pragma once
// Nonlinear Lamb shift delta(omega), kernel U(omega), resonance finding and
// classification, and the bound-state / critical-coupling detector.

#include <functional>
#include <vector>

#include "core/spectral.hpp"
#include "core/types.hpp"

namespace cqed {

struct ResponseTable {
  std::vector<double> grid;
  std::vector<double> delta;
  std::vector<double> U;
  double gamma = 0.0;
};

enum class ResonanceKind { resonant, suppressed };

struct Resonance {
  double omega_r = 0.0;
  ResonanceKind kind = ResonanceKind::resonant;
  double width = 0.0;   // gamma * F(omega_r)
  double height = 0.0;  // U(omega_r)
  bool near_threshold = false;  // classification within 10% of the window rule
};

struct ResonanceSet {
  std::vector<Resonance> items;
};

struct BoundStateReport {
  bool exists = false;
  double omega_j = 0.0;
  double gamma_crit = 0.0;
  double residual = 0.0;  // pole-equation residual at omega_j (0 when absent)
};

// Principal value of int_lo^hi f(w)/(wp - w) dw by singularity subtraction:
// the subtracted integrand is integrated adaptively panel by panel, the
// logarithmic remainder analytically.
double pv_integral(const std::function<double(double)>& f, double lo, double hi, double wp,
                   double rel_tol, const std::vector<double>& interior_breaks = {});

// Central evaluation context: holds the spectral model, a dense uniform base
// table of F and delta (delta via an exact principal-value convolution against
// the piecewise-linear interpolant of F), and everything derived from them.
class Response {
 public:
  explicit Response(const Config& cfg,
                    SpectralSource source = SpectralSource::green_function,
                    int base_n = 1 << 21);

  const Config& config() const { return cfg_; }
  double omega_max() const { return omega_max_; }

  double F(double omega) const;            // exact pointwise evaluation
  double delta_table(double omega) const;  // interpolated from the base table
  double delta_exact(double omega) const;  // adaptive singularity subtraction
  double kernel_U(double omega) const;     // uses the table delta

  const std::vector<double>& base_grid() const { return wg_; }
  const std::vector<double>& base_F() const { return Fg_; }
  const std::vector<double>& base_delta() const { return dg_; }

  ResonanceSet find_resonances() const;
  BoundStateReport bound_state() const;

  // Refined frequency grid for the Laplace inversion: uniform background with
  // spacing <= pi/(4 t_end) plus graded windows around every resonance carrying
  // >= peak_points samples per half-width.
  std::vector<double> response_grid(double t_end) const;
  // Denser variant used for the sum-rule quadrature.
  std::vector<double> quadrature_grid() const;

  // Grid resolving F itself (uniform background + spectral-peak windows),
  // used for the memory-kernel transform.
  std::vector<double> spectral_grid() const;

  ResponseTable build_response(const std::vector<double>& grid) const;

  // Effective kernel-peak half-width at a resonance root (slope-corrected).
  double root_half_width(double omega_r) const;

  // (gamma/pi) * int U domega; equals c(0) = 1 below the critical coupling.
  double sum_rule() const;

 private:
  Config cfg_;
  SpectralSource source_;
  double omega_max_;
  std::vector<double> wg_, Fg_, dg_;
  mutable std::vector<Resonance> res_cache_;
  mutable bool res_cached_ = false;
};

}  // namespace cqed
