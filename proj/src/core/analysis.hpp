#pragma once
// Derived observables: regime classification, exponential-decay fits, revival
// detection, trace comparison, and one-parameter sweeps.

#include <optional>
#include <string>
#include <vector>

#include "core/response.hpp"
#include "core/types.hpp"

namespace cqed {

enum class Regime { weak, strong_single_mode, multimode_strong };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::weak: return "weak";
    case Regime::strong_single_mode: return "strong_single_mode";
    default: return "multimode_strong";
  }
}

struct FitResult {
  double rate = 0.0;          // decay rate of |c|^2 (positive for decay)
  double rel_residual = 0.0;  // rms residual of ln|c|^2 relative to its span
  bool monotone = true;       // |c|^2 non-increasing inside the fit window
};

// Least-squares fit of ln|c(t)|^2 = a - rate * t over t in [t_lo, t_hi].
FitResult fit_decay(const AmplitudeTrace& trace, double t_lo, double t_hi);

struct Revival {
  double t = 0.0;
  double height = 0.0;      // |c|^2 at the peak
  double prominence = 0.0;
};

// Local maxima of |c|^2 with at least the given prominence, excluding t = 0.
std::vector<Revival> find_revivals(const AmplitudeTrace& trace, double min_prominence = 0.02);

// Regime taxonomy by resonant-entry count: 1 resonant entry -> weak; exactly 2
// within one free spectral range (2 pi) of omega_a -> strong_single_mode;
// >= 3 -> multimode_strong.
struct AnalysisReport {
  Regime regime = Regime::weak;
  int resonance_count = 0;       // roots of the resonance condition
  int resonant_count = 0;        // those not suppressed
  double purcell_rate = 0.0;     // 2 gamma F(omega_a)
  double lamb_shift = 0.0;       // gamma delta(omega_a)
  double rabi_freq = 0.0;        // sqrt(2 omega_a gamma)
  std::vector<Revival> revivals;
  double first_revival_t = 0.0;  // 0 when no revival
  double first_revival_h = 0.0;
};

AnalysisReport analyze(const Response& R, const AmplitudeTrace* trace = nullptr);

struct PeakPair {
  double t_a = 0.0, t_b = 0.0;
  double h_a = 0.0, h_b = 0.0;
};

struct PeakComparison {
  std::vector<PeakPair> pairs;  // peaks matched by nearest time
  int unmatched = 0;
  double max_time_offset = 0.0;
  double max_height_ratio_dev = 0.0;  // max |h_a/h_b - 1| over matched pairs
};

PeakComparison compare_traces(const AmplitudeTrace& a, const AmplitudeTrace& b,
                              double min_prominence = 0.02, double match_window = 0.5);

struct SweepRow {
  double value = 0.0;
  std::string regime;
  int resonance_count = 0;
  double purcell_rate = 0.0;
  double rabi_freq = 0.0;
  double first_revival_t = 0.0;
  double first_revival_h = 0.0;
  std::string error;  // empty on success; failures do not abort the sweep
};

std::vector<SweepRow> sweep(const Config& base, const std::string& param,
                            const std::vector<double>& values, SolverTag solver,
                            int base_n = 1 << 21);

}  // namespace cqed
