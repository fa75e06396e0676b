#pragma once
// Deterministic output persistence: CSV emission at 17 significant digits and
// the JSON run manifest.

#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/response.hpp"
#include "core/spectral.hpp"
#include "core/systembath.hpp"
#include "core/types.hpp"

namespace cqed {

inline constexpr const char* kVersion = "1.0.0";

std::string format_g17(double v);

void write_spectrum_csv(const std::string& path, const SpectralTable& table);
void write_green_csv(const std::string& path, const std::vector<GreenEvaluation>& evals);
void write_kernel_csv(const std::string& path, const ResponseTable& table);
void write_trace_csv(const std::string& path, const AmplitudeTrace& trace);
void write_bath_csv(const std::string& path, const BathTrace& trace);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

struct RunManifest {
  std::string command;
  std::string config_json;            // config snapshot after defaults
  std::vector<std::string> outputs;   // files written by the run
  double wall_time_sec = 0.0;
  std::string version = kVersion;
};

void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace cqed
