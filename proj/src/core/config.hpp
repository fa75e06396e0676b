#pragma once
// Configuration ingestion, validation, presets and JSON round-trip.

#include <string>

#include "core/types.hpp"

namespace cqed {

// Throws CqError(config) naming the offending key on any invariant violation.
void validate(const Config& cfg);

Config load_config(const std::string& path);
void save_config(const Config& cfg, const std::string& path);

Config config_from_json_text(const std::string& text);
std::string config_to_json_text(const Config& cfg);

// Named presets: weak, strong, multimode, fig5.
// omega_a is tuned to the 10th LDOS resonance of the configured cavity
// (the maximum of rho near 19*pi); see tune_omega_a.
Config preset(const std::string& name);

// Frequency of the LDOS maximum closest to 19*pi for the given cavity.
double tune_omega_a(const CavityConfig& cavity);

// Set a single scalar key (JSON name, e.g. "gamma") and re-validate.
void set_param(Config& cfg, const std::string& key, double value);

}  // namespace cqed
