#include "core/config.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/spectral.hpp"
#include "json.hpp"

namespace cqed {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& msg) {
  if (!ok) throw CqError(ErrorKind::config, msg);
}

}  // namespace

void validate(const Config& cfg) {
  const auto& c = cfg.cavity;
  const auto& e = cfg.emitter;
  const auto& n = cfg.numerics;
  require(c.L > 0.0, "L must be > 0");
  require(c.x_a > 0.0 && c.x_a < c.L, "x_a must lie in (0, L)");
  if (c.mirror_mode == MirrorMode::delta_mirror) {
    require(c.eta > 0.0, "eta must be > 0");
  } else {
    require(c.n > 1.0, "n must be > 1");
    require(c.d > 0.0 && c.d < c.L / 10.0, "d must lie in (0, L/10)");
  }
  require(e.omega_a > 0.0, "omega_a must be > 0");
  require(e.gamma >= 0.0, "gamma must be >= 0");
  require(e.omega_c > 0.0, "omega_c must be > 0");
  require(n.omega_max_or_default(e.omega_a, e.omega_c) > e.omega_a, "omega_max must be > omega_a");
  require(n.quad_rel_tol > 0.0, "quad_rel_tol must be > 0");
  require(n.peak_points > 0, "peak_points must be > 0");
  require(n.dt > 0.0, "dt must be > 0");
  require(n.t_end > 0.0, "t_end must be > 0");
  require(n.omega_min_bath > 0.0 && n.omega_min_bath < pi / c.L,
          "omega_min_bath must lie in (0, pi/L)");
  require(n.mode_cut > 0.0 && n.mode_cut < 1.0, "mode_cut must lie in (0, 1)");
  require(n.eps_reg >= 0.0, "eps_reg must be >= 0");
}

Config config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw CqError(ErrorKind::config, std::string("config parse failure: ") + ex.what());
  }
  Config cfg;
  auto num = [&](const char* key, double fallback, bool required_key = false) {
    if (j.contains(key)) {
      if (!j[key].is_number())
        throw CqError(ErrorKind::config, std::string(key) + " must be a number");
      return j[key].get<double>();
    }
    if (required_key) throw CqError(ErrorKind::config, std::string("missing required key ") + key);
    return fallback;
  };
  cfg.cavity.L = num("L", 1.0);
  if (j.contains("n") || j.contains("d")) {
    cfg.cavity.mirror_mode = MirrorMode::finite_mirror;
    cfg.cavity.n = num("n", 0.0, true);
    cfg.cavity.d = num("d", 0.0, true);
    cfg.cavity.eta = cfg.cavity.n * cfg.cavity.n * cfg.cavity.d;
  } else {
    cfg.cavity.mirror_mode = MirrorMode::delta_mirror;
    cfg.cavity.eta = num("eta", 0.0, true);
  }
  cfg.cavity.x_a = num("x_a", 0.5 * cfg.cavity.L);
  cfg.emitter.omega_a = num("omega_a", 0.0, true);
  cfg.emitter.gamma = num("gamma", 0.0, true);
  cfg.emitter.omega_c = num("omega_c", 0.0, true);
  cfg.numerics.omega_max = num("omega_max", 0.0);
  cfg.numerics.quad_rel_tol = num("quad_rel_tol", 1e-8);
  cfg.numerics.peak_points = static_cast<int>(num("peak_points", 20));
  cfg.numerics.dt = num("dt", 1e-3);
  cfg.numerics.t_end = num("t_end", 20.0);
  cfg.numerics.omega_min_bath = num("omega_min_bath", 0.9 * pi / cfg.cavity.L);
  cfg.numerics.mode_cut = num("mode_cut", 1e-8);
  cfg.numerics.eps_reg = num("eps_reg", 0.0);
  validate(cfg);
  return cfg;
}

std::string config_to_json_text(const Config& cfg) {
  json j;
  j["L"] = cfg.cavity.L;
  if (cfg.cavity.mirror_mode == MirrorMode::finite_mirror) {
    j["n"] = cfg.cavity.n;
    j["d"] = cfg.cavity.d;
    j["eta_derived"] = cfg.cavity.eta_eff();
  } else {
    j["eta"] = cfg.cavity.eta;
  }
  j["x_a"] = cfg.cavity.x_a;
  j["omega_a"] = cfg.emitter.omega_a;
  j["gamma"] = cfg.emitter.gamma;
  j["omega_c"] = cfg.emitter.omega_c;
  if (cfg.numerics.omega_max > 0.0) j["omega_max"] = cfg.numerics.omega_max;
  j["quad_rel_tol"] = cfg.numerics.quad_rel_tol;
  j["peak_points"] = cfg.numerics.peak_points;
  j["dt"] = cfg.numerics.dt;
  j["t_end"] = cfg.numerics.t_end;
  j["omega_min_bath"] = cfg.numerics.omega_min_bath;
  j["mode_cut"] = cfg.numerics.mode_cut;
  j["eps_reg"] = cfg.numerics.eps_reg;
  return j.dump(2) + "\n";
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CqError(ErrorKind::io, "cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CqError(ErrorKind::io, "cannot open for writing: " + path);
  out << config_to_json_text(cfg);
}

double tune_omega_a(const CavityConfig& cavity) {
  auto neg_rho = [&](double w) { return -green_function(cavity.x_a, w, cavity).rho; };
  auto [w, v] = boost::math::tools::brent_find_minima(neg_rho, 19.0 * pi - 1.0, 19.0 * pi + 2.0,
                                                      std::numeric_limits<double>::digits / 2);
  (void)v;
  return w;
}

void set_param(Config& cfg, const std::string& key, double value) {
  json j = json::parse(config_to_json_text(cfg));
  j.erase("eta_derived");
  static const char* known[] = {"L",  "eta",          "n",           "d",  "x_a",
                                "omega_a",  "gamma",        "omega_c",     "omega_max",
                                "quad_rel_tol", "peak_points", "dt", "t_end",
                                "omega_min_bath", "mode_cut",  "eps_reg"};
  bool ok = false;
  for (const char* k : known) ok = ok || key == k;
  if (!ok) throw CqError(ErrorKind::config, "unknown parameter: " + key);
  j[key] = value;
  cfg = config_from_json_text(j.dump());
}

Config preset(const std::string& name) {
  Config cfg;
  cfg.cavity.L = 1.0;
  cfg.cavity.x_a = 0.5;
  cfg.cavity.mirror_mode = MirrorMode::delta_mirror;
  if (name == "weak" || name == "strong" || name == "multimode") {
    cfg.cavity.eta = 0.1;
    cfg.emitter.gamma = name == "weak" ? 4e-6 : name == "strong" ? 2.5e-3 : 1.44;
  } else if (name == "fig5") {
    cfg.cavity.eta = 0.18;
    cfg.emitter.gamma = 1.44;  // selectable; override via config for 2.5e-3
  } else {
    throw CqError(ErrorKind::config, "unknown preset: " + name);
  }
  // The emitter sits on the 10th LDOS resonance (the maximum near 19*pi, whose
  // exact position depends on the mirror transparency).
  cfg.emitter.omega_a = tune_omega_a(cfg.cavity);
  cfg.emitter.omega_c = 2.0 * cfg.emitter.omega_a;
  cfg.numerics = NumericsConfig{};
  cfg.numerics.omega_min_bath = 0.9 * pi / cfg.cavity.L;
  validate(cfg);
  return cfg;
}

}  // namespace cqed
