#include "cavityqed.h"

#include <cstring>
#include <string>

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/csvio.hpp"
#include "core/dynamics.hpp"
#include "core/response.hpp"
#include "core/spectral.hpp"
#include "core/systembath.hpp"
#include "json.hpp"

struct cq_config {
  cqed::Config cfg;
};

struct cq_model {
  explicit cq_model(const cqed::Config& c) : resp(c) {}
  cqed::Response resp;
};

namespace {

thread_local std::string g_last_error;

int kind_code(cqed::ErrorKind k) {
  switch (k) {
    case cqed::ErrorKind::config: return CQ_ERR_CONFIG;
    case cqed::ErrorKind::numerics: return CQ_ERR_NUMERICS;
    case cqed::ErrorKind::bound_state: return CQ_ERR_BOUND_STATE;
    default: return CQ_ERR_IO;
  }
}

template <typename Fn>
int wrap(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const cqed::CqError& ex) {
    g_last_error = ex.what();
    return kind_code(ex.kind());
  } catch (const std::exception& ex) {
    g_last_error = ex.what();
    return CQ_ERR_NUMERICS;
  }
}

int fail(int code, const char* msg) {
  g_last_error = msg;
  return code;
}

int fill_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed != nullptr) *needed = s.size() + 1;
  if (buf == nullptr || cap < s.size() + 1) return fail(CQ_ERR_CAPACITY, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return CQ_OK;
}

cqed::SolverTag parse_solver(const char* name) {
  const std::string s = name == nullptr ? "" : name;
  if (s == "laplace") return cqed::SolverTag::laplace;
  if (s == "volterra") return cqed::SolverTag::volterra;
  if (s == "systembath") return cqed::SolverTag::systembath;
  throw cqed::CqError(cqed::ErrorKind::config, "unknown solver: " + s);
}

nlohmann::json report_json(const cqed::AnalysisReport& rep) {
  nlohmann::json j;
  j["regime"] = cqed::regime_name(rep.regime);
  j["resonance_count"] = rep.resonance_count;
  j["resonant_count"] = rep.resonant_count;
  j["purcell_rate"] = rep.purcell_rate;
  j["lamb_shift_at_omega_a"] = rep.lamb_shift;
  j["rabi_frequency"] = rep.rabi_freq;
  auto times = nlohmann::json::array(), heights = nlohmann::json::array();
  for (const auto& r : rep.revivals) {
    times.push_back(r.t);
    heights.push_back(r.height);
  }
  j["revival_times"] = times;
  j["revival_heights"] = heights;
  j["first_revival_t"] = rep.first_revival_t;
  j["first_revival_h"] = rep.first_revival_h;
  return j;
}

}  // namespace

extern "C" {

const char* cq_version(void) { return cqed::kVersion; }

const char* cq_last_error(void) { return g_last_error.c_str(); }

int cq_config_from_preset(const char* name, cq_config** out) {
  return wrap([&]() -> int {
    if (name == nullptr || out == nullptr)
      return fail(CQ_ERR_CONFIG, "null argument");
    *out = new cq_config{cqed::preset(name)};
    return CQ_OK;
  });
}

int cq_config_from_json(const char* json_text, cq_config** out) {
  return wrap([&]() -> int {
    if (json_text == nullptr || out == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *out = new cq_config{cqed::config_from_json_text(json_text)};
    return CQ_OK;
  });
}

int cq_config_load(const char* path, cq_config** out) {
  return wrap([&]() -> int {
    if (path == nullptr || out == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *out = new cq_config{cqed::load_config(path)};
    return CQ_OK;
  });
}

int cq_config_save(const cq_config* cfg, const char* path) {
  return wrap([&]() -> int {
    if (cfg == nullptr || path == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    cqed::save_config(cfg->cfg, path);
    return CQ_OK;
  });
}

int cq_config_to_json(const cq_config* cfg, char* buf, size_t cap, size_t* needed) {
  return wrap([&]() -> int {
    if (cfg == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    return fill_string(cqed::config_to_json_text(cfg->cfg), buf, cap, needed);
  });
}

int cq_config_set(cq_config* cfg, const char* key, double value) {
  return wrap([&]() -> int {
    if (cfg == nullptr || key == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    cqed::set_param(cfg->cfg, key, value);
    return CQ_OK;
  });
}

int cq_config_get(const cq_config* cfg, const char* key, double* out) {
  return wrap([&]() -> int {
    if (cfg == nullptr || key == nullptr || out == nullptr)
      return fail(CQ_ERR_CONFIG, "null argument");
    const auto j = nlohmann::json::parse(cqed::config_to_json_text(cfg->cfg));
    if (!j.contains(key) || !j[key].is_number())
      return fail(CQ_ERR_CONFIG, "unknown parameter");
    *out = j[key].get<double>();
    return CQ_OK;
  });
}

void cq_config_free(cq_config* cfg) { delete cfg; }

int cq_model_new(const cq_config* cfg, cq_model** out) {
  return wrap([&]() -> int {
    if (cfg == nullptr || out == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *out = new cq_model(cfg->cfg);
    return CQ_OK;
  });
}

void cq_model_free(cq_model* m) { delete m; }

int cq_spectral_eval(const cq_model* m, const double* omega, size_t n, double* f_out) {
  return wrap([&]() -> int {
    if (m == nullptr || omega == nullptr || f_out == nullptr)
      return fail(CQ_ERR_CONFIG, "null argument");
    for (size_t i = 0; i < n; ++i) f_out[i] = m->resp.F(omega[i]);
    return CQ_OK;
  });
}

int cq_green_eval(const cq_model* m, double omega, double* re_g, double* im_g, double* rho) {
  return wrap([&]() -> int {
    if (m == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const auto e = cqed::green_function(m->resp.config().cavity.x_a, omega,
                                        m->resp.config().cavity);
    if (re_g != nullptr) *re_g = e.G.real();
    if (im_g != nullptr) *im_g = e.G.imag();
    if (rho != nullptr) *rho = e.rho;
    return CQ_OK;
  });
}

int cq_lamb_shift_table(const cq_model* m, double omega, double* delta) {
  return wrap([&]() -> int {
    if (m == nullptr || delta == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *delta = m->resp.delta_table(omega);
    return CQ_OK;
  });
}

int cq_lamb_shift_exact(const cq_model* m, double omega, double* delta) {
  return wrap([&]() -> int {
    if (m == nullptr || delta == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *delta = m->resp.delta_exact(omega);
    return CQ_OK;
  });
}

int cq_kernel_eval(const cq_model* m, const double* omega, size_t n, double* delta_out,
                   double* u_out) {
  return wrap([&]() -> int {
    if (m == nullptr || omega == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    for (size_t i = 0; i < n; ++i) {
      if (delta_out != nullptr) delta_out[i] = m->resp.delta_table(omega[i]);
      if (u_out != nullptr) u_out[i] = m->resp.kernel_U(omega[i]);
    }
    return CQ_OK;
  });
}

int cq_default_grid(const cq_model* m, int which, double t_end, double* buf, size_t cap,
                    size_t* count) {
  return wrap([&]() -> int {
    if (m == nullptr || count == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    std::vector<double> g;
    switch (which) {
      case CQ_GRID_SPECTRAL: g = m->resp.spectral_grid(); break;
      case CQ_GRID_RESPONSE: g = m->resp.response_grid(t_end); break;
      case CQ_GRID_QUADRATURE: g = m->resp.quadrature_grid(); break;
      default: return fail(CQ_ERR_CONFIG, "unknown grid selector");
    }
    *count = g.size();
    if (buf == nullptr || cap < g.size()) return fail(CQ_ERR_CAPACITY, "buffer too small");
    std::memcpy(buf, g.data(), g.size() * sizeof(double));
    return CQ_OK;
  });
}

int cq_sum_rule(const cq_model* m, double* value) {
  return wrap([&]() -> int {
    if (m == nullptr || value == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    *value = m->resp.sum_rule();
    return CQ_OK;
  });
}

int cq_find_resonances(const cq_model* m, double* omega_r, int* kind, double* width,
                       double* height, size_t cap, size_t* count) {
  return wrap([&]() -> int {
    if (m == nullptr || count == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const auto items = m->resp.find_resonances().items;
    *count = items.size();
    if (cap < items.size()) return fail(CQ_ERR_CAPACITY, "buffer too small");
    for (size_t i = 0; i < items.size(); ++i) {
      if (omega_r != nullptr) omega_r[i] = items[i].omega_r;
      if (kind != nullptr)
        kind[i] = items[i].kind == cqed::ResonanceKind::resonant ? CQ_RESONANT : CQ_SUPPRESSED;
      if (width != nullptr) width[i] = items[i].width;
      if (height != nullptr) height[i] = items[i].height;
    }
    return CQ_OK;
  });
}

int cq_bound_state(const cq_model* m, int* exists, double* omega_j, double* gamma_crit) {
  return wrap([&]() -> int {
    if (m == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const auto rep = m->resp.bound_state();
    if (exists != nullptr) *exists = rep.exists ? 1 : 0;
    if (omega_j != nullptr) *omega_j = rep.omega_j;
    if (gamma_crit != nullptr) *gamma_crit = rep.gamma_crit;
    return CQ_OK;
  });
}

int cq_critical_gamma(const cq_model* m, double* gamma_crit, double* f_over_omega_integral) {
  return wrap([&]() -> int {
    if (m == nullptr || gamma_crit == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const auto rep = m->resp.bound_state();
    *gamma_crit = rep.gamma_crit;
    if (f_over_omega_integral != nullptr)
      *f_over_omega_integral = cqed::pi * m->resp.config().emitter.omega_a / rep.gamma_crit;
    return CQ_OK;
  });
}

int cq_evolve(const cq_model* m, const char* solver, double t_end, double dt, double* t,
              double* re_c, double* im_c, size_t cap, size_t* count) {
  return wrap([&]() -> int {
    if (m == nullptr || count == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const cqed::SolverTag tag = parse_solver(solver);
    cqed::AmplitudeTrace tr;
    switch (tag) {
      case cqed::SolverTag::laplace: tr = cqed::evolve_laplace(m->resp, t_end, dt); break;
      case cqed::SolverTag::volterra: tr = cqed::evolve_volterra(m->resp, t_end, dt); break;
      case cqed::SolverTag::systembath:
        tr = cqed::evolve_bath(m->resp.config(), t_end, dt).trace;
        break;
    }
    *count = tr.times.size();
    if (cap < tr.times.size()) return fail(CQ_ERR_CAPACITY, "buffer too small");
    for (size_t i = 0; i < tr.times.size(); ++i) {
      if (t != nullptr) t[i] = tr.times[i];
      if (re_c != nullptr) re_c[i] = tr.c[i].real();
      if (im_c != nullptr) im_c[i] = tr.c[i].imag();
    }
    return CQ_OK;
  });
}

int cq_evolve_bath(const cq_model* m, double t_end, double dt, double* t, double* re_c,
                   double* im_c, double* norm, size_t cap, size_t* count, int* mode_count) {
  return wrap([&]() -> int {
    if (m == nullptr || count == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    const auto bt = cqed::evolve_bath(m->resp.config(), t_end, dt);
    *count = bt.trace.times.size();
    if (mode_count != nullptr) *mode_count = bt.mode_count;
    if (cap < bt.trace.times.size()) return fail(CQ_ERR_CAPACITY, "buffer too small");
    for (size_t i = 0; i < bt.trace.times.size(); ++i) {
      if (t != nullptr) t[i] = bt.trace.times[i];
      if (re_c != nullptr) re_c[i] = bt.trace.c[i].real();
      if (im_c != nullptr) im_c[i] = bt.trace.c[i].imag();
      if (norm != nullptr) norm[i] = bt.norm[i];
    }
    return CQ_OK;
  });
}

int cq_analyze(const cq_model* m, const char* solver, char* buf, size_t cap, size_t* needed) {
  return wrap([&]() -> int {
    if (m == nullptr) return fail(CQ_ERR_CONFIG, "null argument");
    cqed::AnalysisReport rep;
    if (solver != nullptr) {
      const auto& num = m->resp.config().numerics;
      cqed::AmplitudeTrace tr;
      switch (parse_solver(solver)) {
        case cqed::SolverTag::laplace:
          tr = cqed::evolve_laplace(m->resp, num.t_end, num.dt);
          break;
        case cqed::SolverTag::volterra:
          tr = cqed::evolve_volterra(m->resp, num.t_end, num.dt);
          break;
        case cqed::SolverTag::systembath:
          tr = cqed::evolve_bath(m->resp.config(), num.t_end, num.dt).trace;
          break;
      }
      rep = cqed::analyze(m->resp, &tr);
    } else {
      rep = cqed::analyze(m->resp);
    }
    return fill_string(report_json(rep).dump(2) + "\n", buf, cap, needed);
  });
}

int cq_sweep(const cq_config* base, const char* param, const double* values, size_t n_values,
             const char* solver, char* buf, size_t cap, size_t* needed) {
  return wrap([&]() -> int {
    if (base == nullptr || param == nullptr || values == nullptr)
      return fail(CQ_ERR_CONFIG, "null argument");
    const auto rows = cqed::sweep(base->cfg, param,
                                  std::vector<double>(values, values + n_values),
                                  parse_solver(solver));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j;
      j["param_value"] = r.value;
      j["regime"] = r.regime;
      j["resonance_count"] = r.resonance_count;
      j["purcell_rate"] = r.purcell_rate;
      j["rabi_freq"] = r.rabi_freq;
      j["first_revival_t"] = r.first_revival_t;
      j["first_revival_h"] = r.first_revival_h;
      j["error"] = r.error;
      arr.push_back(j);
    }
    return fill_string(arr.dump(2) + "\n", buf, cap, needed);
  });
}

}  // extern "C"
