// Command-line front end. Talks to the toolkit exclusively through the public
// C interface; persists results as 17-significant-digit CSV plus a JSON run
// manifest per invocation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cavityqed.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int api_code, const std::string& context) {
  int exit_code = 3;
  switch (api_code) {
    case CQ_ERR_CONFIG: exit_code = 2; break;
    case CQ_ERR_NUMERICS: exit_code = 3; break;
    case CQ_ERR_BOUND_STATE: exit_code = 4; break;
    case CQ_ERR_IO: exit_code = 2; break;
    default: exit_code = 3; break;
  }
  throw CliError{exit_code, context + ": " + cq_last_error()};
}

void check(int rc, const std::string& context) {
  if (rc != CQ_OK) die(rc, context);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CliError{2, "cannot open for writing: " + path};
  return out;
}

std::string get_json_string(int (*fn)(const cq_model*, const char*, char*, size_t, size_t*),
                            const cq_model* m, const char* arg, const std::string& context) {
  size_t needed = 0;
  (void)fn(m, arg, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  check(fn(m, arg, buf.data(), buf.size(), &needed), context);
  buf.resize(needed - 1);
  return buf;
}

std::string config_json_text(const cq_config* cfg) {
  size_t needed = 0;
  (void)cq_config_to_json(cfg, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  check(cq_config_to_json(cfg, buf.data(), buf.size(), &needed), "config serialization");
  buf.resize(needed - 1);
  return buf;
}

struct Shared {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  std::vector<std::string> sets;  // KEY=VALUE overrides
};

cq_config* make_config(const Shared& s) {
  cq_config* cfg = nullptr;
  if (!s.preset.empty() && !s.config_path.empty())
    throw CliError{2, "--preset and --config are mutually exclusive"};
  if (!s.preset.empty())
    check(cq_config_from_preset(s.preset.c_str(), &cfg), "preset");
  else if (!s.config_path.empty())
    check(cq_config_load(s.config_path.c_str(), &cfg), "config load");
  else
    throw CliError{2, "one of --preset or --config is required"};
  for (const auto& kv : s.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{2, "--set expects KEY=VALUE, got: " + kv};
    check(cq_config_set(cfg, kv.substr(0, eq).c_str(), std::stod(kv.substr(eq + 1))),
          "--set " + kv);
  }
  return cfg;
}

struct Manifest {
  std::string command;
  json config;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const std::string& out_dir) const {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["outputs"] = outputs;
    j["wall_time_sec"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["version"] = cq_version();
    auto f = open_out(out_dir + "/manifest.json");
    f << j.dump(2) << '\n';
  }
};

std::vector<double> fetch_grid(const cq_model* m, int which, double t_end) {
  size_t count = 0;
  (void)cq_default_grid(m, which, t_end, nullptr, 0, &count);
  std::vector<double> g(count);
  check(cq_default_grid(m, which, t_end, g.data(), g.size(), &count), "grid");
  return g;
}

struct Trace {
  std::vector<double> t, re, im;
};

Trace fetch_trace(const cq_model* m, const std::string& solver, double t_end, double dt) {
  size_t count = 0;
  const int rc = cq_evolve(m, solver.c_str(), t_end, dt, nullptr, nullptr, nullptr, 0, &count);
  if (rc != CQ_ERR_CAPACITY && rc != CQ_OK) die(rc, "evolve (" + solver + ")");
  Trace tr;
  tr.t.resize(count);
  tr.re.resize(count);
  tr.im.resize(count);
  check(cq_evolve(m, solver.c_str(), t_end, dt, tr.t.data(), tr.re.data(), tr.im.data(), count,
                  &count),
        "evolve (" + solver + ")");
  return tr;
}

void write_trace_csv(const std::string& path, const Trace& tr, const std::string& solver) {
  auto out = open_out(path);
  out << "t,re_c,im_c,abs2_c,solver\n";
  for (size_t i = 0; i < tr.t.size(); ++i)
    out << g17(tr.t[i]) << ',' << g17(tr.re[i]) << ',' << g17(tr.im[i]) << ','
        << g17(tr.re[i] * tr.re[i] + tr.im[i] * tr.im[i]) << ',' << solver << '\n';
}

std::vector<double> abs2_of(const Trace& tr) {
  std::vector<double> p(tr.t.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = tr.re[i] * tr.re[i] + tr.im[i] * tr.im[i];
  return p;
}

struct Peak {
  double t, h;
};

std::vector<Peak> trace_peaks(const Trace& tr, double min_prominence = 0.02) {
  const auto p = abs2_of(tr);
  std::vector<Peak> out;
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    if (!(p[i] >= p[i - 1] && p[i] > p[i + 1])) continue;
    double m_left = p[i];
    for (size_t j = i; j-- > 0;) {
      if (p[j] > p[i]) break;
      m_left = std::min(m_left, p[j]);
    }
    double m_right = p[i];
    for (size_t j = i + 1; j < p.size(); ++j) {
      if (p[j] > p[i]) break;
      m_right = std::min(m_right, p[j]);
    }
    if (p[i] - std::max(m_left, m_right) < min_prominence) continue;
    out.push_back({tr.t[i], p[i]});
  }
  return out;
}

double num_param(const json& cfg, const char* key, double fallback) {
  return cfg.contains(key) ? cfg[key].get<double>() : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-cavity emitter decay toolkit"};
  app.require_subcommand(1);

  Shared shared;
  std::string solver = "laplace";
  std::string param;
  std::string values_csv;

  auto add_shared = [&](CLI::App* cmd) {
    cmd->add_option("--config", shared.config_path, "JSON config file");
    cmd->add_option("--preset", shared.preset, "preset name (weak|strong|multimode|fig5)");
    cmd->add_option("--out", shared.out_dir, "output directory (default .)");
    cmd->add_option("--set", shared.sets, "override a config key, KEY=VALUE (repeatable)");
  };

  auto* c_spectrum = app.add_subcommand("spectrum", "emit F(omega) table");
  auto* c_lamb = app.add_subcommand("lamb", "emit delta(omega) table");
  auto* c_kernel = app.add_subcommand("kernel", "emit delta(omega) and U(omega) table");
  auto* c_res = app.add_subcommand("resonances", "emit resonance records");
  auto* c_evolve = app.add_subcommand("evolve", "compute |c(t)|^2 trace(s)");
  auto* c_analyze = app.add_subcommand("analyze", "regime report");
  auto* c_sweep = app.add_subcommand("sweep", "one-parameter sweep");
  auto* c_crit = app.add_subcommand("critical-gamma", "critical coupling strength");
  for (auto* c : {c_spectrum, c_lamb, c_kernel, c_res, c_evolve, c_analyze, c_sweep, c_crit})
    add_shared(c);
  c_evolve->add_option("--solver", solver, "laplace|volterra|systembath|all");
  c_analyze->add_option("--solver", solver, "laplace|volterra|systembath");
  c_sweep->add_option("--solver", solver, "laplace|volterra|systembath");
  c_sweep->add_option("--param", param, "parameter to sweep")->required();
  c_sweep->add_option("--values", values_csv, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  cq_config* cfg = nullptr;
  cq_model* model = nullptr;
  try {
    cfg = make_config(shared);
    const json cfg_json = json::parse(config_json_text(cfg));
    const double t_end = num_param(cfg_json, "t_end", 20.0);
    const double dt = num_param(cfg_json, "dt", 1e-3);

    Manifest manifest;
    manifest.config = cfg_json;
    const std::string& dir = shared.out_dir;

    auto need_model = [&]() {
      if (model == nullptr) check(cq_model_new(cfg, &model), "model");
      return model;
    };

    if (app.got_subcommand(c_spectrum)) {
      manifest.command = "spectrum";
      const auto grid = fetch_grid(need_model(), CQ_GRID_SPECTRAL, t_end);
      std::vector<double> F(grid.size());
      check(cq_spectral_eval(model, grid.data(), grid.size(), F.data()), "spectral");
      auto out = open_out(dir + "/spectrum.csv");
      out << "omega,F\n";
      for (size_t i = 0; i < grid.size(); ++i) out << g17(grid[i]) << ',' << g17(F[i]) << '\n';
      manifest.outputs.push_back(dir + "/spectrum.csv");
    } else if (app.got_subcommand(c_lamb) || app.got_subcommand(c_kernel)) {
      const bool with_u = app.got_subcommand(c_kernel);
      manifest.command = with_u ? "kernel" : "lamb";
      const auto grid = fetch_grid(need_model(), CQ_GRID_RESPONSE, t_end);
      std::vector<double> delta(grid.size()), U(grid.size());
      check(cq_kernel_eval(model, grid.data(), grid.size(), delta.data(), U.data()), "kernel");
      const std::string path = dir + (with_u ? "/kernel.csv" : "/lamb.csv");
      auto out = open_out(path);
      out << (with_u ? "omega,delta,U\n" : "omega,delta\n");
      for (size_t i = 0; i < grid.size(); ++i) {
        out << g17(grid[i]) << ',' << g17(delta[i]);
        if (with_u) out << ',' << g17(U[i]);
        out << '\n';
      }
      manifest.outputs.push_back(path);
    } else if (app.got_subcommand(c_res)) {
      manifest.command = "resonances";
      size_t count = 0;
      (void)cq_find_resonances(need_model(), nullptr, nullptr, nullptr, nullptr, 0, &count);
      std::vector<double> wr(count), width(count), height(count);
      std::vector<int> kind(count);
      check(cq_find_resonances(model, wr.data(), kind.data(), width.data(), height.data(), count,
                               &count),
            "resonances");
      json arr = json::array();
      for (size_t i = 0; i < count; ++i) {
        json r;
        r["omega_r"] = wr[i];
        r["kind"] = kind[i] == CQ_RESONANT ? "resonant" : "suppressed";
        r["width"] = width[i];
        r["height"] = height[i];
        arr.push_back(r);
      }
      auto out = open_out(dir + "/resonances.json");
      out << arr.dump(2) << '\n';
      manifest.outputs.push_back(dir + "/resonances.json");
    } else if (app.got_subcommand(c_evolve)) {
      manifest.command = "evolve --solver " + solver;
      std::vector<std::string> names =
          solver == "all" ? std::vector<std::string>{"laplace", "volterra", "systembath"}
                          : std::vector<std::string>{solver};
      std::vector<Trace> traces;
      for (const auto& name : names) {
        const Trace tr = fetch_trace(need_model(), name, t_end, dt);
        const std::string path = dir + "/trace_" + name + ".csv";
        write_trace_csv(path, tr, name);
        manifest.outputs.push_back(path);
        traces.push_back(tr);
        if (name == "systembath") {
          size_t count = tr.t.size();
          std::vector<double> t(count), re(count), im(count), norm(count);
          int modes = 0;
          check(cq_evolve_bath(model, t_end, dt, t.data(), re.data(), im.data(), norm.data(),
                               count, &count, &modes),
                "systembath");
          auto out = open_out(dir + "/bath.csv");
          out << "t,abs2_c,norm\n";
          for (size_t i = 0; i < count; ++i)
            out << g17(t[i]) << ',' << g17(re[i] * re[i] + im[i] * im[i]) << ',' << g17(norm[i])
                << '\n';
          manifest.outputs.push_back(dir + "/bath.csv");
        }
      }
      if (solver == "all") {
        json cross;
        for (size_t a = 0; a < names.size(); ++a)
          for (size_t b = a + 1; b < names.size(); ++b) {
            double sup = 0.0;
            for (size_t i = 0; i < traces[a].t.size(); ++i) {
              const double dre = traces[a].re[i] - traces[b].re[i];
              const double dim = traces[a].im[i] - traces[b].im[i];
              sup = std::max(sup, std::sqrt(dre * dre + dim * dim));
            }
            cross["sup_norm"][names[a] + "_vs_" + names[b]] = sup;
          }
        for (size_t a = 0; a < names.size(); ++a) {
          json pk = json::array();
          for (const auto& p : trace_peaks(traces[a])) {
            json e;
            e["t"] = p.t;
            e["h"] = p.h;
            pk.push_back(e);
          }
          cross["peaks"][names[a]] = pk;
        }
        auto out = open_out(dir + "/crosscheck.json");
        out << cross.dump(2) << '\n';
        manifest.outputs.push_back(dir + "/crosscheck.json");
      }
    } else if (app.got_subcommand(c_analyze)) {
      manifest.command = "analyze --solver " + solver;
      const std::string report =
          get_json_string(cq_analyze, need_model(), solver.c_str(), "analyze");
      auto out = open_out(dir + "/report.json");
      out << report;
      manifest.outputs.push_back(dir + "/report.json");
    } else if (app.got_subcommand(c_sweep)) {
      manifest.command = "sweep --param " + param + " --values " + values_csv;
      std::vector<double> values;
      std::string item;
      for (std::stringstream ss(values_csv); std::getline(ss, item, ',');)
        values.push_back(std::stod(item));
      size_t needed = 0;
      (void)cq_sweep(cfg, param.c_str(), values.data(), values.size(), solver.c_str(), nullptr, 0,
                     &needed);
      std::string rows_text(needed, '\0');
      check(cq_sweep(cfg, param.c_str(), values.data(), values.size(), solver.c_str(),
                     rows_text.data(), rows_text.size(), &needed),
            "sweep");
      rows_text.resize(needed - 1);
      const json rows = json::parse(rows_text);
      auto out = open_out(dir + "/sweep.csv");
      out << "param_value,regime,resonance_count,purcell_rate,rabi_freq,first_revival_t,"
             "first_revival_h\n";
      for (const auto& r : rows) {
        const std::string err = r["error"].get<std::string>();
        std::string label = err.empty() ? r["regime"].get<std::string>() : "error: " + err;
        for (char& ch : label)
          if (ch == ',' || ch == '\n') ch = ';';
        out << g17(r["param_value"].get<double>()) << ',' << label << ','
            << r["resonance_count"].get<int>() << ',' << g17(r["purcell_rate"].get<double>())
            << ',' << g17(r["rabi_freq"].get<double>()) << ','
            << g17(r["first_revival_t"].get<double>()) << ','
            << g17(r["first_revival_h"].get<double>()) << '\n';
      }
      manifest.outputs.push_back(dir + "/sweep.csv");
      auto jout = open_out(dir + "/sweep.json");
      jout << rows.dump(2) << '\n';
      manifest.outputs.push_back(dir + "/sweep.json");
    } else if (app.got_subcommand(c_crit)) {
      manifest.command = "critical-gamma";
      double gamma_crit = 0.0, integral = 0.0;
      check(cq_critical_gamma(need_model(), &gamma_crit, &integral), "critical-gamma");
      std::printf("gamma_crit = %s  (int F/omega domega = %s)\n", g17(gamma_crit).c_str(),
                  g17(integral).c_str());
      json j;
      j["gamma_crit"] = gamma_crit;
      j["f_over_omega_integral"] = integral;
      auto out = open_out(dir + "/critical_gamma.json");
      out << j.dump(2) << '\n';
      manifest.outputs.push_back(dir + "/critical_gamma.json");
    }

    manifest.emit(dir);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    cq_model_free(model);
    cq_config_free(cfg);
    return e.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    cq_model_free(model);
    cq_config_free(cfg);
    return 2;
  }
  cq_model_free(model);
  cq_config_free(cfg);
  return 0;
}
