#include "core/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace cqed {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CqError(ErrorKind::io, "cannot open for writing: " + path);
  return out;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n') c = ';';
  return out;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_spectrum_csv(const std::string& path, const SpectralTable& table) {
  auto out = open_out(path);
  out << "omega,F\n";
  for (std::size_t i = 0; i < table.grid.size(); ++i)
    out << format_g17(table.grid[i]) << ',' << format_g17(table.F[i]) << '\n';
}

void write_green_csv(const std::string& path, const std::vector<GreenEvaluation>& evals) {
  auto out = open_out(path);
  out << "omega,reG,imG,rho\n";
  for (const auto& e : evals)
    out << format_g17(e.omega) << ',' << format_g17(e.G.real()) << ',' << format_g17(e.G.imag())
        << ',' << format_g17(e.rho) << '\n';
}

void write_kernel_csv(const std::string& path, const ResponseTable& table) {
  auto out = open_out(path);
  out << "omega,delta,U\n";
  for (std::size_t i = 0; i < table.grid.size(); ++i)
    out << format_g17(table.grid[i]) << ',' << format_g17(table.delta[i]) << ','
        << format_g17(table.U[i]) << '\n';
}

void write_trace_csv(const std::string& path, const AmplitudeTrace& trace) {
  auto out = open_out(path);
  out << "t,re_c,im_c,abs2_c,solver\n";
  const char* name = solver_name(trace.solver_tag);
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << format_g17(trace.times[i]) << ',' << format_g17(trace.c[i].real()) << ','
        << format_g17(trace.c[i].imag()) << ',' << format_g17(std::norm(trace.c[i])) << ','
        << name << '\n';
}

void write_bath_csv(const std::string& path, const BathTrace& trace) {
  auto out = open_out(path);
  out << "t,abs2_c,norm\n";
  for (std::size_t i = 0; i < trace.trace.times.size(); ++i)
    out << format_g17(trace.trace.times[i]) << ',' << format_g17(std::norm(trace.trace.c[i]))
        << ',' << format_g17(trace.norm[i]) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "param_value,regime,resonance_count,purcell_rate,rabi_freq,first_revival_t,"
         "first_revival_h\n";
  for (const auto& r : rows) {
    const std::string label = r.error.empty() ? r.regime : "error: " + sanitize(r.error);
    out << format_g17(r.value) << ',' << label << ',' << r.resonance_count << ','
        << format_g17(r.purcell_rate) << ',' << format_g17(r.rabi_freq) << ','
        << format_g17(r.first_revival_t) << ',' << format_g17(r.first_revival_h) << '\n';
  }
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::json j;
  j["command"] = m.command;
  j["config"] = nlohmann::json::parse(m.config_json);
  j["outputs"] = m.outputs;
  j["wall_time_sec"] = m.wall_time_sec;
  j["version"] = m.version;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace cqed
