// End-to-end checks of the command-line front end: artifacts, manifest,
// exit-code contract. Each case shells out to the installed binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cq_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("spectrum: CSV artifact plus manifest") {
  const auto dir = fresh_dir("spectrum");
  REQUIRE(run("spectrum --preset strong --out " + dir.string()) == 0);
  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(csv.rfind("omega,F\n", 0) == 0);
  // Every density sample is non-negative.
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);  // header
  int rows = 0;
  while (std::getline(ss, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stod(line.substr(comma + 1)) >= 0.0);
    ++rows;
  }
  CHECK(rows > 1000);
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "spectrum");
  CHECK(manifest["outputs"].size() == 1);
  CHECK(manifest["outputs"][0].get<std::string>().find("spectrum.csv") != std::string::npos);
  CHECK(manifest["config"]["gamma"].get<double>() == doctest::Approx(2.5e-3));
}

TEST_CASE("the emission spectrum does not depend on the coupling strength") {
  const auto a = fresh_dir("spec_g1");
  const auto b = fresh_dir("spec_g2");
  REQUIRE(run("spectrum --preset weak --out " + a.string()) == 0);
  REQUIRE(run("spectrum --preset weak --set gamma=2.5e-3 --out " + b.string()) == 0);
  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
}

TEST_CASE("exit-code contract") {
  const auto dir = fresh_dir("codes");
  const std::string out = " --out " + dir.string();
  CHECK(run("spectrum --preset no_such" + out) == 2);          // unknown preset
  CHECK(run("spectrum" + out) == 2);                           // neither --preset nor --config
  CHECK(run("spectrum --config /nonexistent.json" + out) == 2);
  CHECK(run("spectrum --preset weak --config x.json" + out) == 2);  // mutually exclusive
  CHECK(run("spectrum --preset weak --set gamma=-1" + out) == 2);   // invalid value
  // Step too coarse for the memory-kernel bandwidth.
  CHECK(run("evolve --preset strong --solver volterra --set dt=0.01" + out) == 3);
  // Inversion refuses to run above the critical coupling.
  CHECK(run("evolve --preset multimode --set gamma=8 --solver laplace" + out) == 4);
}

TEST_CASE("evolve: decoupled emitter trace is flat") {
  const auto dir = fresh_dir("evolve0");
  REQUIRE(run("evolve --preset strong --set gamma=0 --set t_end=1 --solver laplace --out " +
              dir.string()) == 0);
  const std::string csv = slurp(dir / "trace_laplace.csv");
  CHECK(csv.rfind("t,re_c,im_c,abs2_c,solver\n", 0) == 0);
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  int rows = 0;
  while (std::getline(ss, line)) {
    std::stringstream ls(line);
    std::string t, re, im, abs2;
    std::getline(ls, t, ',');
    std::getline(ls, re, ',');
    std::getline(ls, im, ',');
    std::getline(ls, abs2, ',');
    CHECK(std::stod(abs2) == doctest::Approx(1.0).epsilon(1e-10));
    ++rows;
  }
  CHECK(rows == 1001);
}

TEST_CASE("analyze: regime report lands in report.json") {
  const auto dir = fresh_dir("analyze");
  REQUIRE(run("analyze --preset strong --set t_end=2 --solver laplace --out " + dir.string()) ==
          0);
  const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep["regime"] == "strong_single_mode");
  CHECK(rep["resonance_count"].get<int>() == 3);
  CHECK(rep["rabi_frequency"].get<double>() == doctest::Approx(0.5478).epsilon(1e-3));
}

TEST_CASE("sweep: a failing value is recorded as a row, not a crash") {
  const auto dir = fresh_dir("sweep");
  REQUIRE(run("sweep --preset weak --set t_end=1 --param gamma --values=-1.0 --out " +
              dir.string()) == 0);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv.find("error") != std::string::npos);
  const auto rows = nlohmann::json::parse(slurp(dir / "sweep.json"));
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0]["error"].get<std::string>().empty());
}

TEST_CASE("critical-gamma writes its JSON record") {
  const auto dir = fresh_dir("crit");
  REQUIRE(run("critical-gamma --preset multimode --out " + dir.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "critical_gamma.json"));
  CHECK(j["gamma_crit"].get<double>() == doctest::Approx(3.6251).epsilon(1e-3));
  CHECK(j["f_over_omega_integral"].get<double>() > 0.0);
}
