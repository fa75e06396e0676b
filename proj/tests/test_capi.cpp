// Exercises the shared-library C interface end to end: lifecycle, the
// two-call capacity protocol, error codes, and numerical spot checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cavityqed.h"
#include "doctest.h"
#include "json.hpp"

namespace {

cq_model* model_from_preset(const char* name, double gamma_override = -1.0) {
  cq_config* cfg = nullptr;
  REQUIRE(cq_config_from_preset(name, &cfg) == CQ_OK);
  if (gamma_override >= 0.0) REQUIRE(cq_config_set(cfg, "gamma", gamma_override) == CQ_OK);
  cq_model* m = nullptr;
  REQUIRE(cq_model_new(cfg, &m) == CQ_OK);
  cq_config_free(cfg);
  return m;
}

}  // namespace

TEST_CASE("version and error strings") {
  CHECK(std::string(cq_version()) == "1.0.0");
  cq_config* cfg = nullptr;
  CHECK(cq_config_from_preset("no_such_preset", &cfg) == CQ_ERR_CONFIG);
  CHECK(std::strlen(cq_last_error()) > 0);
  // A successful call clears the message.
  REQUIRE(cq_config_from_preset("weak", &cfg) == CQ_OK);
  CHECK(std::strlen(cq_last_error()) == 0);
  cq_config_free(cfg);
}

TEST_CASE("config: JSON round-trip, get/set, bad input") {
  cq_config* cfg = nullptr;
  REQUIRE(cq_config_from_preset("strong", &cfg) == CQ_OK);

  double gamma = 0.0;
  REQUIRE(cq_config_get(cfg, "gamma", &gamma) == CQ_OK);
  CHECK(gamma == doctest::Approx(2.5e-3));
  REQUIRE(cq_config_set(cfg, "gamma", 1e-3) == CQ_OK);
  REQUIRE(cq_config_get(cfg, "gamma", &gamma) == CQ_OK);
  CHECK(gamma == doctest::Approx(1e-3));
  CHECK(cq_config_get(cfg, "bogus", &gamma) == CQ_ERR_CONFIG);
  CHECK(cq_config_set(cfg, "gamma", -1.0) == CQ_ERR_CONFIG);

  // Two-call serialization protocol.
  size_t needed = 0;
  CHECK(cq_config_to_json(cfg, nullptr, 0, &needed) == CQ_ERR_CAPACITY);
  REQUIRE(needed > 2);
  std::vector<char> buf(needed);
  REQUIRE(cq_config_to_json(cfg, buf.data(), buf.size(), &needed) == CQ_OK);
  auto j = nlohmann::json::parse(buf.data());
  CHECK(j["gamma"].get<double>() == doctest::Approx(1e-3));

  // The text feeds back through the JSON constructor.
  cq_config* back = nullptr;
  REQUIRE(cq_config_from_json(buf.data(), &back) == CQ_OK);
  double g2 = 0.0;
  REQUIRE(cq_config_get(back, "gamma", &g2) == CQ_OK);
  CHECK(g2 == doctest::Approx(1e-3));
  cq_config_free(back);
  CHECK(cq_config_from_json("{ not json", &back) == CQ_ERR_CONFIG);
  cq_config_free(cfg);
}

TEST_CASE("model: spectral evaluation, resonances, sum rule, analyze") {
  cq_model* m = model_from_preset("strong");

  // F >= 0 on a few frequencies; Green-function and Lamb-shift evaluators run.
  const double omegas[3] = {40.0, 60.0, 80.0};
  double F[3] = {0, 0, 0};
  REQUIRE(cq_spectral_eval(m, omegas, 3, F) == CQ_OK);
  for (double f : F) CHECK(f >= 0.0);
  double re_g = 0.0, im_g = 0.0, rho = 0.0;
  REQUIRE(cq_green_eval(m, 60.0, &re_g, &im_g, &rho) == CQ_OK);
  CHECK(rho > 0.0);
  double d_tab = 0.0, d_ref = 0.0;
  REQUIRE(cq_lamb_shift_table(m, 59.5, &d_tab) == CQ_OK);
  REQUIRE(cq_lamb_shift_exact(m, 59.5, &d_ref) == CQ_OK);
  CHECK(std::abs(d_tab - d_ref) <= 2e-4 * (std::abs(d_ref) + 1.0));
  double delta = 0.0, u = 0.0;
  REQUIRE(cq_kernel_eval(m, omegas, 1, &delta, &u) == CQ_OK);
  CHECK(u >= 0.0);

  // Resonances with the capacity protocol.
  size_t count = 0;
  CHECK(cq_find_resonances(m, nullptr, nullptr, nullptr, nullptr, 0, &count) == CQ_ERR_CAPACITY);
  REQUIRE(count == 3);
  std::vector<double> wr(count), width(count), height(count);
  std::vector<int> kind(count);
  REQUIRE(cq_find_resonances(m, wr.data(), kind.data(), width.data(), height.data(), count,
                             &count) == CQ_OK);
  CHECK(kind[0] == CQ_RESONANT);
  CHECK(kind[1] == CQ_SUPPRESSED);
  CHECK(kind[2] == CQ_RESONANT);
  CHECK(wr[1] == doctest::Approx(60.0139).epsilon(1e-3));

  double sr = 0.0;
  REQUIRE(cq_sum_rule(m, &sr) == CQ_OK);
  CHECK(sr == doctest::Approx(1.0).epsilon(1e-4));

  // Grids via the capacity protocol.
  size_t n_grid = 0;
  CHECK(cq_default_grid(m, CQ_GRID_SPECTRAL, 0.0, nullptr, 0, &n_grid) == CQ_ERR_CAPACITY);
  REQUIRE(n_grid > 100);
  std::vector<double> grid(n_grid);
  REQUIRE(cq_default_grid(m, CQ_GRID_SPECTRAL, 0.0, grid.data(), grid.size(), &n_grid) == CQ_OK);
  for (size_t i = 1; i < n_grid; ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK(cq_default_grid(m, 99, 0.0, grid.data(), grid.size(), &n_grid) == CQ_ERR_CONFIG);

  // Regime report as JSON (no trace requested).
  size_t needed = 0;
  CHECK(cq_analyze(m, nullptr, nullptr, 0, &needed) == CQ_ERR_CAPACITY);
  std::vector<char> buf(needed);
  REQUIRE(cq_analyze(m, nullptr, buf.data(), buf.size(), &needed) == CQ_OK);
  auto j = nlohmann::json::parse(buf.data());
  CHECK(j["regime"] == "strong_single_mode");
  CHECK(j["resonant_count"] == 2);

  // Unknown solver names are a config error.
  size_t nt = 0;
  CHECK(cq_evolve(m, "simpson", 1.0, 1e-3, nullptr, nullptr, nullptr, 0, &nt) == CQ_ERR_CONFIG);
  // A step too coarse for the kernel bandwidth is a numerics error.
  CHECK(cq_evolve(m, "volterra", 1.0, 5e-2, nullptr, nullptr, nullptr, 0, &nt) ==
        CQ_ERR_NUMERICS);
  cq_model_free(m);
}

TEST_CASE("decoupled emitter stays at unit amplitude through the C interface") {
  cq_model* m = model_from_preset("strong", 0.0);
  const size_t cap = 1001;
  std::vector<double> t(cap), re(cap), im(cap);
  for (const char* solver : {"laplace", "volterra"}) {
    size_t count = 0;
    REQUIRE(cq_evolve(m, solver, 1.0, 1e-3, t.data(), re.data(), im.data(), cap, &count) ==
            CQ_OK);
    REQUIRE(count == cap);
    CHECK(t[0] == 0.0);
    CHECK(t[count - 1] == doctest::Approx(1.0));
    for (size_t i = 0; i < count; ++i) {
      CHECK(re[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(im[i]) < 1e-12);
    }
  }
  // Capacity shortfall reports the required count.
  size_t count = 0;
  CHECK(cq_evolve(m, "laplace", 1.0, 1e-3, t.data(), re.data(), im.data(), 10, &count) ==
        CQ_ERR_CAPACITY);
  CHECK(count == cap);
  cq_model_free(m);
}

TEST_CASE("bound-state interface and the above-threshold error code") {
  cq_model* m = model_from_preset("multimode");
  int exists = -1;
  double omega_j = 0.0, gamma_crit = 0.0;
  REQUIRE(cq_bound_state(m, &exists, &omega_j, &gamma_crit) == CQ_OK);
  CHECK(exists == 0);
  CHECK(gamma_crit == doctest::Approx(3.6251).epsilon(1e-3));
  double gc2 = 0.0, integral = 0.0;
  REQUIRE(cq_critical_gamma(m, &gc2, &integral) == CQ_OK);
  CHECK(gc2 == doctest::Approx(gamma_crit));
  CHECK(integral > 0.0);
  cq_model_free(m);

  cq_model* hot = model_from_preset("multimode", 8.0);
  size_t count = 0;
  CHECK(cq_evolve(hot, "laplace", 1.0, 1e-3, nullptr, nullptr, nullptr, 0, &count) ==
        CQ_ERR_BOUND_STATE);
  CHECK(std::strlen(cq_last_error()) > 0);
  cq_model_free(hot);
}

TEST_CASE("system-and-bath evolution through the C interface") {
  cq_model* m = model_from_preset("multimode");
  size_t count = 0;
  int mode_count = 0;
  CHECK(cq_evolve_bath(m, 1.0, 1e-3, nullptr, nullptr, nullptr, nullptr, 0, &count,
                       &mode_count) == CQ_ERR_CAPACITY);
  REQUIRE(count == 1001);
  CHECK(mode_count > 50);
  std::vector<double> t(count), re(count), im(count), norm(count);
  REQUIRE(cq_evolve_bath(m, 1.0, 1e-3, t.data(), re.data(), im.data(), norm.data(), count,
                         &count, &mode_count) == CQ_OK);
  CHECK(norm[0] == doctest::Approx(1.0));
  for (size_t i = 0; i < count; ++i) CHECK(norm[i] <= 1.0 + 1e-2);
  cq_model_free(m);
}

TEST_CASE("sweep rows arrive as JSON and record per-point failures") {
  cq_config* base = nullptr;
  REQUIRE(cq_config_from_preset("weak", &base) == CQ_OK);
  REQUIRE(cq_config_set(base, "t_end", 1.0) == CQ_OK);
  const double values[1] = {-1.0};  // invalid coupling: recorded, not fatal
  size_t needed = 0;
  CHECK(cq_sweep(base, "gamma", values, 1, "laplace", nullptr, 0, &needed) == CQ_ERR_CAPACITY);
  std::vector<char> buf(needed);
  REQUIRE(cq_sweep(base, "gamma", values, 1, "laplace", buf.data(), buf.size(), &needed) ==
          CQ_OK);
  auto rows = nlohmann::json::parse(buf.data());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["param_value"].get<double>() == doctest::Approx(-1.0));
  CHECK_FALSE(rows[0]["error"].get<std::string>().empty());
  cq_config_free(base);
}
