// Lamb shift, kernel, resonance finding/classification, bound-state detector.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "core/config.hpp"
#include "core/response.hpp"
#include "doctest.h"

using namespace cqed;

namespace {

// Brute-force excluded-window principal-value oracle for int f(w)/(wp - w) dw:
// midpoint rule skipping a symmetric window of half-width `a` around the
// singularity, Richardson extrapolation in the window size removes the O(a)
// bias.
double brute_pv(const std::function<double(double)>& f, double lo, double hi, double wp) {
  const double h = 2.5e-6;
  // Excluded integral in the symmetric variable u = |w - wp|; skipping the
  // first k_min midpoint panels excludes the window |w - wp| < k_min * h.
  auto excluded = [&](long k_min) {
    double s = 0.0;
    for (long k = k_min;; ++k) {
      const double u = (k + 0.5) * h;
      const bool left = wp - u >= lo, right = wp + u <= hi;
      if (!left && !right) break;
      double t = 0.0;
      if (left) t += f(wp - u);
      if (right) t -= f(wp + u);
      s += t / u;
    }
    return s * h;
  };
  return 2.0 * excluded(800) - excluded(1600);
}

}  // namespace

TEST_CASE("pv_integral matches the brute-force excluded-window oracle") {
  auto f = [](double w) { return std::exp(-0.5 * (w - 5.0) * (w - 5.0)) * (1.0 + 0.1 * w); };
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> pick(1.5, 8.5);
  for (int k = 0; k < 8; ++k) {
    const double wp = pick(rng);
    const double exact = pv_integral(f, 0.0, 10.0, wp, 1e-12);
    const double brute = brute_pv(f, 0.0, 10.0, wp);
    CHECK(std::abs(exact - brute) <= 1e-6 * (std::abs(exact) + 1.0));
  }
}

TEST_CASE("pv_integral: symmetric density around the pole integrates to zero") {
  auto box = [](double w) { return (w > 3.0 && w < 7.0) ? 2.5 : 0.0; };
  CHECK(std::abs(pv_integral(box, 3.0, 7.0, 5.0, 1e-12)) < 1e-9);
  auto zero = [](double) { return 0.0; };
  CHECK(pv_integral(zero, 0.0, 10.0, 4.0, 1e-12) == doctest::Approx(0.0));
}

TEST_CASE("strong preset: three roots, alternating classification, kernel identity") {
  Config cfg = preset("strong");
  Response R(cfg, SpectralSource::green_function, 1 << 20);

  ResonanceSet rs = R.find_resonances();
  REQUIRE(rs.items.size() == 3);
  CHECK(rs.items[0].omega_r == doctest::Approx(59.7180).epsilon(2e-4));
  CHECK(rs.items[1].omega_r == doctest::Approx(60.0139).epsilon(2e-4));
  CHECK(rs.items[2].omega_r == doctest::Approx(60.2547).epsilon(2e-4));
  CHECK(rs.items[0].kind == ResonanceKind::resonant);
  CHECK(rs.items[1].kind == ResonanceKind::suppressed);
  CHECK(rs.items[2].kind == ResonanceKind::resonant);

  const double g = cfg.emitter.gamma;
  const double wa = cfg.emitter.omega_a;
  for (const auto& r : rs.items) {
    // Root condition (omega - omega_a)/gamma = delta(omega).
    CHECK(std::abs((r.omega_r - wa) / g - R.delta_table(r.omega_r)) < 1e-6 * std::abs(wa));
    CHECK(r.width == doctest::Approx(g * R.F(r.omega_r)));
    // At any root the kernel reduces to 1/(gamma^2 F).
    CHECK(r.height == doctest::Approx(1.0 / (g * g * R.F(r.omega_r))).epsilon(1e-5));
    CHECK(R.kernel_U(r.omega_r) == doctest::Approx(r.height).epsilon(1e-9));
  }

  // Resonant entries are local maxima of U within a few widths.
  for (const auto& r : rs.items) {
    if (r.kind != ResonanceKind::resonant) continue;
    const double hw = R.root_half_width(r.omega_r);
    for (int k = -6; k <= 6; ++k) {
      if (k == 0) continue;
      CHECK(R.kernel_U(r.omega_r + 0.5 * k * hw) <= r.height * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("tabulated Lamb shift agrees with the adaptive reference") {
  Config cfg = preset("strong");
  Response R(cfg, SpectralSource::green_function, 1 << 20);
  for (double w : {40.0, 59.5, cfg.emitter.omega_a, 61.0, 150.0}) {
    const double a = R.delta_table(w);
    const double b = R.delta_exact(w);
    CHECK(std::abs(a - b) <= 2e-4 * (std::abs(b) + 1.0));
  }
  // Sign structure: all mass above omega => negative shift at the bottom,
  // positive beyond the support.
  CHECK(R.delta_exact(0.5) < 0.0);
  CHECK(R.delta_exact(R.omega_max() - 50.0) > 0.0);
}

TEST_CASE("weak preset: a single slightly shifted root") {
  Config cfg = preset("weak");
  Response R(cfg, SpectralSource::green_function, 1 << 20);
  ResonanceSet rs = R.find_resonances();
  REQUIRE(rs.items.size() == 1);
  const double wr = rs.items[0].omega_r;
  // Zeroth-order shift; the true fixed point differs by gamma^2 delta delta'
  // (the Lamb-shift slope is steep at the tuned LDOS maximum).
  const double expect = cfg.emitter.omega_a + cfg.emitter.gamma * R.delta_table(cfg.emitter.omega_a);
  CHECK(std::abs(wr - expect) < 1e-5);
  // Exact fixed-point residual.
  CHECK(std::abs(wr - cfg.emitter.omega_a - cfg.emitter.gamma * R.delta_table(wr)) < 1e-9);
  CHECK(rs.items[0].kind == ResonanceKind::resonant);
}

TEST_CASE("gamma = 0 degenerates to a single root at omega_a") {
  Config cfg = preset("weak");
  cfg.emitter.gamma = 0.0;
  Response R(cfg, SpectralSource::green_function, 1 << 19);
  ResonanceSet rs = R.find_resonances();
  REQUIRE(rs.items.size() == 1);
  CHECK(rs.items[0].omega_r == doctest::Approx(cfg.emitter.omega_a));
}

TEST_CASE("multimode preset: many roots with alternating kinds, 2 pi peak spacing") {
  Config cfg = preset("multimode");
  Response R(cfg, SpectralSource::green_function, 1 << 20);
  ResonanceSet rs = R.find_resonances();
  REQUIRE(rs.items.size() > 3);

  // Alternation in the well-coupled band around omega_a.
  const double wa = cfg.emitter.omega_a;
  std::vector<Resonance> band;
  for (const auto& r : rs.items)
    if (std::abs(r.omega_r - wa) < 20.0) band.push_back(r);
  REQUIRE(band.size() >= 5);
  for (std::size_t i = 1; i < band.size(); ++i) CHECK(band[i].kind != band[i - 1].kind);

  std::vector<double> res;
  for (const auto& r : band)
    if (r.kind == ResonanceKind::resonant) res.push_back(r.omega_r);
  REQUIRE(res.size() >= 3);
  for (std::size_t i = 1; i < res.size(); ++i)
    CHECK(res[i] - res[i - 1] == doctest::Approx(2 * pi).epsilon(0.05));
}

TEST_CASE("response grid invariants") {
  Config cfg = preset("strong");
  Response R(cfg, SpectralSource::green_function, 1 << 19);
  const double t_end = 20.0;
  const auto grid = R.response_grid(t_end);
  REQUIRE(grid.size() > 100);
  CHECK(grid.front() >= 0.0);
  CHECK(grid.back() <= R.omega_max() + 1e-9);
  double max_gap = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] > grid[i - 1]);
    max_gap = std::max(max_gap, grid[i] - grid[i - 1]);
  }
  CHECK(max_gap <= pi / (4.0 * t_end) + 1e-12);

  // Every resonance carries >= peak_points samples per half-width.
  for (const auto& r : R.find_resonances().items) {
    const double hw = R.root_half_width(r.omega_r);
    int inside = 0;
    for (double w : grid)
      if (std::abs(w - r.omega_r) <= hw) ++inside;
    CHECK(inside >= cfg.numerics.peak_points);
  }
}

TEST_CASE("sum rule: kernel integral equals the initial amplitude") {
  Config cfg = preset("strong");
  Response R(cfg, SpectralSource::green_function, 1 << 20);
  CHECK(R.sum_rule() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("bound state: critical coupling and pole residual") {
  Config cfg = preset("multimode");
  Response R(cfg, SpectralSource::green_function, 1 << 19);
  BoundStateReport below = R.bound_state();
  CHECK_FALSE(below.exists);
  CHECK(below.gamma_crit > 1.44);
  CHECK(below.gamma_crit == doctest::Approx(3.6251).epsilon(1e-3));

  Config hot = cfg;
  hot.emitter.gamma = 2.0 * below.gamma_crit;
  Response Rh(hot, SpectralSource::green_function, 1 << 19);
  BoundStateReport above = Rh.bound_state();
  REQUIRE(above.exists);
  CHECK(above.omega_j > 0.0);
  // Bisection residual of the pole equation, on the solver's own quadrature.
  CHECK(std::abs(above.residual) <= 1e-10);

  // Residual of the pole condition, via a quadrature independent of the
  // bisection's: trapezoid of F/(omega + omega_j) on the dense base table.
  const auto& wg = Rh.base_grid();
  const auto& Fg = Rh.base_F();
  double integral = 0.0;
  for (std::size_t i = 1; i < wg.size(); ++i) {
    const double fa = Fg[i - 1] / (wg[i - 1] + above.omega_j);
    const double fb = Fg[i] / (wg[i] + above.omega_j);
    integral += 0.5 * (fa + fb) * (wg[i] - wg[i - 1]);
  }
  const double q = above.omega_j + hot.emitter.omega_a - hot.emitter.gamma / pi * integral;
  CHECK(std::abs(q) < 1e-3 * hot.emitter.omega_a);

  Config zero = cfg;
  zero.emitter.gamma = 0.0;
  Response Rz(zero, SpectralSource::green_function, 1 << 19);
  CHECK_FALSE(Rz.bound_state().exists);
}
