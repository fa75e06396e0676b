#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "core/filon.hpp"

namespace cqed {

namespace {

std::vector<double> uniform_times(double t_end, double dt) {
  if (dt <= 0.0 || t_end <= 0.0)
    throw CqError(ErrorKind::numerics, "evolve: dt and t_end must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = i * dt;
  return t;
}

AmplitudeTrace trivial_trace(double t_end, double dt, SolverTag tag) {
  AmplitudeTrace tr;
  tr.times = uniform_times(t_end, dt);
  tr.c.assign(tr.times.size(), cplx(1.0, 0.0));
  tr.solver_tag = tag;
  return tr;
}

}  // namespace

AmplitudeTrace evolve_laplace(const Response& R, double t_end, double dt) {
  if (R.config().emitter.gamma == 0.0) return trivial_trace(t_end, dt, SolverTag::laplace);
  // Above critical coupling part of the amplitude sits in a bound-state pole
  // that the real-frequency inversion cannot represent.
  if (R.bound_state().exists)
    throw CqError(ErrorKind::bound_state,
                  "bound state above critical coupling: the spectral inversion is incomplete; "
                  "use the volterra solver");
  const auto grid = R.response_grid(t_end);
  std::vector<double> U(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) U[i] = R.kernel_U(grid[i]);
  AmplitudeTrace tr;
  tr.times = uniform_times(t_end, dt);
  tr.solver_tag = SolverTag::laplace;
  tr.c = filon_transform(grid, U, tr.times);
  const double wa = R.config().emitter.omega_a;
  const double scale = R.config().emitter.gamma / pi;
  for (std::size_t n = 0; n < tr.times.size(); ++n)
    tr.c[n] *= scale * std::polar(1.0, wa * tr.times[n]);
  return tr;
}

MemoryKernel build_memory_kernel(const Response& R, double t_end, double dt) {
  const double wa = R.config().emitter.omega_a;
  const double band = R.omega_max() - wa;
  const double dt_max = 2.0 * pi / (4.0 * band);
  if (dt > dt_max)
    throw CqError(ErrorKind::numerics,
                  "volterra: dt does not resolve the kernel bandwidth; need dt <= " +
                      std::to_string(dt_max));
  // Frequency grid dense enough that piecewise-linear interpolation of F is
  // faithful; Filon handles the oscillation exactly.
  const auto sg = R.spectral_grid();
  std::vector<double> wg(sg.size()), fg(sg.size());
  for (std::size_t i = 0; i < sg.size(); ++i) {
    wg[i] = sg[i] - wa;  // shift to the rotating frame of the emitter
    fg[i] = R.F(sg[i]);
  }
  MemoryKernel K;
  K.tau = uniform_times(t_end, dt);
  K.K = filon_transform(wg, fg, K.tau);
  const double scale = R.config().emitter.gamma / pi;
  for (auto& v : K.K) v *= scale;
  return K;
}

AmplitudeTrace evolve_volterra(const Response& R, double t_end, double dt) {
  if (R.config().emitter.gamma == 0.0) return trivial_trace(t_end, dt, SolverTag::volterra);
  const MemoryKernel mk = build_memory_kernel(R, t_end, dt);
  const auto& K = mk.K;
  const std::size_t n = mk.tau.size();
  AmplitudeTrace tr;
  tr.times = mk.tau;
  tr.solver_tag = SolverTag::volterra;
  tr.c.assign(n, cplx(0.0, 0.0));
  tr.c[0] = 1.0;
  std::vector<cplx> I(n, cplx(0.0, 0.0));  // trapezoid of the memory integral
  const cplx denom = 1.0 + 0.25 * dt * dt * K[0];
  for (std::size_t m = 1; m < n; ++m) {
    cplx s = 0.5 * K[m] * tr.c[0];
    for (std::size_t j = 1; j < m; ++j) s += K[m - j] * tr.c[j];
    s *= dt;
    const cplx cm = (tr.c[m - 1] - 0.5 * dt * (s + I[m - 1])) / denom;
    tr.c[m] = cm;
    I[m] = s + 0.5 * dt * K[0] * cm;
  }
  return tr;
}

CrossCheck cross_check(const AmplitudeTrace& a, const AmplitudeTrace& b) {
  if (a.times.size() != b.times.size())
    throw CqError(ErrorKind::numerics, "cross_check: traces have different time grids");
  CrossCheck out;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-9)
      throw CqError(ErrorKind::numerics, "cross_check: traces have different time grids");
    out.max_abs_diff = std::max(out.max_abs_diff, std::abs(a.c[i] - b.c[i]));
    out.max_abs2_diff =
        std::max(out.max_abs2_diff, std::abs(std::norm(a.c[i]) - std::norm(b.c[i])));
  }
  return out;
}

}  // namespace cqed
