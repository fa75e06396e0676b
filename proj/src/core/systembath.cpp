#include "core/systembath.hpp"

#include <algorithm>
#include <cmath>

#include "core/config.hpp"
#include "core/response.hpp"

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

}  // namespace

ModeBasis build_modes(const Config& cfg) {
  const double L = cfg.cavity.L;
  const double wa = cfg.emitter.omega_a, wc = cfg.emitter.omega_c;
  const double wmax = cfg.numerics.omega_max_or_default(wa, wc);
  const double mu = std::sqrt(0.5 * cfg.emitter.gamma);
  ModeBasis m;
  for (int lam = 1;; ++lam) {
    const double w = pi * (2.0 * lam - 1.0) / L;
    if (w > wmax) break;
    const double f = std::exp(-(w - wa) * (w - wa) / (4.0 * wc * wc));
    if (f * f < cfg.numerics.mode_cut) continue;
    m.omega.push_back(w);
    m.g.push_back(cplx(0.0, mu * std::sqrt(w / L) * f));
    m.v.push_back((lam % 2 == 0 ? 1.0 : -1.0) * std::sqrt(w) * f);
  }
  if (m.omega.empty()) throw CqError(ErrorKind::numerics, "build_modes: no modes retained");
  return m;
}

double bath_leakage_density(double omega, double eta, double L) {
  return 1.0 / (pi * L * omega * (1.0 + eta * eta * omega * omega));
}

double bath_pv_integral(double wp, double eta, double L, double wmin, double rel_tol) {
  if (!(wp > wmin)) throw CqError(ErrorKind::numerics, "bath_pv_integral: need wp > wmin");
  const double w_up = std::max(1e4, 100.0 * wp);
  auto h = [&](double w) { return bath_leakage_density(w, eta, L); };
  std::vector<double> breaks;
  for (double b = 2.0 * wp; b < w_up; b *= 4.0) breaks.push_back(b);
  // pv_integral uses the (wp - w) weight; P(wp) is defined with (w - wp).
  double total = -pv_integral(h, wmin, w_up, wp, rel_tol, breaks);
  // Asymptotic tail of h(w)/(w - wp) ~ (1/(pi L eta^2)) (1/w^4)(1 + wp/w).
  total += (1.0 / (pi * L * eta * eta)) *
           (1.0 / (3.0 * w_up * w_up * w_up) + wp / (4.0 * w_up * w_up * w_up * w_up));
  return total;
}

double bath_pv_integral_closed(double wp, double eta, double L, double wmin) {
  // Partial fractions of 1/(w (1 + eta^2 w^2)(w - wp)); the symmetric log term
  // evaluates the principal value, the remainder integrates in closed form.
  const double s = 1.0 + eta * eta * wp * wp;
  const double a = -1.0 / wp;
  const double b = 1.0 / (wp * s);
  const double c = eta * eta * eta * eta * wp / s;
  const double d = -eta * eta / s;
  const double at_inf = (c / (2.0 * eta * eta)) * std::log(eta * eta) + (d / eta) * (0.5 * pi);
  const double at_min = a * std::log(wmin) + b * std::log(std::abs(wmin - wp)) +
                        (c / (2.0 * eta * eta)) * std::log1p(eta * eta * wmin * wmin) +
                        (d / eta) * std::atan(eta * wmin);
  return (at_inf - at_min) / (pi * L);
}

std::vector<std::vector<cplx>> damping_matrix(const Config& cfg, const ModeBasis& modes,
                                              bool include_principal_value) {
  const double eta = cfg.cavity.eta_eff();
  const double L = cfg.cavity.L;
  const double wmin = cfg.numerics.omega_min_bath;
  const std::size_t M = modes.omega.size();
  std::vector<cplx> col(M);
  for (std::size_t j = 0; j < M; ++j) {
    const double w = modes.omega[j];
    const double re = -pi * bath_leakage_density(w, eta, L);
    const double im = include_principal_value
                          ? bath_pv_integral(w, eta, L, wmin, cfg.numerics.quad_rel_tol)
                          : 0.0;
    col[j] = cplx(re, im);
  }
  std::vector<std::vector<cplx>> G(M, std::vector<cplx>(M));
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) G[i][j] = modes.v[i] * modes.v[j] * col[j];
  return G;
}

BathTrace evolve_bath(const Config& cfg, double t_end, double dt) {
  validate(cfg);
  const ModeBasis modes = build_modes(cfg);
  const auto G = damping_matrix(cfg, modes);
  const double wa = cfg.emitter.omega_a;
  const std::size_t M = modes.omega.size();
  double max_det = 0.0;
  for (double w : modes.omega) max_det = std::max(max_det, std::abs(w - wa));
  if (dt * max_det > 2.8)
    throw CqError(ErrorKind::numerics,
                  "evolve_bath: dt outside the RK4 stability limit; need dt <= " +
                      std::to_string(2.8 / max_det));

  // Dense generator in the rotating frame, row-major (M+1)^2.
  const std::size_t n = M + 1;
  std::vector<cplx> A(n * n, cplx(0.0, 0.0));
  for (std::size_t l = 0; l < M; ++l) {
    A[l + 1] = cplx(0.0, -1.0) * modes.g[l];
    A[(l + 1) * n] = cplx(0.0, -1.0) * std::conj(modes.g[l]);
    for (std::size_t m = 0; m < M; ++m) A[(l + 1) * n + (m + 1)] = G[l][m];
    A[(l + 1) * n + (l + 1)] += cplx(0.0, -(modes.omega[l] - wa));
  }
  auto matvec = [&](const std::vector<cplx>& y, std::vector<cplx>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc(0.0, 0.0);
      const cplx* row = &A[i * n];
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * y[j];
      out[i] = acc;
    }
  };

  BathTrace bt;
  bt.mode_count = static_cast<int>(M);
  bt.trace.solver_tag = SolverTag::systembath;
  bt.trace.times = uniform_times(t_end, dt);
  const std::size_t nt = bt.trace.times.size();
  bt.trace.c.resize(nt);
  bt.norm.resize(nt);

  std::vector<cplx> y(n, cplx(0.0, 0.0)), k1(n), k2(n), k3(n), k4(n), tmp(n);
  y[0] = 1.0;
  auto record = [&](std::size_t idx) {
    bt.trace.c[idx] = y[0];
    double s = 0.0;
    for (const cplx& v : y) s += std::norm(v);
    bt.norm[idx] = s;
  };
  record(0);
  for (std::size_t step = 1; step < nt; ++step) {
    matvec(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    matvec(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    matvec(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    matvec(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(step);
  }
  return bt;
}

namespace {

// phi(delta, u) = (e^{-i delta u} - 1) / delta, continuous through delta = 0:
// phi = -i u e^{-i theta / 2} sinc(theta / 2) with theta = delta * u.
cplx phi_stable(double delta, double u) {
  const double half = 0.5 * delta * u;
  const double snc = std::abs(half) < 1e-6 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return cplx(0.0, -u) * std::polar(1.0, -half) * snc;
}

}  // namespace

AmplitudeTrace evolve_bath_volterra(const Config& cfg, double t_end, double dt) {
  validate(cfg);
  const ModeBasis modes = build_modes(cfg);
  const auto G = damping_matrix(cfg, modes);
  const double wa = cfg.emitter.omega_a;
  const std::size_t M = modes.omega.size();
  const std::vector<double> times = uniform_times(t_end, dt);
  const std::size_t nt = times.size();

  std::vector<double> det(M);
  for (std::size_t l = 0; l < M; ++l) det[l] = modes.omega[l] - wa;

  // phi_l(k dt) and rotating phases u_l(t_n) = e^{-i det_l t_n}, tabulated.
  std::vector<std::vector<cplx>> phi(M, std::vector<cplx>(nt));
  std::vector<std::vector<cplx>> rot(M, std::vector<cplx>(nt));
  for (std::size_t l = 0; l < M; ++l)
    for (std::size_t k = 0; k < nt; ++k) {
      phi[l][k] = phi_stable(det[l], times[k]);
      rot[l][k] = std::polar(1.0, -det[l] * times[k]);
    }

  std::vector<cplx> c(nt, cplx(0.0, 0.0));
  c[0] = 1.0;
  std::vector<std::vector<cplx>> q(M, std::vector<cplx>(nt, cplx(0.0, 0.0)));
  std::vector<cplx> clam(M, cplx(0.0, 0.0)), clam_new(M);
  std::vector<cplx> Aint(M, cplx(0.0, 0.0));           // running int of conj(u_l) c
  std::vector<std::vector<cplx>> Cint(M, std::vector<cplx>(M, cplx(0.0, 0.0)));

  // q_l(0): c_lambda(0) = 0 so d_l(0) = 0 and q_l(0) = i |g_l|^2.
  for (std::size_t l = 0; l < M; ++l) q[l][0] = cplx(0.0, std::norm(modes.g[l]));

  for (std::size_t nstep = 1; nstep < nt; ++nstep) {
    // Emitter amplitude: the convolution weight at tau = t_n vanishes
    // (phi(0) = 0), so c(t_n) depends on history only.
    cplx acc(0.0, 0.0);
    for (std::size_t l = 0; l < M; ++l) {
      cplx conv = 0.5 * phi[l][nstep] * q[l][0];
      const auto& ph = phi[l];
      const auto& ql = q[l];
      for (std::size_t m = 1; m < nstep; ++m) conv += ph[nstep - m] * ql[m];
      acc += conv;
    }
    c[nstep] = 1.0 - dt * acc;

    // Mode amplitudes: trapezoid endpoints at t_n are implicit through the
    // cross-damping integrals; a short fixed-point iteration converges since
    // the off-diagonal weight is O(dt).
    std::vector<cplx> base(M);
    for (std::size_t l = 0; l < M; ++l) {
      Aint[l] += 0.5 * dt *
                 (std::conj(rot[l][nstep - 1]) * c[nstep - 1] + std::conj(rot[l][nstep]) * c[nstep]);
      cplx b = cplx(0.0, -1.0) * std::conj(modes.g[l]) * Aint[l];
      for (std::size_t m = 0; m < M; ++m) {
        Cint[l][m] += 0.5 * dt * rot[m][nstep - 1] * std::conj(rot[l][nstep - 1]) * clam[m];
        b += G[l][m] * Cint[l][m];
      }
      base[l] = b;
    }
    clam_new = clam;  // predictor: previous step values
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<cplx> next(M);
      for (std::size_t l = 0; l < M; ++l) {
        cplx b = base[l];
        for (std::size_t m = 0; m < M; ++m)
          b += G[l][m] * 0.5 * dt * rot[m][nstep] * std::conj(rot[l][nstep]) * clam_new[m];
        next[l] = b;
      }
      clam_new = std::move(next);
    }
    for (std::size_t l = 0; l < M; ++l)
      for (std::size_t m = 0; m < M; ++m)
        Cint[l][m] += 0.5 * dt * rot[m][nstep] * std::conj(rot[l][nstep]) * clam_new[m];
    clam = clam_new;

    // Commit q_l(t_n) = i |g_l|^2 c - g_l sum_m Gamma_{l,m} u_m c_m.
    for (std::size_t l = 0; l < M; ++l) {
      cplx d(0.0, 0.0);
      for (std::size_t m = 0; m < M; ++m) d += G[l][m] * rot[m][nstep] * clam[m];
      q[l][nstep] = cplx(0.0, std::norm(modes.g[l])) * c[nstep] - modes.g[l] * d;
    }
  }

  AmplitudeTrace tr;
  tr.times = times;
  tr.c = std::move(c);
  tr.solver_tag = SolverTag::systembath;
  return tr;
}

}  // namespace cqed
