#include "core/spectral.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace cqed {

cplx mirror_reflection(double omega, double eta) {
  const cplx iwe(0.0, omega * eta);
  return iwe / (2.0 - iwe);
}

namespace {

// Reflection amplitude of a dielectric slab (index n, width d) surrounded by
// vacuum, for incidence from either side, via the 2x2 transfer matrix that
// propagates the (right-going, left-going) amplitude pair across the layer.
cplx slab_reflection(double omega, double n, double d) {
  // Interface matrix for index m1 -> m2 (continuity of u and u').
  auto interface = [](double m1, double m2) {
    const double a = 0.5 * (1.0 + m1 / m2), b = 0.5 * (1.0 - m1 / m2);
    return std::array<cplx, 4>{a, b, b, a};
  };
  auto mul = [](const std::array<cplx, 4>& A, const std::array<cplx, 4>& B) {
    return std::array<cplx, 4>{A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
                               A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
  };
  const cplx ph = std::exp(cplx(0.0, n * omega * d));
  const std::array<cplx, 4> prop{ph, 0.0, 0.0, 1.0 / ph};
  const auto M = mul(interface(n, 1.0), mul(prop, interface(1.0, n)));
  // Unit wave incident from the left, nothing incoming from the right:
  // 0 = M21 + M22 * r.
  return -M[2] / M[3];
}

cplx inner_reflection(double omega, const CavityConfig& cavity) {
  if (cavity.mirror_mode == MirrorMode::delta_mirror) return mirror_reflection(omega, cavity.eta);
  return slab_reflection(omega, cavity.n, cavity.d);
}

}  // namespace

GreenEvaluation green_function(double x_a, double omega, const CavityConfig& cavity) {
  if (omega <= 0.0) throw CqError(ErrorKind::numerics, "green_function: omega must be > 0");
  if (x_a <= 0.0 || x_a >= cavity.L)
    throw CqError(ErrorKind::numerics, "green_function: x_a must lie in (0, L)");
  const double L = cavity.L;
  const cplx r = inner_reflection(omega, cavity);
  // Left-outgoing solution u_L = e^{-iwx} + r e^{iwx} (mirror at x = 0) and
  // right-outgoing u_R = e^{iwx} + r e^{2iwL} e^{-iwx} (mirror at x = L),
  // joined at x_a through their Wronskian W = 2iw (1 - r^2 e^{2iwL}).
  const cplx eix = std::exp(cplx(0.0, omega * x_a));
  const cplx eiLx = std::exp(cplx(0.0, omega * (L - x_a)));
  const cplx eiL = std::exp(cplx(0.0, omega * L));
  const cplx uL = (1.0 + r * eix * eix) / eix;
  const cplx uR = eix * (1.0 + r * eiLx * eiLx);
  const cplx W = cplx(0.0, 2.0 * omega) * (1.0 - r * r * eiL * eiL);
  GreenEvaluation out;
  out.omega = omega;
  out.G = -uL * uR / W;
  out.rho = (2.0 * omega / pi) * std::abs(out.G.imag());
  return out;
}

double coupling_strength(double omega, const EmitterConfig& emitter) {
  if (omega < 0.0) throw CqError(ErrorKind::numerics, "coupling_strength: omega must be >= 0");
  const double x = (omega - emitter.omega_a) / emitter.omega_c;
  return 0.5 * pi * omega * std::exp(-0.5 * x * x);
}

namespace {

double closed_form_value(double omega, const CavityConfig& cavity, const EmitterConfig& emitter) {
  if (std::abs(cavity.x_a - 0.5 * cavity.L) > 1e-12 * cavity.L)
    throw CqError(ErrorKind::config, "closed_form spectral source requires x_a = L/2");
  const double x = (omega - emitter.omega_a) / emitter.omega_c;
  const double env = std::exp(-0.5 * x * x);
  const double L = cavity.L;
  if (cavity.mirror_mode == MirrorMode::finite_mirror) {
    const double n = cavity.n, d = cavity.d, n2 = n * n;
    const double den = (n2 + 1.0) * (n2 + 1.0) - (n2 - 1.0) * (n2 - 1.0) * std::cos(2.0 * omega * n * d) +
                       2.0 * (n2 * n2 - 1.0) * std::cos(omega * L) * std::pow(std::sin(omega * n * d), 2) +
                       2.0 * n * (n2 - 1.0) * std::sin(omega * L) * std::sin(2.0 * omega * n * d);
    return n2 * omega * env / den;  // = (1/2) * closed form
  }
  // Delta-mirror limit (n -> inf, d -> 0 at fixed eta = n^2 d) of the same
  // expression.
  const double eta = cavity.eta;
  const double den = 4.0 + 2.0 * omega * omega * eta * eta * (1.0 + std::cos(omega * L)) +
                     4.0 * omega * eta * std::sin(omega * L);
  return omega * env / den;  // = (1/2) * closed form
}

}  // namespace

double spectral_value(double omega, const CavityConfig& cavity, const EmitterConfig& emitter,
                      SpectralSource source) {
  if (omega <= 0.0) return 0.0;
  if (source == SpectralSource::closed_form) return closed_form_value(omega, cavity, emitter);
  return 0.5 * green_function(cavity.x_a, omega, cavity).rho * coupling_strength(omega, emitter);
}

SpectralTable spectral_function(const std::vector<double>& grid, const CavityConfig& cavity,
                                const EmitterConfig& emitter, SpectralSource source) {
  SpectralTable t;
  t.source = source;
  t.grid = grid;
  t.F.resize(grid.size());
  int sign_pos = 0, sign_neg = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    t.F[i] = spectral_value(grid[i], cavity, emitter, source);
    if (source == SpectralSource::green_function && grid[i] > 0.0) {
      const double im = green_function(cavity.x_a, grid[i], cavity).G.imag();
      (im >= 0.0 ? sign_pos : sign_neg)++;
    }
  }
  if (sign_pos > 0 && sign_neg > 0)
    std::fprintf(stderr, "spectral: warning: Im G changes sign over the grid (%d+/%d-)\n",
                 sign_pos, sign_neg);
  return t;
}

}  // namespace cqed
