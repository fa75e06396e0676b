#include "core/filon.hpp"

#include <cmath>

namespace cqed {

namespace {

// Panel moments against e^{-i theta s} for s in [0, 1]:
//   E0(theta) = int_0^1 e^{-i theta s} ds         = (1 - e^{-i theta}) / (i theta)
//   E1(theta) = int_0^1 s e^{-i theta s} ds       = ((1 + i theta) e^{-i theta} - 1) / theta^2
// with Taylor fallbacks where the closed forms lose precision.
inline void panel_moments(double theta, const cplx& q, cplx& E0, cplx& E1) {
  if (std::abs(theta) < 1e-4) {
    const double t2 = theta * theta;
    E0 = cplx(1.0 - t2 / 6.0, -theta / 2.0 + theta * t2 / 24.0);
    E1 = cplx(0.5 - t2 / 8.0, -theta / 3.0 + theta * t2 / 30.0);
  } else {
    const cplx it(0.0, theta);
    E0 = (1.0 - q) / it;
    E1 = ((1.0 + it) * q - 1.0) / (theta * theta);
  }
}

}  // namespace

std::vector<cplx> filon_transform(const std::vector<double>& grid, const std::vector<double>& f,
                                  const std::vector<double>& times) {
  const std::size_t np = grid.size();
  const std::size_t nt = times.size();
  std::vector<cplx> out(nt, cplx(0.0, 0.0));
  if (np < 2 || nt == 0) return out;
  const double dt = nt > 1 ? times[1] - times[0] : 0.0;
  for (std::size_t i = 0; i + 1 < np; ++i) {
    const double x0 = grid[i], D = grid[i + 1] - grid[i];
    const double f0 = f[i], df = f[i + 1] - f[i];
    const cplx q_step = std::polar(1.0, -D * dt);
    const cplx p_step = std::polar(1.0, -x0 * dt);
    cplx q = std::polar(1.0, -D * times[0]);
    cplx p = std::polar(1.0, -x0 * times[0]);
    for (std::size_t n = 0; n < nt; ++n) {
      if ((n & 0xfff) == 0 && n > 0) {  // periodically reset phase drift
        q = std::polar(1.0, -D * times[n]);
        p = std::polar(1.0, -x0 * times[n]);
      }
      cplx E0, E1;
      panel_moments(D * times[n], q, E0, E1);
      out[n] += p * (D * (f0 * E0 + df * E1));
      q *= q_step;
      p *= p_step;
    }
  }
  return out;
}

}  // namespace cqed
