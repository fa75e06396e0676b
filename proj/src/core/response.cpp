#include "core/response.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "core/config.hpp"

namespace cqed {

namespace {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

// Exact principal-value moment of the unit hat function against 1/(m - v):
//   psi(m) = PV int_{-1}^{1} (1 - |v|) / (m - v) dv
//          = ln|(m+1)/(m-1)| - m ln(m^2 / |m^2 - 1|)
// evaluated cancellation-free via log1p; psi(0) = 0, psi(+-1) = +-2 ln 2.
double hat_pv_weight(std::int64_t m) {
  if (m == 0) return 0.0;
  const double s = m < 0 ? -1.0 : 1.0;
  const double a = static_cast<double>(m < 0 ? -m : m);
  if (a == 1.0) return s * 2.0 * std::log(2.0);
  return s * (std::log1p(2.0 / (a - 1.0)) + a * std::log1p(-1.0 / (a * a)));
}

// Linear convolution of data (length n) with the hat weights, evaluated at the
// data nodes, via one zero-padded FFT round trip.
std::vector<double> hat_pv_convolve(const std::vector<double>& data) {
  const std::size_t n = data.size();
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;  // >= 2n - 1 keeps the needed outputs alias-free
  const std::size_t nc = m / 2 + 1;
  double* a = fftw_alloc_real(m);
  double* b = fftw_alloc_real(m);
  fftw_complex* fa = fftw_alloc_complex(nc);
  fftw_complex* fb = fftw_alloc_complex(nc);
  std::fill(a, a + m, 0.0);
  std::fill(b, b + m, 0.0);
  std::copy(data.begin(), data.end(), a);
  for (std::size_t i = 0; i < 2 * n - 1; ++i)
    b[i] = hat_pv_weight(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(n - 1));
  fftw_plan pa = fftw_plan_dft_r2c_1d(static_cast<int>(m), a, fa, FFTW_ESTIMATE);
  fftw_plan pb = fftw_plan_dft_r2c_1d(static_cast<int>(m), b, fb, FFTW_ESTIMATE);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < nc; ++i) {
    const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
    const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
    fa[i][0] = re / static_cast<double>(m);
    fa[i][1] = im / static_cast<double>(m);
  }
  fftw_plan pc = fftw_plan_dft_c2r_1d(static_cast<int>(m), fa, a, FFTW_ESTIMATE);
  fftw_execute(pc);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = a[j + n - 1];
  fftw_destroy_plan(pa);
  fftw_destroy_plan(pb);
  fftw_destroy_plan(pc);
  fftw_free(a);
  fftw_free(b);
  fftw_free(fa);
  fftw_free(fb);
  return out;
}

double interp_table(const std::vector<double>& x, const std::vector<double>& y, double v) {
  if (v <= x.front()) return y.front();
  if (v >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (v - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

double pv_integral(const std::function<double(double)>& f, double lo, double hi, double wp,
                   double rel_tol, const std::vector<double>& interior_breaks) {
  if (!(lo < wp && wp < hi))
    throw CqError(ErrorKind::numerics, "pv_integral: pole must lie strictly inside the interval");
  // Symmetric window around the pole: the odd part of the weight cancels and
  // the difference quotient below is a regular integrand.
  const double a = std::min({wp - lo, hi - wp, 0.25});
  const double u_floor = 1e-9 * std::max(1.0, std::abs(wp));
  auto sym = [&](double u) {
    if (u < u_floor) u = u_floor;
    return (f(wp - u) - f(wp + u)) / u;
  };
  double total = gk15::integrate(sym, 0.0, a, 12, rel_tol);

  std::vector<double> cuts{lo, wp - a, wp + a, hi};
  for (double b : interior_breaks)
    if (b > lo && b < hi && std::abs(b - wp) > a) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto reg = [&](double w) { return f(w) / (wp - w); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p0 = cuts[i], p1 = cuts[i + 1];
    if (p1 - p0 < 1e-14) continue;
    if (p0 >= wp - a - 1e-14 && p1 <= wp + a + 1e-14) continue;  // symmetric window
    total += gk15::integrate(reg, p0, p1, 12, rel_tol);
  }
  return total;
}

Response::Response(const Config& cfg, SpectralSource source, int base_n)
    : cfg_(cfg), source_(source) {
  validate(cfg_);
  omega_max_ = cfg_.numerics.omega_max_or_default(cfg_.emitter.omega_a, cfg_.emitter.omega_c);
  if (base_n < 16) throw CqError(ErrorKind::numerics, "Response: base_n too small");
  wg_.resize(base_n);
  Fg_.resize(base_n);
  const double h = omega_max_ / (base_n - 1);
  for (int i = 0; i < base_n; ++i) {
    wg_[i] = i * h;
    Fg_[i] = spectral_value(wg_[i], cfg_.cavity, cfg_.emitter, source_);
  }
  dg_ = hat_pv_convolve(Fg_);
  for (double& d : dg_) d /= pi;
}

double Response::F(double omega) const {
  return spectral_value(omega, cfg_.cavity, cfg_.emitter, source_);
}

double Response::delta_table(double omega) const { return interp_table(wg_, dg_, omega); }

double Response::delta_exact(double omega) const {
  if (!(omega > 0.0 && omega < omega_max_))
    throw CqError(ErrorKind::numerics, "delta_exact: omega must lie in (0, omega_max)");
  std::vector<double> breaks;
  for (double b = pi; b < omega_max_; b += pi) breaks.push_back(b);
  auto f = [&](double w) { return F(w); };
  return pv_integral(f, 0.0, omega_max_, omega, cfg_.numerics.quad_rel_tol, breaks) / pi;
}

double Response::kernel_U(double omega) const {
  const double g = cfg_.emitter.gamma;
  const double Fv = F(omega);
  const double det = omega - cfg_.emitter.omega_a - g * delta_table(omega);
  const double wdt = g * Fv + cfg_.numerics.eps_reg;
  const double den = det * det + wdt * wdt;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return Fv / den;
}

ResonanceSet Response::find_resonances() const {
  if (!res_cached_) {
    res_cache_.clear();
    const double g = cfg_.emitter.gamma;
    const double wa = cfg_.emitter.omega_a;
    if (g == 0.0) {
      Resonance r;
      r.omega_r = wa;
      r.kind = ResonanceKind::resonant;
      res_cache_.push_back(r);
    } else {
      auto hfun = [&](double w) { return (w - wa) / g - interp_table(wg_, dg_, w); };
      std::vector<double> roots;
      double prev = hfun(wg_[1]);
      for (std::size_t i = 2; i < wg_.size(); ++i) {
        const double cur = hfun(wg_[i]);
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
          double lo = wg_[i - 1], hi = wg_[i];
          double flo = prev;
          for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi), fm = hfun(mid);
            if ((flo <= 0.0) == (fm <= 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
      }
      for (double r : roots) {
        Resonance item;
        item.omega_r = r;
        item.width = g * F(r);
        item.height = kernel_U(r);
        // A resonance is suppressed when F has a local maximum within half a
        // resonance width of the root.
        auto suppressed_for = [&](double window) {
          double lo = std::max(r - 0.5 * window, 1e-12);
          double hi = std::min(r + 0.5 * window, omega_max_);
          const int ns = 41;
          int best = 0;
          double bestv = -1.0;
          for (int k = 0; k < ns; ++k) {
            const double w = lo + (hi - lo) * k / (ns - 1);
            const double v = F(w);
            if (v > bestv) {
              bestv = v;
              best = k;
            }
          }
          return best > 0 && best < ns - 1;
        };
        const double window = std::max(item.width, 1e-8);
        const bool sup = suppressed_for(window);
        item.kind = sup ? ResonanceKind::suppressed : ResonanceKind::resonant;
        item.near_threshold = suppressed_for(0.9 * window) != suppressed_for(1.1 * window);
        res_cache_.push_back(item);
      }
      // A lone intersection is always a genuine emission peak: suppression is
      // a competition between neighbouring resonances and needs at least two.
      if (res_cache_.size() == 1) {
        res_cache_[0].kind = ResonanceKind::resonant;
        res_cache_[0].near_threshold = false;
      }
    }
    res_cached_ = true;
  }
  ResonanceSet out;
  out.items = res_cache_;
  return out;
}

BoundStateReport Response::bound_state() const {
  const double wa = cfg_.emitter.omega_a;
  const double g = cfg_.emitter.gamma;
  const double tol = cfg_.numerics.quad_rel_tol;
  const double u_floor = 1e-9;
  auto integral = [&](double shift) {
    // int_0^Omega F(w) / (w + shift) dw, split at the resonance scale pi.
    double total = 0.0;
    auto f = [&](double w) {
      if (w < u_floor) w = u_floor;
      return F(w) / (w + shift);
    };
    for (double p = 0.0; p < omega_max_; p += pi) {
      const double hi = std::min(p + pi, omega_max_);
      total += gk15::integrate(f, p, hi, 12, tol);
      if (hi >= omega_max_) break;
    }
    return total;
  };
  BoundStateReport rep;
  const double I0 = integral(0.0);
  rep.gamma_crit = pi * wa / I0;
  rep.exists = g > rep.gamma_crit;
  if (rep.exists) {
    auto q = [&](double x) { return x + wa - (g / pi) * integral(x); };
    double lo = 0.0, hi = g * I0 / pi;
    double flo = q(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi), fm = q(mid);
      if (std::abs(fm) < 1e-13 || hi - lo < 1e-15 * std::max(1.0, hi)) {
        lo = hi = mid;
        break;
      }
      if ((flo <= 0.0) == (fm <= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    rep.omega_j = 0.5 * (lo + hi);
    rep.residual = q(rep.omega_j);
  }
  return rep;
}

namespace {

// Symmetric graded offsets around a resonance: linear steps (half-width /
// (2 * peak_points)) near the center, growing geometrically until the step
// reaches the background spacing.
void add_window(std::vector<double>& grid, double center, double half_width, int peak_points,
                double bg_spacing, double omega_max) {
  const double step0 = half_width / (2.0 * peak_points);
  const double growth = 10.0 * peak_points;
  const double u_max = std::min(growth * bg_spacing, 2.0 * pi);
  double u = 0.0;
  while (u < u_max) {
    u += std::max(step0, u / growth);
    for (double s : {center - u, center + u})
      if (s > 0.0 && s < omega_max) grid.push_back(s);
  }
  if (center > 0.0 && center < omega_max) grid.push_back(center);
}

// Local maxima of the tabulated spectral function with their half-power
// half-widths; every one of them imprints structure on U that the trace grid
// must resolve.
struct SpectralPeak {
  double omega;
  double half_width;
};

std::vector<SpectralPeak> table_peaks(const std::vector<double>& wg, const std::vector<double>& Fg) {
  double fmax = 0.0;
  for (double v : Fg) fmax = std::max(fmax, v);
  std::vector<SpectralPeak> out;
  for (std::size_t i = 1; i + 1 < Fg.size(); ++i) {
    if (!(Fg[i] >= Fg[i - 1] && Fg[i] > Fg[i + 1])) continue;
    if (Fg[i] < 1e-8 * fmax) continue;
    const double half = 0.5 * Fg[i];
    std::size_t l = i, r = i;
    while (l > 0 && Fg[l] > half) --l;
    while (r + 1 < Fg.size() && Fg[r] > half) ++r;
    const double hw = std::min(wg[i] - wg[l], wg[r] - wg[i]);
    out.push_back({wg[i], std::clamp(hw, 1e-4, 0.5 * pi)});
  }
  return out;
}

std::vector<double> finalize_grid(std::vector<double>& grid) {
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double v : grid)
    if (out.empty() || v - out.back() > 1e-11) out.push_back(v);
  return out;
}

}  // namespace

// Effective half-width of the kernel peak at a resonance root: the bare width
// gamma F is compressed by the local slope of the resonance condition,
// |1 - gamma delta'(omega_r)|.
double Response::root_half_width(double r) const {
  const double g = cfg_.emitter.gamma;
  const double eps = std::max(1e-4, 1e-6 * std::abs(r));
  const double dprime = (delta_table(r + eps) - delta_table(r - eps)) / (2.0 * eps);
  const double slope = std::max(std::abs(1.0 - g * dprime), 1e-3);
  return std::clamp(g * F(r) / slope, 1e-6, 0.5 * pi);
}

std::vector<double> Response::response_grid(double t_end) const {
  const double bg = pi / (4.0 * t_end);
  const auto n_bg = static_cast<std::size_t>(std::ceil(omega_max_ / bg)) + 1;
  std::vector<double> grid;
  grid.reserve(n_bg + 4096);
  for (std::size_t i = 0; i < n_bg; ++i) grid.push_back(std::min(i * bg, omega_max_));
  for (const auto& r : find_resonances().items)
    add_window(grid, r.omega_r, root_half_width(r.omega_r), cfg_.numerics.peak_points, bg,
               omega_max_);
  // Linear windows over every spectral-function peak (peak_points samples per
  // half-width, extent +-10 half-widths).
  for (const auto& pk : table_peaks(wg_, Fg_)) {
    const double step = pk.half_width / cfg_.numerics.peak_points;
    const int nside = 10 * cfg_.numerics.peak_points;
    for (int k = -nside; k <= nside; ++k) {
      const double w = pk.omega + k * step;
      if (w > 0.0 && w < omega_max_) grid.push_back(w);
    }
  }
  return finalize_grid(grid);
}

std::vector<double> Response::quadrature_grid() const {
  const double bg = 5e-4;
  const auto n_bg = static_cast<std::size_t>(std::ceil(omega_max_ / bg)) + 1;
  std::vector<double> grid;
  grid.reserve(n_bg + 8192);
  for (std::size_t i = 0; i < n_bg; ++i) grid.push_back(std::min(i * bg, omega_max_));
  for (const auto& r : find_resonances().items)
    add_window(grid, r.omega_r, root_half_width(r.omega_r), 4 * cfg_.numerics.peak_points, bg,
               omega_max_);
  return finalize_grid(grid);
}

std::vector<double> Response::spectral_grid() const {
  const double bg = 2e-2;
  const auto n_bg = static_cast<std::size_t>(std::ceil(omega_max_ / bg)) + 1;
  std::vector<double> grid;
  grid.reserve(n_bg + 65536);
  for (std::size_t i = 0; i < n_bg; ++i) grid.push_back(std::min(i * bg, omega_max_));
  for (const auto& pk : table_peaks(wg_, Fg_)) {
    const double step = pk.half_width / (2 * cfg_.numerics.peak_points);
    const int nside = 20 * cfg_.numerics.peak_points;
    for (int k = -nside; k <= nside; ++k) {
      const double w = pk.omega + k * step;
      if (w > 0.0 && w < omega_max_) grid.push_back(w);
    }
  }
  return finalize_grid(grid);
}

ResponseTable Response::build_response(const std::vector<double>& grid) const {
  ResponseTable t;
  t.grid = grid;
  t.gamma = cfg_.emitter.gamma;
  t.delta.reserve(grid.size());
  t.U.reserve(grid.size());
  for (double w : grid) {
    t.delta.push_back(delta_table(w));
    t.U.push_back(kernel_U(w));
  }
  return t;
}

double Response::sum_rule() const {
  const auto grid = quadrature_grid();
  double total = 0.0;
  double prev_w = grid[0], prev_u = kernel_U(prev_w);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double u = kernel_U(grid[i]);
    total += 0.5 * (u + prev_u) * (grid[i] - prev_w);
    prev_w = grid[i];
    prev_u = u;
  }
  return cfg_.emitter.gamma / pi * total;
}

}  // namespace cqed
