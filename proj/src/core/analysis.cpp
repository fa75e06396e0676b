#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "core/config.hpp"
#include "core/dynamics.hpp"
#include "core/systembath.hpp"

namespace cqed {

namespace {

std::vector<double> population(const AmplitudeTrace& trace) {
  std::vector<double> p(trace.c.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(trace.c[i]);
  return p;
}

}  // namespace

FitResult fit_decay(const AmplitudeTrace& trace, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw CqError(ErrorKind::numerics, "fit_decay: empty window");
  std::vector<double> ts, ys;
  FitResult out;
  double prev_p = -1.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double p = std::norm(trace.c[i]);
    if (p <= 0.0) throw CqError(ErrorKind::numerics, "fit_decay: population vanished in window");
    if (prev_p >= 0.0 && p > prev_p * (1.0 + 1e-12)) out.monotone = false;
    prev_p = p;
    ts.push_back(t);
    ys.push_back(std::log(p));
  }
  if (ts.size() < 2) throw CqError(ErrorKind::numerics, "fit_decay: fewer than 2 samples in window");
  const double n = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
    stt += ts[i] * ts[i];
    sty += ts[i] * ys[i];
  }
  const double denom = n * stt - st * st;
  if (denom <= 0.0) throw CqError(ErrorKind::numerics, "fit_decay: degenerate time samples");
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  out.rate = -slope;
  double ss = 0.0, ymin = ys[0], ymax = ys[0];
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (intercept + slope * ts[i]);
    ss += r * r;
    ymin = std::min(ymin, ys[i]);
    ymax = std::max(ymax, ys[i]);
  }
  out.rel_residual = std::sqrt(ss / n) / std::max(ymax - ymin, 1e-300);
  return out;
}

std::vector<Revival> find_revivals(const AmplitudeTrace& trace, double min_prominence) {
  const auto p = population(trace);
  std::vector<Revival> out;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (!(p[i] >= p[i - 1] && p[i] > p[i + 1])) continue;
    // Prominence: drop to the lowest point on each side before reaching a
    // higher value (or the trace edge).
    double m_left = p[i];
    for (std::size_t j = i; j-- > 0;) {
      if (p[j] > p[i]) break;
      m_left = std::min(m_left, p[j]);
    }
    double m_right = p[i];
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[j] > p[i]) break;
      m_right = std::min(m_right, p[j]);
    }
    const double prom = p[i] - std::max(m_left, m_right);
    if (prom < min_prominence) continue;
    out.push_back(Revival{trace.times[i], p[i], prom});
  }
  return out;
}

AnalysisReport analyze(const Response& R, const AmplitudeTrace* trace) {
  AnalysisReport rep;
  const auto res = R.find_resonances().items;
  rep.resonance_count = static_cast<int>(res.size());
  std::vector<double> resonant;
  for (const auto& r : res)
    if (r.kind == ResonanceKind::resonant) resonant.push_back(r.omega_r);
  rep.resonant_count = static_cast<int>(resonant.size());
  const auto& em = R.config().emitter;
  rep.purcell_rate = 2.0 * em.gamma * R.F(em.omega_a);
  rep.lamb_shift = em.gamma * R.delta_table(em.omega_a);
  rep.rabi_freq = std::sqrt(2.0 * em.omega_a * em.gamma);
  if (rep.resonant_count >= 3) {
    rep.regime = Regime::multimode_strong;
  } else if (rep.resonant_count == 2 &&
             std::abs(resonant[0] - em.omega_a) < 2.0 * pi &&
             std::abs(resonant[1] - em.omega_a) < 2.0 * pi) {
    rep.regime = Regime::strong_single_mode;
  } else if (rep.resonant_count == 2) {
    rep.regime = Regime::multimode_strong;
  } else {
    rep.regime = Regime::weak;
  }
  if (trace != nullptr) {
    rep.revivals = find_revivals(*trace);
    if (!rep.revivals.empty()) {
      rep.first_revival_t = rep.revivals.front().t;
      rep.first_revival_h = rep.revivals.front().height;
    }
  }
  return rep;
}

PeakComparison compare_traces(const AmplitudeTrace& a, const AmplitudeTrace& b,
                              double min_prominence, double match_window) {
  const auto pa = find_revivals(a, min_prominence);
  const auto pb = find_revivals(b, min_prominence);
  PeakComparison out;
  std::vector<bool> used(pb.size(), false);
  for (const auto& peak : pa) {
    int best = -1;
    double best_d = match_window;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(pb[j].t - peak.t);
      if (d <= best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) {
      ++out.unmatched;
      continue;
    }
    used[best] = true;
    PeakPair pr{peak.t, pb[best].t, peak.height, pb[best].height};
    out.pairs.push_back(pr);
    out.max_time_offset = std::max(out.max_time_offset, std::abs(pr.t_a - pr.t_b));
    if (pr.h_b > 0.0)
      out.max_height_ratio_dev =
          std::max(out.max_height_ratio_dev, std::abs(pr.h_a / pr.h_b - 1.0));
  }
  for (bool u : used)
    if (!u) ++out.unmatched;
  return out;
}

std::vector<SweepRow> sweep(const Config& base, const std::string& param,
                            const std::vector<double>& values, SolverTag solver, int base_n) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      Config cfg = base;
      set_param(cfg, param, v);
      const double t_end = cfg.numerics.t_end, dt = cfg.numerics.dt;
      Response R(cfg, SpectralSource::green_function, base_n);
      AmplitudeTrace tr;
      switch (solver) {
        case SolverTag::laplace: tr = evolve_laplace(R, t_end, dt); break;
        case SolverTag::volterra: tr = evolve_volterra(R, t_end, dt); break;
        case SolverTag::systembath: tr = evolve_bath(cfg, t_end, dt).trace; break;
      }
      const AnalysisReport rep = analyze(R, &tr);
      row.regime = regime_name(rep.regime);
      row.resonance_count = rep.resonance_count;
      row.purcell_rate = rep.purcell_rate;
      row.rabi_freq = rep.rabi_freq;
      row.first_revival_t = rep.first_revival_t;
      row.first_revival_h = rep.first_revival_h;
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cqed
