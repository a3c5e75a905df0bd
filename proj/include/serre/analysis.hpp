#pragma once

// Post-processing: error norms and convergence rates, solitary-peak detection
// on gauge series, reflected/transmitted amplitudes and period folding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "serre/analytic.hpp"
#include "serre/mesh.hpp"

namespace serre::harness {

// ---------------------------------------------------------------------------
// Error norms
// ---------------------------------------------------------------------------

struct ErrorNorms {
  double E1 = 0.0;  // relative L1 error of h
  double E2 = 0.0;  // relative Linf error of h
  double E3 = 0.0;  // ||h^2 - q1||_1 / ||q1||_1
  double E4 = 0.0;  // ||q dz - q3||_1 / ||q dz||_1
};

/// L1 norms use the lumped quadrature sum_i m_i |.|.
inline ErrorNorms error_norms(const Mesh1D& mesh, const NodalBathymetry& bathy, const Fields& u,
                              const std::vector<double>& h_exact) {
  const std::size_t n = mesh.num_nodes();
  if (u.size() != n || h_exact.size() != n || bathy.z.size() != n) {
    throw std::invalid_argument("error_norms: size mismatch");
  }
  double e1 = 0, d1 = 0, e2 = 0, d2 = 0, e3 = 0, d3 = 0, e4 = 0, d4 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mesh.mass(i);
    const double dh = std::abs(u.h[i] - h_exact[i]);
    e1 += m * dh;
    d1 += m * std::abs(h_exact[i]);
    e2 = std::max(e2, dh);
    d2 = std::max(d2, std::abs(h_exact[i]));
    e3 += m * std::abs(u.h[i] * u.h[i] - u.q1[i]);
    d3 += m * std::abs(u.q1[i]);
    const double qz = u.q[i] * bathy.dzdx[i];
    e4 += m * std::abs(qz - u.q3[i]);
    d4 += m * std::abs(qz);
  }
  if (d1 == 0.0 || d2 == 0.0) throw std::domain_error("error_norms: exact water height vanishes");
  if (d3 == 0.0) throw std::domain_error("error_norms: ||q1|| vanishes");
  if (d4 == 0.0) throw std::domain_error("error_norms: ||q dz|| vanishes");
  return {e1 / d1, e2 / d2, e3 / d3, e4 / d4};
}

struct ConvergenceRow {
  int n = 0;
  ErrorNorms errors{};
  // log2(E(n/2) / E(n)) against the previous row; NaN on the first row.
  ErrorNorms rates{std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
};

/// Observed order between two refinements, log(E_a / E_b) / log(n_b / n_a).
inline double observed_rate(double e_coarse, double e_fine, double n_coarse, double n_fine) {
  return std::log(e_coarse / e_fine) / std::log(n_fine / n_coarse);
}

inline void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& a = rows[k - 1];
    auto& b = rows[k];
    const double na = a.n, nb = b.n;
    b.rates = {observed_rate(a.errors.E1, b.errors.E1, na, nb),
               observed_rate(a.errors.E2, b.errors.E2, na, nb),
               observed_rate(a.errors.E3, b.errors.E3, na, nb),
               observed_rate(a.errors.E4, b.errors.E4, na, nb)};
  }
}

// ---------------------------------------------------------------------------
// Gauge analytics
// ---------------------------------------------------------------------------

struct GaugeSeries {
  std::vector<double> t;
  std::vector<double> values;  // free surface h + z [m]

  void validate() const {
    if (t.size() != values.size()) throw std::invalid_argument("GaugeSeries: length mismatch");
    for (std::size_t k = 1; k < t.size(); ++k) {
      if (!(t[k] > t[k - 1])) throw std::invalid_argument("GaugeSeries: times not increasing");
    }
  }
};

struct Peak {
  double t = 0.0;          // time (or position) of the crest
  double amplitude = 0.0;  // crest value - baseline
  double prominence = 0.0;
};

/// Local maxima of (value - baseline) whose amplitude and topographic
/// prominence both reach min_prominence, sorted by amplitude (descending).
/// Plateaus count once, at their first sample; the end samples never count.
inline std::vector<Peak> detect_solitary_peaks(const GaugeSeries& s, double baseline,
                                               double min_prominence) {
  s.validate();
  const auto& y = s.values;
  const std::size_t n = y.size();
  std::vector<Peak> out;
  if (n < 3) return out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;  // plateau
    if (j + 1 >= n || !(y[j + 1] < y[i])) continue;
    const double amp = y[i] - baseline;
    if (amp < min_prominence) continue;
    // Prominence: height above the higher of the two saddles towards the
    // nearest higher ground (or the series end).
    double left_min = y[i];
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > y[i]) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = y[i];
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] > y[i]) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prom = y[i] - std::max(left_min, right_min);
    if (prom >= min_prominence) out.push_back({s.t[i], amp, prom});
    i = j;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Peak& a, const Peak& b) { return a.amplitude > b.amplitude; });
  return out;
}

/// Largest elevation above h0 once the incident wave has gone by: the window
/// opens at the incident crest passage plus two solitary widths (crest passage
/// is t = 0 for gauges behind the initial crest).
inline double reflected_amplitude(const GaugeSeries& s, double gauge_x,
                                  const analytic::SolitaryParams& p, double g) {
  s.validate();
  if (s.t.empty()) throw std::invalid_argument("reflected_amplitude: empty gauge series");
  const double c = analytic::solitary_speed(p, g);
  const double r = analytic::solitary_width(p);
  const double t_start = std::max(0.0, (gauge_x - p.x0) / c) + 2.0 / (r * c);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    if (s.t[k] >= t_start) best = std::max(best, s.values[k] - p.h0);
  }
  if (!std::isfinite(best)) throw std::invalid_argument("reflected_amplitude: window is empty");
  return best;
}

/// Ranked transmitted amplitudes; min_prominence defaults to 2% of alpha.
inline std::vector<double> transmitted_amplitudes(const GaugeSeries& s, double level, double alpha,
                                                  double min_prominence = -1.0) {
  if (min_prominence < 0.0) min_prominence = 0.02 * alpha;
  std::vector<double> out;
  for (const auto& p : detect_solitary_peaks(s, level, min_prominence)) out.push_back(p.amplitude);
  return out;
}

// ---------------------------------------------------------------------------
// Period folding
// ---------------------------------------------------------------------------

struct FoldedSample {
  double phase = 0.0;  // in [0, Tp)
  double value = 0.0;
  double t = 0.0;  // original time
};

inline double fold_phase(double t, double t0, double Tp) {
  double ph = (t - t0) - std::floor((t - t0) / Tp) * Tp;
  if (ph >= Tp) ph -= Tp;
  if (ph < 0.0) ph += Tp;
  return ph;
}

/// Maps each sample to t - t0 - floor((t - t0)/Tp) Tp, sorted by phase (ties
/// by original time).
inline std::vector<FoldedSample> period_fold(const GaugeSeries& s, double t0, double Tp) {
  if (!(Tp > 0.0)) throw std::invalid_argument("period_fold: period must be positive");
  if (s.t.size() != s.values.size()) throw std::invalid_argument("period_fold: length mismatch");
  std::vector<FoldedSample> out(s.t.size());
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    out[k] = {fold_phase(s.t[k], t0, Tp), s.values[k], s.t[k]};
  }
  std::sort(out.begin(), out.end(), [](const FoldedSample& a, const FoldedSample& b) {
    return a.phase < b.phase || (a.phase == b.phase && a.t < b.t);
  });
  return out;
}

/// Largest vertical spread among folded samples whose phases fall in the same
/// bin of width `bin`; a measure of how well the fold collapses.
inline double fold_spread(const std::vector<FoldedSample>& f, double bin) {
  double spread = 0.0;
  std::size_t a = 0;
  while (a < f.size()) {
    std::size_t b = a;
    double lo = f[a].value, hi = f[a].value;
    while (b + 1 < f.size() && f[b + 1].phase - f[a].phase <= bin) {
      ++b;
      lo = std::min(lo, f[b].value);
      hi = std::max(hi, f[b].value);
    }
    spread = std::max(spread, hi - lo);
    a = b + 1;
  }
  return spread;
}

}  // namespace serre::harness
