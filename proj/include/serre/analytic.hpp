#pragma once

// Exact solutions, wave generators, the Serre dispersion relation and the
// library of (optionally smoothed) bathymetry profiles.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace serre::analytic {

// ---------------------------------------------------------------------------
// Steady state over a sech^2 bump
// ---------------------------------------------------------------------------

struct SteadyStateParams {
  double h0 = 1.0;
  double a = 0.2;
  double g = 9.81;
};

struct SteadyStateSample {
  double h = 0.0;
  double q = 0.0;
  double z = 0.0;
  double r = 0.0;
};

/// Positive root of q^2 = (1 + a) g h0^3 / 2.
inline double steady_discharge(const SteadyStateParams& p) {
  return std::sqrt((1.0 + p.a) * p.g * p.h0 * p.h0 * p.h0 / 2.0);
}

inline double steady_width(const SteadyStateParams& p) {
  return std::sqrt(3.0 * p.a / (1.0 + p.a)) / p.h0;
}

/// h(x) = h0 (1 + a sech^2(r x)) over z(x) = -(h(x) - h0)/2, constant discharge.
inline SteadyStateSample steady_state_exact(double x, const SteadyStateParams& p) {
  const double r = steady_width(p);
  const double c = std::cosh(r * x);
  const double bump = p.a / (c * c);
  return {p.h0 * (1.0 + bump), steady_discharge(p), -0.5 * p.h0 * bump, r};
}

// ---------------------------------------------------------------------------
// Solitary wave
// ---------------------------------------------------------------------------

struct SolitaryParams {
  double h0 = 1.0;
  double alpha = 0.0;
  double x0 = 0.0;
};

inline double solitary_speed(const SolitaryParams& p, double g) {
  return std::sqrt(g * (p.h0 + p.alpha));
}

inline double solitary_width(const SolitaryParams& p) {
  return std::sqrt(3.0 * p.alpha / (4.0 * p.h0 * p.h0 * (p.h0 + p.alpha)));
}

struct WaveSample {
  double h = 0.0;
  double u = 0.0;
};

inline WaveSample solitary_wave(double x, double t, const SolitaryParams& p, double g) {
  if (p.alpha == 0.0) return {p.h0, 0.0};
  const double c = solitary_speed(p, g);
  const double ch = std::cosh(solitary_width(p) * (x - p.x0 - c * t));
  const double h = p.h0 + p.alpha / (ch * ch);
  return {h, c * (h - p.h0) / h};
}

// ---------------------------------------------------------------------------
// Periodic waves
// ---------------------------------------------------------------------------

/// Positive root of k^2 = 3 sigma^2 / (3 g h0 - h0^2 sigma^2).
inline double dispersion_wavenumber(double sigma, double h0, double g) {
  const double den = 3.0 * g * h0 - h0 * h0 * sigma * sigma;
  if (!(den > 0.0)) {
    throw std::domain_error("frequency beyond Serre dispersion range");
  }
  return std::sqrt(3.0 * sigma * sigma / den);
}

inline WaveSample periodic_wave_target(double x, double t, double a, double k, double sigma,
                                       double h0) {
  const double s = std::sin(k * x - sigma * t);
  return {h0 + a * s, (a / h0) * (sigma / k) * s};
}

// ---------------------------------------------------------------------------
// Bathymetry profiles
// ---------------------------------------------------------------------------

struct BathySample {
  double z = 0.0;
  double dzdx = 0.0;
};

/// Smoothing length d sqrt(h0 * mesh_size).
inline double smoothing_length(double d, double h0, double mesh_size) {
  return d * std::sqrt(h0 * mesh_size);
}

/// The constant d that makes the smoothing length equal `target` on a uniform
/// mesh of `reference_elements` elements over a domain of length `length`.
inline double smoothing_constant(double target, double h0, double length, int reference_elements) {
  return target / std::sqrt(h0 * length / reference_elements);
}

class BathymetryProfile {
 public:
  enum class Kind { Flat, SolitonBump, SmoothedTriangle, SmoothedStep, Beach, TrapezoidBar };

  static BathymetryProfile flat(double level = 0.0) {
    BathymetryProfile b(Kind::Flat);
    b.level_ = level;
    return b;
  }

  static BathymetryProfile soliton_bump(const SteadyStateParams& p) {
    BathymetryProfile b(Kind::SolitonBump);
    b.h0_ = p.h0;
    b.amplitude_ = p.a;
    b.rate_ = steady_width(p);
    return b;
  }

  /// max(height - slope x^2 / (|x| + delta), 0); delta = 0 gives the sharp triangle.
  static BathymetryProfile smoothed_triangle(double height, double half_base, double delta) {
    BathymetryProfile b(Kind::SmoothedTriangle);
    b.amplitude_ = height;
    b.rate_ = height / half_base;
    b.smoothing_ = delta;
    return b;
  }

  /// height (1/2 + atan(x / delta) / pi); delta = 0 gives the sharp step at x = 0.
  static BathymetryProfile smoothed_step(double height, double delta) {
    BathymetryProfile b(Kind::SmoothedStep);
    b.amplitude_ = height;
    b.smoothing_ = delta;
    return b;
  }

  /// -depth offshore, rising with `slope` from the toe onwards.
  static BathymetryProfile beach(double depth, double toe, double slope) {
    BathymetryProfile b(Kind::Beach);
    b.level_ = -depth;
    b.breaks_ = {toe};
    b.rate_ = slope;
    return b;
  }

  /// Submerged trapezoidal bar: 1/20 up-slope on [6, 12], crest 0.3 on
  /// [12, 14], 1/10 down-slope on [14, 17], zero elsewhere.
  static BathymetryProfile trapezoid_bar() {
    BathymetryProfile b(Kind::TrapezoidBar);
    b.breaks_ = {6.0, 12.0, 14.0, 17.0};
    return b;
  }

  Kind kind() const { return kind_; }
  double smoothing() const { return smoothing_; }
  const std::vector<double>& kinks() const { return breaks_; }

  BathySample operator()(double x) const { return eval(x); }

  BathySample eval(double x) const {
    switch (kind_) {
      case Kind::Flat:
        return {level_, 0.0};
      case Kind::SolitonBump: {
        const double c = std::cosh(rate_ * x);
        const double sech2 = 1.0 / (c * c);
        const double z = -0.5 * h0_ * amplitude_ * sech2;
        return {z, -2.0 * rate_ * std::tanh(rate_ * x) * z};
      }
      case Kind::SmoothedTriangle: {
        const double ax = std::abs(x);
        const double den = ax + smoothing_;
        if (den == 0.0) return {amplitude_, 0.0};
        const double z = amplitude_ - rate_ * x * x / den;
        if (z <= 0.0) return {0.0, 0.0};
        const double dfa = ax * (ax + 2.0 * smoothing_) / (den * den);
        return {z, -rate_ * std::copysign(dfa, x)};
      }
      case Kind::SmoothedStep: {
        if (smoothing_ == 0.0) {
          if (x == 0.0) return {0.5 * amplitude_, 0.0};
          return {x > 0.0 ? amplitude_ : 0.0, 0.0};
        }
        const double y = x / smoothing_;
        return {amplitude_ * (0.5 + std::atan(y) / std::numbers::pi),
                amplitude_ / (std::numbers::pi * smoothing_ * (1.0 + y * y))};
      }
      case Kind::Beach:
      case Kind::TrapezoidBar:
        return piecewise_linear(x);
    }
    return {};
  }

 private:
  explicit BathymetryProfile(Kind k) : kind_(k) {}

  // Value and slope of a piecewise-linear profile. At a kink the slope is the
  // average of the two one-sided slopes.
  BathySample piecewise_linear(double x) const {
    constexpr double kink_tol = 1e-9;
    for (double b : breaks_) {
      if (std::abs(x - b) <= kink_tol * std::max(1.0, std::abs(b))) {
        return {linear_value(b), 0.5 * (linear_slope(b - 1e-6) + linear_slope(b + 1e-6))};
      }
    }
    return {linear_value(x), linear_slope(x)};
  }

  double linear_value(double x) const {
    if (kind_ == Kind::Beach) {
      return x >= breaks_[0] ? level_ + rate_ * (x - breaks_[0]) : level_;
    }
    if (x >= 6.0 && x <= 12.0) return (x - 6.0) / 20.0;
    if (x >= 12.0 && x <= 14.0) return 0.3;
    if (x >= 14.0 && x <= 17.0) return 0.3 - (x - 14.0) / 10.0;
    return 0.0;
  }

  double linear_slope(double x) const {
    if (kind_ == Kind::Beach) return x > breaks_[0] ? rate_ : 0.0;
    if (x > 6.0 && x < 12.0) return 1.0 / 20.0;
    if (x > 14.0 && x < 17.0) return -1.0 / 10.0;
    return 0.0;
  }

  Kind kind_;
  double level_ = 0.0;
  double h0_ = 1.0;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
  double smoothing_ = 0.0;
  std::vector<double> breaks_;
};

}  // namespace serre::analytic
