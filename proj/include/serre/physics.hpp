#pragma once

// Pointwise closures of the hyperbolic relaxation of the Serre-Green-Naghdi
// equations with topography. Everything here is a pure function of its inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <stdexcept>

namespace serre {

using Vector5 = std::array<double, 5>;

/// Conserved unknowns at one node: water height, discharge and the three
/// relaxation fields (q1 ~ h^2, q2 ~ h(hdot + 3/2 v dz), q3 ~ q dz).
struct PrimitiveState {
  double h = 0.0;
  double q = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;

  constexpr Vector5 as_array() const { return {h, q, q1, q2, q3}; }
  static constexpr PrimitiveState from_array(const Vector5& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }
};

struct DerivedState {
  double v = 0.0;      // velocity
  double eta = 0.0;    // q1 / h
  double omega = 0.0;  // q2 / h
  double beta = 0.0;   // q3 / h
};

struct PhysParams {
  double g = 9.81;
  double lambda_bar = 1.0;
  double h_ref = 1.0;
  double eps = 1.0;

  /// Below this height a node is dry and every closure returns zero.
  constexpr double h_dry() const { return 1e-10 * h_ref; }
  /// Below this height the velocity is desingularized.
  constexpr double h_desing() const { return 1e-6 * h_ref; }

  void validate() const {
    if (!(g > 0.0) || !(lambda_bar > 0.0) || !(h_ref > 0.0) || !(eps > 0.0)) {
      throw std::invalid_argument("PhysParams: g, lambda_bar, h_ref and eps must be positive");
    }
  }
};

enum class ModelVariant { Full, Incomplete };

inline std::string_view to_string(ModelVariant m) {
  return m == ModelVariant::Full ? "full" : "incomplete";
}

inline ModelVariant parse_variant(std::string_view s) {
  if (s == "full") return ModelVariant::Full;
  if (s == "incomplete") return ModelVariant::Incomplete;
  throw std::invalid_argument("unknown model variant '" + std::string(s) +
                              "' (expected full or incomplete)");
}

// Relaxation potential and its derivative: Gamma(x) = 3 (x - 1)^2.
constexpr double gamma(double x) { return 3.0 * (x - 1.0) * (x - 1.0); }
constexpr double gamma_prime(double x) { return 6.0 * (x - 1.0); }

/// Penalty function for the q3 constraint. Only the identity is shipped; any
/// replacement must satisfy xi * phi(xi) >= 0.
struct IdentityPhi {
  constexpr double operator()(double xi) const { return xi; }
};

inline bool is_dry(const PrimitiveState& s, const PhysParams& p) { return s.h <= p.h_dry(); }

/// Velocity from discharge. Plain q/h above h_desing; below it the
/// regularized 2hq / (h^2 + max(h, h_desing)^2), which coincides with q/h at
/// the threshold and stays bounded as h -> 0.
inline double velocity(double h, double q, const PhysParams& p) {
  if (h <= p.h_dry()) return 0.0;
  const double hd = p.h_desing();
  if (h >= hd) return q / h;
  const double hm = std::max(h, hd);
  return 2.0 * h * q / (h * h + hm * hm);
}

inline DerivedState derive(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return {};
  const double inv_h = 1.0 / s.h;
  return {velocity(s.h, s.q, p), s.q1 * inv_h, s.q2 * inv_h, s.q3 * inv_h};
}

/// Non-hydrostatic part of the relaxed pressure from its definition,
/// -(lambda g / 3 eps) h^2 (eta Gamma'(eta/h) - 2 h Gamma(eta/h)).
inline double relaxed_pressure_tilde_definition(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  const double eta = s.q1 / s.h;
  const double x = eta / s.h;
  return -(p.lambda_bar * p.g / (3.0 * p.eps)) * s.h * s.h *
         (eta * gamma_prime(x) - 2.0 * s.h * gamma(x));
}

/// Same quantity in closed form for Gamma(x) = 3 (x - 1)^2:
/// (2 lambda g / eps) h (h^2 - q1). Exactly zero when q1 == h*h.
inline double relaxed_pressure_tilde(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  return (2.0 * p.lambda_bar * p.g / p.eps) * s.h * (s.h * s.h - s.q1);
}

inline double hydrostatic_pressure(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  return 0.5 * p.g * s.h * s.h;
}

inline double relaxed_pressure(const PrimitiveState& s, const PhysParams& p) {
  return hydrostatic_pressure(s, p) + relaxed_pressure_tilde(s, p);
}

/// Relaxation source of the q2 equation, lambda g (h^2/eps) Gamma'(eta/h),
/// i.e. 6 lambda g (q1 - h^2) / eps.
inline double source_s(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  return 6.0 * p.lambda_bar * p.g * (s.q1 - s.h * s.h) / p.eps;
}

/// Relaxation source of the q3 equation,
/// lambda g h0 (h/eps) Phi((v dz - beta) / sqrt(g h0)).
template <class Phi = IdentityPhi>
double source_ts(const PrimitiveState& s, double dzdx, const PhysParams& p, Phi phi = {}) {
  if (is_dry(s, p)) return 0.0;
  const auto d = derive(s, p);
  const double c0 = std::sqrt(p.g * p.h_ref);
  return p.lambda_bar * p.g * p.h_ref * (s.h / p.eps) * phi((d.v * dzdx - d.beta) / c0);
}

/// Coefficient multiplying dz/dx in the momentum source: g h - s/2 + ts/4.
inline double source_r(const PrimitiveState& s, double dzdx, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  return p.g * s.h - 0.5 * source_s(s, p) + 0.25 * source_ts(s, dzdx, p);
}

struct FluxVector {
  Vector5 total{};             // (q, v q + p, v q1, v q2, v q3)
  double hydrostatic = 0.0;    // g h^2 / 2
  double pressure_tilde = 0.0; // relaxed non-hydrostatic part
};

inline FluxVector flux(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return {};
  const double v = velocity(s.h, s.q, p);
  FluxVector f;
  f.hydrostatic = hydrostatic_pressure(s, p);
  f.pressure_tilde = relaxed_pressure_tilde(s, p);
  f.total = {s.q, v * s.q + f.hydrostatic + f.pressure_tilde, v * s.q1, v * s.q2, v * s.q3};
  return f;
}

/// Right-hand side of the balance laws (everything except the flux
/// divergence). The incomplete model carries an inert q3 slot.
inline Vector5 rhs_sources(const PrimitiveState& s, double dzdx, const PhysParams& p,
                           ModelVariant m) {
  if (is_dry(s, p)) return {};
  const double se = source_s(s, p);
  if (m == ModelVariant::Incomplete) {
    return {0.0, -p.g * s.h * dzdx, s.q2, -se, 0.0};
  }
  const double ts = source_ts(s, dzdx, p);
  const double r = p.g * s.h - 0.5 * se + 0.25 * ts;
  return {0.0, -r * dzdx, s.q2 - 1.5 * s.q * dzdx, -se, ts};
}

/// Relaxed energy density
/// g(h+z)^2/2 + h v^2/2 + h omega^2/6 + h beta^2/8 + (lambda g / 3 eps) h^3 Gamma(eta/h).
inline double energy_density(const PrimitiveState& s, double z, const PhysParams& p) {
  if (is_dry(s, p)) return 0.5 * p.g * z * z;
  const auto d = derive(s, p);
  const double H = s.h + z;
  return 0.5 * p.g * H * H + 0.5 * s.h * d.v * d.v + s.h * d.omega * d.omega / 6.0 +
         0.125 * s.h * d.beta * d.beta +
         (p.lambda_bar * p.g / (3.0 * p.eps)) * s.h * s.h * s.h * gamma(d.eta / s.h);
}

/// Local characteristic speed bound |v| + c with
/// c^2 = g h + max(0, (2 lambda g / eps)(3 h^2 - q1)), the derivative of the
/// relaxed pressure with respect to h at frozen q1.
inline double local_wave_speed(const PrimitiveState& s, const PhysParams& p) {
  if (is_dry(s, p)) return 0.0;
  const double v = velocity(s.h, s.q, p);
  const double dp = std::max(0.0, (2.0 * p.lambda_bar * p.g / p.eps) * (3.0 * s.h * s.h - s.q1));
  return std::abs(v) + std::sqrt(p.g * s.h + dp);
}

inline double max_wave_speed(const PrimitiveState& sl, const PrimitiveState& sr,
                             const PhysParams& p) {
  return std::max(local_wave_speed(sl, p), local_wave_speed(sr, p));
}

}  // namespace serre
