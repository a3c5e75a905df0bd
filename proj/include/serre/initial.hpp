#pragma once

// Nodal initial states. The relaxation fields start on their constraint
// manifold: q1 = h^2, q3 = q dz, q2 = -h^2 dv/dx + 3/2 q3, with dv/dx taken
// from the same lumped P1 gradient the solver uses.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "serre/analytic.hpp"
#include "serre/mesh.hpp"
#include "serre/physics.hpp"

namespace serre {

/// Builds (h, q, q1, q2, q3) from nodal h and v.
inline Fields relaxed_state_from(const Mesh1D& mesh, const NodalBathymetry& bathy,
                                 const std::vector<double>& h, const std::vector<double>& v,
                                 ModelVariant variant = ModelVariant::Full) {
  const std::size_t n = mesh.num_nodes();
  Fields u(n);
  const auto dv = mesh.gradient(v);
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] <= 0.0) continue;
    u.h[i] = h[i];
    u.q[i] = h[i] * v[i];
    u.q1[i] = h[i] * h[i];
    u.q2[i] = -h[i] * h[i] * dv[i];
    if (variant == ModelVariant::Full) {
      u.q3[i] = u.q[i] * bathy.dzdx[i];
      u.q2[i] += 1.5 * u.q3[i];
    }
  }
  return u;
}

/// Lake at rest at free-surface level H0 (dry where z >= H0).
inline Fields still_water(const Mesh1D& mesh, const NodalBathymetry& bathy, double H0) {
  const std::size_t n = mesh.num_nodes();
  std::vector<double> h(n), v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i] = std::max(0.0, H0 - bathy.z[i]);
  return relaxed_state_from(mesh, bathy, h, v);
}

/// Solitary wave: free surface H = level + alpha sech^2(...), h = max(H - z, 0),
/// q = u~ h. `level` is the still-water elevation; it equals h0 when the
/// offshore bottom is z = 0 and 0 when the bathymetry is depth-referenced.
inline Fields solitary_initial_condition(const Mesh1D& mesh, const NodalBathymetry& bathy,
                                         const analytic::SolitaryParams& p, double g,
                                         double level,
                                         ModelVariant variant = ModelVariant::Full) {
  const std::size_t n = mesh.num_nodes();
  std::vector<double> h(n), v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = analytic::solitary_wave(mesh.x(i), 0.0, p, g);
    h[i] = std::max(level + (w.h - p.h0) - bathy.z[i], 0.0);
    if (h[i] > 0.0) v[i] = w.u;
  }
  return relaxed_state_from(mesh, bathy, h, v, variant);
}

inline Fields solitary_initial_condition(const Mesh1D& mesh, const NodalBathymetry& bathy,
                                         const analytic::SolitaryParams& p, double g) {
  return solitary_initial_condition(mesh, bathy, p, g, p.h0);
}

/// Exact steady state over the sech^2 bump, relaxation fields on the manifold.
inline Fields steady_initial_condition(const Mesh1D& mesh, const NodalBathymetry& bathy,
                                       const analytic::SteadyStateParams& p,
                                       ModelVariant variant = ModelVariant::Full) {
  const std::size_t n = mesh.num_nodes();
  std::vector<double> h(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = analytic::steady_state_exact(mesh.x(i), p);
    h[i] = s.h;
    v[i] = s.q / s.h;
  }
  return relaxed_state_from(mesh, bathy, h, v, variant);
}

}  // namespace serre
