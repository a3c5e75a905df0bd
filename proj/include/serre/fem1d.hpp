#pragma once

// Lumped continuous-P1 discretization of the relaxed Serre system in one
// dimension, advanced with SSP RK(3,3).
//
// Each forward-Euler stage is written edge by edge. A low-order update uses
// hydrostatically reconstructed ("star") states and graph viscosity
// d_ij = max_wave_speed * |c_ij|, which keeps h >= 0 under the CFL of
// compute_dt and leaves the lake at rest untouched. A high-order update uses
// the Galerkin fluxes and a viscosity scaled down by a smoothness indicator.
// The difference between the two is a set of antisymmetric edge corrections
// that are limited so that the water height stays non-negative.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "serre/mesh.hpp"
#include "serre/physics.hpp"

namespace serre::fem {

/// Raised when the discrete solution leaves the admissible set.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Stabilization { FirstOrder, SecondOrder };

/// Entropy pair behind the second-order smoothness indicator.
enum class Indicator { RelaxedEnergy, ShallowWater };

struct Boundary {
  enum class Kind { Wall, Dirichlet };

  Kind kind = Kind::Wall;
  PrimitiveState target{};
  std::array<bool, 5> imposed{};  // components of (h, q, q1, q2, q3) overwritten

  static Boundary wall() { return {}; }
  static Boundary dirichlet(const PrimitiveState& target, std::array<bool, 5> imposed) {
    return {Kind::Dirichlet, target, imposed};
  }
};

struct BoundarySpec {
  Boundary left = Boundary::wall();
  Boundary right = Boundary::wall();
};

/// Relaxation zone blending the state towards a target profile,
/// u <- u + sigma(x) dt / tau (u_target - u), sigma ramping cubically from 0
/// at the inner edge to 1 at the outer edge.
struct SpongeZone {
  enum class Kind { Absorption, Generation };
  enum class Outer { Left, Right };

  double x_begin = 0.0;
  double x_end = 0.0;
  Kind kind = Kind::Absorption;
  Outer outer = Outer::Left;
  double tau = 0.0;
  std::function<PrimitiveState(double x, double t)> target;

  double ramp(double x) const {
    if (x < x_begin || x > x_end) return 0.0;
    const double len = x_end - x_begin;
    const double s = outer == Outer::Left ? (x_end - x) / len : (x - x_begin) / len;
    return s * s * s;
  }
};

struct SolverOptions {
  double g = 9.81;
  double lambda_bar = 1.0;
  double h_ref = 1.0;
  ModelVariant variant = ModelVariant::Full;
  Stabilization stabilization = Stabilization::SecondOrder;
  Indicator indicator = Indicator::RelaxedEnergy;
  double hyperviscosity = 1.0 / 16.0;  // fourth-difference coefficient (second order only)
  BoundarySpec boundaries{};
  std::vector<SpongeZone> sponges{};
};

/// Generic SSP RK(3,3) in Shu-Osher form. `euler(in, t, dt, out)` performs one
/// forward-Euler stage; the state type must support lincomb().
template <class State, class EulerStage>
void ssprk33(State& u, double t, double dt, EulerStage&& euler) {
  State u1 = u;
  State tmp = u;
  euler(u, t, dt, u1);
  euler(u1, t + dt, dt, tmp);
  State u2 = u;
  lincomb(u2, 0.75, u, 0.25, tmp);
  euler(u2, t + 0.5 * dt, dt, tmp);
  // u/3 + 2 tmp/3 written as u + 2/3 (tmp - u): the rounded weights 1/3 and
  // 2/3 do not sum to one and would leak mass at every step.
  lincomb(tmp, 1.0, tmp, -1.0, u);
  lincomb(u, 1.0, u, 2.0 / 3.0, tmp);
}

/// SSP RK(3,3) for an autonomous-in-form rate function du/dt = rate(u, t).
template <class State, class Rate>
void step_ssprk33(State& u, double t, double dt, Rate&& rate) {
  ssprk33(u, t, dt, [&](const State& in, double ts, double h, State& out) {
    State r = rate(in, ts);
    lincomb(out, 1.0, in, h, r);
  });
}

class Solver {
 public:
  Solver(Mesh1D mesh, NodalBathymetry bathy, SolverOptions opt)
      : mesh_(std::move(mesh)), bathy_(std::move(bathy)), opt_(std::move(opt)) {
    if (bathy_.z.size() != mesh_.num_nodes() || bathy_.dzdx.size() != mesh_.num_nodes()) {
      throw std::invalid_argument("Solver: bathymetry does not match mesh");
    }
    node_params(0).validate();
    const std::size_t n = mesh_.num_nodes();
    edge_low_.resize(n - 1);
    edge_high_.resize(n - 1);
    common_.resize(n);
    psi_.resize(n);
    lambda_.resize(n);
  }

  const Mesh1D& mesh() const { return mesh_; }
  const NodalBathymetry& bathymetry() const { return bathy_; }
  const SolverOptions& options() const { return opt_; }
  std::size_t size() const { return mesh_.num_nodes(); }

  PhysParams node_params(std::size_t i) const {
    return {opt_.g, opt_.lambda_bar, opt_.h_ref, mesh_.eps(i)};
  }

  /// du/dt of the (unlimited) semi-discrete operator, sponges excluded.
  Fields spatial_residual(const Fields& u,
                          Stabilization order = Stabilization::SecondOrder) const {
    check_admissible(u);
    assemble(u, order);
    Fields rate(size());
    const auto& edges = order == Stabilization::FirstOrder ? edge_low_ : edge_high_;
    accumulate(edges, rate);
    return rate;
  }

  /// Largest stable step: cfl * min_i m_i / (2 sum_j d_ij).
  double compute_dt(const Fields& u, double cfl) const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("compute_dt: cfl must be in (0, 1]");
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) lambda_[i] = local_wave_speed(u.at(i), node_params(i));
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double dsum = 0.0;
      if (i + 1 < n) dsum += 0.5 * std::max(lambda_[i], lambda_[i + 1]);
      if (i > 0) dsum += 0.5 * std::max(lambda_[i], lambda_[i - 1]);
      if (dsum > 0.0) dt = std::min(dt, mesh_.mass(i) / (2.0 * dsum));
    }
    if (!std::isfinite(dt)) {
      double m_min = *std::min_element(mesh_.lumped_mass().begin(), mesh_.lumped_mass().end());
      return cfl * m_min / std::sqrt(opt_.g * opt_.h_ref);
    }
    return cfl * dt;
  }

  /// One forward-Euler stage including limiting, boundary conditions,
  /// sponges and the dry-state cleanup.
  void euler_stage(const Fields& u, double t, double dt, Fields& out) const {
    check_admissible(u);
    assemble(u, opt_.stabilization);
    const std::size_t n = size();
    if (out.size() != n) out = Fields(n);

    // Low-order update.
    Fields& low = out;
    {
      Fields rate(n);
      accumulate(edge_low_, rate);
      lincomb(low, 1.0, u, dt, rate);
    }

    if (opt_.stabilization == Stabilization::SecondOrder) limit_and_correct(low, dt);

    finalize_stage(low, t + dt, dt);
  }

  /// One SSP RK(3,3) step.
  void step(Fields& u, double t, double dt) const {
    ssprk33(u, t, dt, [this](const Fields& in, double ts, double h, Fields& out) {
      euler_stage(in, ts, h, out);
    });
  }

  void apply_boundaries(Fields& u) const {
    apply_boundary(u, 0, opt_.boundaries.left);
    apply_boundary(u, size() - 1, opt_.boundaries.right);
  }

  void apply_sponges(Fields& u, double t, double dt) const {
    for (const auto& zone : opt_.sponges) {
      if (!zone.target || !(zone.tau > 0.0)) continue;
      for (std::size_t i = 0; i < size(); ++i) {
        const double sig = zone.ramp(mesh_.x(i));
        if (sig <= 0.0) continue;
        const double w = std::min(1.0, sig * dt / zone.tau);
        const auto target = zone.target(mesh_.x(i), t);
        u.h[i] += w * (target.h - u.h[i]);
        u.q[i] += w * (target.q - u.q[i]);
        u.q1[i] += w * (target.q1 - u.q1[i]);
        u.q2[i] += w * (target.q2 - u.q2[i]);
        u.q3[i] += w * (target.q3 - u.q3[i]);
      }
    }
  }

  // --- diagnostics -------------------------------------------------------

  double total_mass(const Fields& u) const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m += mesh_.mass(i) * u.h[i];
    return m;
  }

  double total_energy(const Fields& u) const {
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      e += mesh_.mass(i) * energy_density(u.at(i), bathy_.z[i], node_params(i));
    }
    return e;
  }

  /// Relative L1 constraint violations ||h^2 - q1|| / ||q1|| and
  /// ||q dz - q3|| / ||q dz||; NaN when a denominator vanishes.
  std::pair<double, double> relaxation_errors(const Fields& u) const {
    double n3 = 0.0, d3 = 0.0, n4 = 0.0, d4 = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double m = mesh_.mass(i);
      n3 += m * std::abs(u.h[i] * u.h[i] - u.q1[i]);
      d3 += m * std::abs(u.q1[i]);
      const double qz = u.q[i] * bathy_.dzdx[i];
      n4 += m * std::abs(qz - u.q3[i]);
      d4 += m * std::abs(qz);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {d3 > 0.0 ? n3 / d3 : nan, d4 > 0.0 ? n4 / d4 : nan};
  }

  /// Free surface h + z linearly interpolated at x.
  double free_surface(const Fields& u, double x) const {
    const auto [e, s] = mesh_.locate(x);
    const double a = u.h[e] + bathy_.z[e];
    const double b = u.h[e + 1] + bathy_.z[e + 1];
    return (1.0 - s) * a + s * b;
  }

  void check_admissible(const Fields& u) const {
    for (std::size_t i = 0; i < size(); ++i) {
      const auto s = u.at(i);
      if (!(std::isfinite(s.h) && std::isfinite(s.q) && std::isfinite(s.q1) &&
            std::isfinite(s.q2) && std::isfinite(s.q3))) {
        std::ostringstream os;
        os << "non-finite state at node " << i << " (x = " << mesh_.x(i) << ")";
        throw NumericalError(os.str());
      }
      if (s.h < 0.0) {
        std::ostringstream os;
        os << "negative water height " << s.h << " at node " << i << " (x = " << mesh_.x(i)
           << ")";
        throw NumericalError(os.str());
      }
    }
  }

 private:
  // Edge e joins nodes e and e+1; the flux G_e leaves node e and enters node e+1.
  using EdgeFlux = std::vector<Vector5>;

  void assemble(const Fields& u, Stabilization order) const {
    const std::size_t n = size();
    const auto& z = bathy_.z;
    const auto& dz = bathy_.dzdx;
    const double hdry = PhysParams{opt_.g, opt_.lambda_bar, opt_.h_ref, 1.0}.h_dry();

    // Nodal quantities.
    v_.resize(n);
    H_.resize(n);
    ptilde_.resize(n);
    w1_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = u.at(i);
      const auto p = node_params(i);
      v_[i] = velocity(s.h, s.q, p);
      H_[i] = s.h + z[i];
      ptilde_[i] = relaxed_pressure_tilde(s, p);
      w1_[i] = s.q1 - s.h * s.h;
      lambda_[i] = local_wave_speed(s, p);
    }
    if (order == Stabilization::SecondOrder) smoothness_indicator(u);

    // Edge fluxes.
    for (std::size_t e = 0; e + 1 < n; ++e) {
      const std::size_t i = e, j = e + 1;
      const double d = 0.5 * std::max(lambda_[i], lambda_[j]);
      const double zmax = std::max(z[i], z[j]);
      const bool wet_i = u.h[i] > hdry, wet_j = u.h[j] > hdry;
      const double hs_i = wet_i ? std::max(0.0, H_[i] - zmax) : 0.0;
      const double hs_j = wet_j ? std::max(0.0, H_[j] - zmax) : 0.0;
      const double r_i = wet_i ? hs_i / u.h[i] : 0.0;
      const double r_j = wet_j ? hs_j / u.h[j] : 0.0;

      // q1 ~ h^2 scales with the square of the height ratio. Written as
      // hs^2 + r^2 (q1 - h^2) so the pair is bitwise equal across a lake at rest.
      const double d1_i = u.q1[i] - u.h[i] * u.h[i], d1_j = u.q1[j] - u.h[j] * u.h[j];
      const Vector5 star_i = {hs_i, r_i * u.q[i], hs_i * hs_i + r_i * r_i * d1_i, r_i * u.q2[i],
                              r_i * u.q3[i]};
      const Vector5 star_j = {hs_j, r_j * u.q[j], hs_j * hs_j + r_j * r_j * d1_j, r_j * u.q2[j],
                              r_j * u.q3[j]};

      Vector5& gl = edge_low_[e];
      gl[0] = 0.5 * (star_i[1] + star_j[1]) - d * (hs_j - hs_i);
      gl[1] = 0.5 * (v_[i] * star_i[1] + v_[j] * star_j[1]) - d * (star_j[1] - star_i[1]);
      gl[2] = 0.5 * (v_[i] * star_i[2] + v_[j] * star_j[2]) - d * (star_j[2] - star_i[2]);
      gl[3] = 0.5 * (v_[i] * star_i[3] + v_[j] * star_j[3]) - d * (star_j[3] - star_i[3]);
      gl[4] = 0.5 * (v_[i] * star_i[4] + v_[j] * star_j[4]) - d * (star_j[4] - star_i[4]);

      if (order == Stabilization::SecondOrder) {
        // Jumps of h and q1 are taken as dH and d(q1 - h^2) + (h_i + h_j) dH:
        // zero across a lake at rest, the plain jumps on a flat bottom, and
        // independent of the vertical datum.
        const double dh = d * std::max(psi_[i], psi_[j]);
        const double hsum = u.h[i] + u.h[j];
        Vector5& gh = edge_high_[e];
        gh[0] = 0.5 * (u.q[i] + u.q[j]) - dh * (H_[j] - H_[i]);
        gh[1] = 0.5 * (v_[i] * u.q[i] + v_[j] * u.q[j]) - dh * (u.q[j] - u.q[i]);
        gh[2] = 0.5 * (v_[i] * u.q1[i] + v_[j] * u.q1[j]) - dh * (w1_[j] - w1_[i] + hsum * (H_[j] - H_[i]));
        gh[3] = 0.5 * (v_[i] * u.q2[i] + v_[j] * u.q2[j]) - dh * (u.q2[j] - u.q2[i]);
        gh[4] = 0.5 * (v_[i] * u.q3[i] + v_[j] * u.q3[j]) - dh * (u.q3[j] - u.q3[i]);
        // Fourth-difference damping of grid-scale modes the indicator cannot see
        // (small-amplitude short waves have a vanishing commutator).
        if (opt_.hyperviscosity > 0.0 && i >= 1 && j + 1 < n) {
          const double d4 = opt_.hyperviscosity * d;
          auto d3 = [&](const std::vector<double>& f) {
            return f[j + 1] - 3.0 * f[j] + 3.0 * f[i] - f[i - 1];
          };
          gh[0] += d4 * d3(H_);
          gh[1] += d4 * d3(u.q);
          gh[2] += d4 * (d3(w1_) + hsum * d3(H_));
          gh[3] += d4 * d3(u.q2);
          gh[4] += d4 * d3(u.q3);
        }
      }
    }

    // Terms shared by both updates: boundary fluxes, pressure gradients and
    // sources. The hydrostatic part is written as g h_i (H_j - H_i) c_ij so that
    // the lake at rest is a fixed point; a dry neighbour standing above the
    // local free surface acts as a wall.
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = u.at(i);
      const auto p = node_params(i);
      Vector5& c = common_[i];
      c = {0.0, 0.0, 0.0, 0.0, 0.0};

      auto neighbour = [&](std::size_t j, double cij) {
        const double Hj = u.h[j] > hdry ? H_[j] : std::min(H_[j], H_[i]);
        c[1] -= opt_.g * s.h * (Hj - H_[i]) * cij;
        c[1] -= (ptilde_[j] - ptilde_[i]) * cij;
      };
      if (i + 1 < n) neighbour(i + 1, Mesh1D::c_right);
      if (i > 0) neighbour(i - 1, Mesh1D::c_left);

      // Boundary flux -2 c_ii F_i with c_00 = -1/2 and c_NN = +1/2.
      if (i == 0 || i == n - 1) {
        const double sign = i == 0 ? 1.0 : -1.0;
        c[0] += sign * s.q;
        c[1] += sign * v_[i] * s.q;
        c[2] += sign * v_[i] * s.q1;
        c[3] += sign * v_[i] * s.q2;
        c[4] += sign * v_[i] * s.q3;
      }

      if (s.h > hdry) {
        const double m = mesh_.mass(i);
        const double se = source_s(s, p);
        if (opt_.variant == ModelVariant::Full) {
          const double ts = source_ts(s, dz[i], p);
          c[1] += m * (0.5 * se - 0.25 * ts) * dz[i];
          c[2] += m * (s.q2 - 1.5 * s.q * dz[i]);
          c[3] -= m * se;
          c[4] += m * ts;
        } else {
          c[2] += m * s.q2;
          c[3] -= m * se;
        }
      }
    }
  }

  // Entropy-commutator indicator for the relaxed energy (flat-bottom part)
  //   E = g h^2/2 + q^2/2h + q2^2/6h + q3^2/8h + (lambda g / 3 eps) h^3 Gamma(q1/h^2)
  // with flux F_E = v (E + p):
  //   N_i = sum_j (F_E(U_j) - E'(U_i) . F(U_j)) c_ij,
  // normalised by the magnitudes of the two sums. O(dx) on smooth data, O(1)
  // at fronts and under-resolved features. eps is frozen at eps_i along row i.
  void smoothness_indicator(const Fields& u) const {
    if (opt_.indicator == Indicator::ShallowWater) return shallow_water_indicator(u);
    const std::size_t n = size();
    const double g = opt_.g;
    const double tiny = 1e-14 * g * opt_.h_ref * opt_.h_ref * std::sqrt(g * opt_.h_ref);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < 1 || i + 1 >= n) {
        psi_[i] = 1.0;
        continue;
      }
      const double kap = opt_.lambda_bar * g / (3.0 * mesh_.eps(i));
      double de[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
      if (u.h[i] > 0.0) {
        const double h = u.h[i], x = u.q1[i] / (h * h), w = u.q2[i] / h, b = u.q3[i] / h;
        de[0] = g * h - 0.5 * v_[i] * v_[i] - w * w / 6.0 - b * b / 8.0 +
                kap * (3.0 * h * h * gamma(x) - 2.0 * u.q1[i] * gamma_prime(x));
        de[1] = v_[i];
        de[2] = kap * h * gamma_prime(x);
        de[3] = w / 3.0;
        de[4] = b / 4.0;
      }
      double fe = 0.0, pf = 0.0;
      auto add = [&](std::size_t j, double c) {
        const double h = u.h[j];
        double ej = 0.0, pj = 0.0;
        if (h > 0.0) {
          pj = 0.5 * g * h * h + 6.0 * kap * (h * h * h - h * u.q1[j]);
          ej = 0.5 * g * h * h + 0.5 * v_[j] * u.q[j] + u.q2[j] * u.q2[j] / (6.0 * h) +
               u.q3[j] * u.q3[j] / (8.0 * h) + kap * h * h * h * gamma(u.q1[j] / (h * h));
        }
        const double fej = v_[j] * (ej + pj);
        const double prj = de[0] * u.q[j] + de[1] * (v_[j] * u.q[j] + pj) +
                           v_[j] * (de[2] * u.q1[j] + de[3] * u.q2[j] + de[4] * u.q3[j]);
        fe += fej * c;
        pf += prj * c;
      };
      add(i + 1, Mesh1D::c_right);
      add(i - 1, Mesh1D::c_left);
      psi_[i] = std::min(1.0, std::abs(fe - pf) / (std::abs(fe) + std::abs(pf) + tiny));
    }
  }

  // Same commutator on the shallow-water pair eta = g h^2/2 + q^2/2h,
  // F_eta = v (eta + g h^2/2); blind to the relaxation fields.
  void shallow_water_indicator(const Fields& u) const {
    const std::size_t n = size();
    const double g = opt_.g;
    const double tiny = 1e-14 * g * opt_.h_ref * opt_.h_ref * std::sqrt(g * opt_.h_ref);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < 1 || i + 1 >= n) {
        psi_[i] = 1.0;
        continue;
      }
      const double dh = g * u.h[i] - 0.5 * v_[i] * v_[i];
      const double dq = v_[i];
      double fe = 0.0, pf = 0.0;
      auto add = [&](std::size_t j, double c) {
        const double pj = 0.5 * g * u.h[j] * u.h[j];
        const double fej = v_[j] * (2.0 * pj + 0.5 * v_[j] * u.q[j]);
        fe += fej * c;
        pf += (dh * u.q[j] + dq * (v_[j] * u.q[j] + pj)) * c;
      };
      add(i + 1, Mesh1D::c_right);
      add(i - 1, Mesh1D::c_left);
      psi_[i] = std::min(1.0, std::abs(fe - pf) / (std::abs(fe) + std::abs(pf) + tiny));
    }
  }

  void accumulate(const EdgeFlux& edges, Fields& rate) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      Vector5 acc = common_[i];
      if (i + 1 < n) {
        for (int k = 0; k < 5; ++k) acc[k] -= edges[i][k];
      }
      if (i > 0) {
        for (int k = 0; k < 5; ++k) acc[k] += edges[i - 1][k];
      }
      const double inv_m = 1.0 / mesh_.mass(i);
      rate.h[i] = acc[0] * inv_m;
      rate.q[i] = acc[1] * inv_m;
      rate.q1[i] = acc[2] * inv_m;
      rate.q2[i] = acc[3] * inv_m;
      rate.q3[i] = acc[4] * inv_m;
    }
  }

  // Adds the limited high-order correction to the low-order state. The
  // correction of edge e is A_e = dt (G^L_e - G^H_e) into node e and -A_e into
  // node e+1; a single factor per edge keeps h >= 0 (Zalesak lower bound).
  void limit_and_correct(Fields& u, double dt) const {
    const std::size_t n = size();
    const std::size_t ne = n - 1;
    neg_.assign(n, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
      const double a = dt * (edge_low_[e][0] - edge_high_[e][0]);
      if (a < 0.0) neg_[e] += a;
      else neg_[e + 1] -= a;
    }
    ratio_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (neg_[i] < 0.0) {
        const double room = std::max(0.0, mesh_.mass(i) * u.h[i]);
        ratio_[i] = std::min(1.0, room / -neg_[i]);
      } else {
        ratio_[i] = 1.0;
      }
    }
    for (std::size_t e = 0; e < ne; ++e) {
      const double ah = dt * (edge_low_[e][0] - edge_high_[e][0]);
      const double l = ah < 0.0 ? ratio_[e] : ratio_[e + 1];
      const double wi = l * dt / mesh_.mass(e);
      const double wj = l * dt / mesh_.mass(e + 1);
      const auto& gl = edge_low_[e];
      const auto& gh = edge_high_[e];
      const double a[5] = {gl[0] - gh[0], gl[1] - gh[1], gl[2] - gh[2], gl[3] - gh[3],
                           gl[4] - gh[4]};
      u.h[e] += wi * a[0];
      u.q[e] += wi * a[1];
      u.q1[e] += wi * a[2];
      u.q2[e] += wi * a[3];
      u.q3[e] += wi * a[4];
      u.h[e + 1] -= wj * a[0];
      u.q[e + 1] -= wj * a[1];
      u.q1[e + 1] -= wj * a[2];
      u.q2[e + 1] -= wj * a[3];
      u.q3[e + 1] -= wj * a[4];
    }
  }

  void finalize_stage(Fields& u, double t, double dt) const {
    const double hdry = PhysParams{opt_.g, opt_.lambda_bar, opt_.h_ref, 1.0}.h_dry();
    const double tol = 1e-14 * opt_.h_ref;
    for (std::size_t i = 0; i < size(); ++i) {
      if (u.h[i] < 0.0) {
        if (u.h[i] < -tol) {
          std::ostringstream os;
          os << "stage produced h = " << u.h[i] << " at node " << i << " (x = " << mesh_.x(i)
             << "); reduce the CFL number";
          throw NumericalError(os.str());
        }
        u.h[i] = 0.0;
      }
      if (u.h[i] <= hdry) {
        u.q[i] = u.q1[i] = u.q2[i] = u.q3[i] = 0.0;
      }
    }
    apply_boundaries(u);
    apply_sponges(u, t, dt);
  }

  void apply_boundary(Fields& u, std::size_t i, const Boundary& b) const {
    if (b.kind == Boundary::Kind::Wall) {
      u.q[i] = 0.0;
      u.q3[i] = 0.0;
      return;
    }
    const Vector5 t = b.target.as_array();
    if (b.imposed[0]) u.h[i] = t[0];
    if (b.imposed[1]) u.q[i] = t[1];
    if (b.imposed[2]) u.q1[i] = t[2];
    if (b.imposed[3]) u.q2[i] = t[3];
    if (b.imposed[4]) u.q3[i] = t[4];
  }

  Mesh1D mesh_;
  NodalBathymetry bathy_;
  SolverOptions opt_;

  // Scratch storage reused across stages.
  mutable EdgeFlux edge_low_, edge_high_;
  mutable std::vector<Vector5> common_;
  mutable std::vector<double> v_, H_, ptilde_, w1_, lambda_, psi_, neg_, ratio_;
};

}  // namespace serre::fem
