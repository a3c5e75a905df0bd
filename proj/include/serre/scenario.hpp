#pragma once

// Data-only scenario descriptions, their instantiation into a solver plus
// initial state, and the registry of named experiments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "serre/analytic.hpp"
#include "serre/fem1d.hpp"
#include "serre/initial.hpp"
#include "serre/mesh.hpp"
#include "serre/physics.hpp"
#include "serre/run.hpp"

namespace serre::harness {

struct BathymetrySpec {
  enum class Kind { Flat, SolitonBump, SmoothedTriangle, SmoothedStep, Beach, TrapezoidBar };
  Kind kind = Kind::Flat;
  double level = 0.0;      // flat
  double height = 0.0;     // triangle, step
  double half_base = 0.0;  // triangle
  // Mesh-dependent smoothing length smoothing_d * sqrt(smoothing_depth * dx);
  // d = 0 keeps the sharp profile.
  double smoothing_d = 0.0;
  double smoothing_depth = 0.0;
  double depth = 0.0;  // beach offshore depth (z = -depth)
  double toe = 0.0;
  double slope = 0.0;
  analytic::SteadyStateParams bump{};  // soliton bump

  analytic::BathymetryProfile build(double dx) const {
    using P = analytic::BathymetryProfile;
    const double delta = smoothing_d > 0.0
                             ? analytic::smoothing_length(smoothing_d, smoothing_depth, dx)
                             : 0.0;
    switch (kind) {
      case Kind::Flat: return P::flat(level);
      case Kind::SolitonBump: return P::soliton_bump(bump);
      case Kind::SmoothedTriangle: return P::smoothed_triangle(height, half_base, delta);
      case Kind::SmoothedStep: return P::smoothed_step(height, delta);
      case Kind::Beach: return P::beach(depth, toe, slope);
      case Kind::TrapezoidBar: return P::trapezoid_bar();
    }
    throw std::logic_error("unknown bathymetry kind");
  }
};

struct InitialSpec {
  enum class Kind { StillWater, Solitary, Steady };
  Kind kind = Kind::StillWater;
  double level = 0.0;  // still-water free-surface elevation
  analytic::SolitaryParams solitary{};
  analytic::SteadyStateParams steady{};
};

struct SpongeSpec {
  fem::SpongeZone::Kind kind = fem::SpongeZone::Kind::Absorption;
  fem::SpongeZone::Outer outer = fem::SpongeZone::Outer::Left;
  double x_begin = 0.0;
  double x_end = 0.0;
  double tau = 0.0;    // 0: 10 m_min / sqrt(g h_ref)
  double level = 0.0;  // still-water free surface the zone relaxes towards
  // Generation only: h0 + a sin(k x - sigma t), sigma = 2 pi / period.
  double amplitude = 0.0;
  double period = 0.0;
  double depth = 0.0;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ModelVariant variant = ModelVariant::Full;
  fem::Stabilization stabilization = fem::Stabilization::SecondOrder;
  fem::Indicator indicator = fem::Indicator::RelaxedEnergy;
  double hyperviscosity = 1.0 / 16.0;
  double x_min = 0.0;
  double x_max = 1.0;
  int n_elements = 100;
  double g = 9.81;
  double lambda_bar = 1.0;
  double h_ref = 1.0;
  BathymetrySpec bathymetry{};
  InitialSpec initial{};
  fem::BoundarySpec boundaries{};
  std::vector<SpongeSpec> sponges{};
  fem::TimeControls time{};
  std::vector<double> gauges{};
  double nominal_period = 0.0;   // periodic cases: target period
  double adjusted_period = 0.0;  // periodic cases: period used for folding

  void validate() const {
    auto bad = [&](const std::string& what) {
      throw std::invalid_argument("scenario '" + name + "': " + what);
    };
    if (!(x_max > x_min)) bad("empty domain");
    if (n_elements < 2) bad("n_elements must be at least 2");
    if (!(g > 0.0) || !(lambda_bar > 0.0) || !(h_ref > 0.0)) bad("non-positive physical constant");
    if (!(hyperviscosity >= 0.0)) bad("negative hyperviscosity");
    for (double x : gauges) {
      if (x < x_min || x > x_max) bad("gauge outside domain");
    }
    std::vector<std::pair<double, double>> iv;
    for (const auto& s : sponges) {
      if (!(s.x_end > s.x_begin)) bad("empty sponge interval");
      if (s.x_begin < x_min || s.x_end > x_max) bad("sponge outside domain");
      if (s.kind == fem::SpongeZone::Kind::Generation && !(s.period > 0.0 && s.depth > 0.0)) {
        bad("generation zone needs period and depth");
      }
      iv.emplace_back(s.x_begin, s.x_end);
    }
    std::sort(iv.begin(), iv.end());
    for (std::size_t k = 1; k < iv.size(); ++k) {
      if (iv[k].first < iv[k - 1].second) bad("sponge zones overlap");
    }
    try {
      time.validate();
    } catch (const std::invalid_argument& e) {
      bad(e.what());
    }
  }
};

/// Scalar overrides applied on top of a scenario (CLI flags).
struct Overrides {
  std::optional<int> n_elements;
  std::optional<double> cfl;
  std::optional<double> t_final;
  std::optional<ModelVariant> variant;
};

inline ScenarioConfig apply(ScenarioConfig cfg, const Overrides& ov) {
  if (ov.n_elements) cfg.n_elements = *ov.n_elements;
  if (ov.cfl) cfg.time.cfl = *ov.cfl;
  if (ov.t_final) cfg.time.t_final = *ov.t_final;
  if (ov.variant) cfg.variant = *ov.variant;
  return cfg;
}

// ---------------------------------------------------------------------------
// Instantiation
// ---------------------------------------------------------------------------

/// Target of a relaxation zone on the constraint manifold.
inline std::function<PrimitiveState(double, double)> sponge_target(const SpongeSpec& s,
                                                                   const analytic::BathymetryProfile& bathy,
                                                                   double g) {
  if (s.kind == fem::SpongeZone::Kind::Absorption) {
    return [bathy, level = s.level](double x, double) {
      const auto b = bathy(x);
      const double h = std::max(level - b.z, 0.0);
      return PrimitiveState{h, 0.0, h * h, 0.0, 0.0};
    };
  }
  const double sigma = 2.0 * std::numbers::pi / s.period;
  const double k = analytic::dispersion_wavenumber(sigma, s.depth, g);
  return [bathy, s, sigma, k](double x, double t) {
    const auto b = bathy(x);
    const auto w = analytic::periodic_wave_target(x, t, s.amplitude, k, sigma, s.depth);
    const double h = std::max(w.h + (s.level - s.depth) - b.z, 0.0);
    const double q = h * w.u;
    const double dudx = (s.amplitude / s.depth) * sigma * std::cos(k * x - sigma * t);
    const double q3 = q * b.dzdx;
    return PrimitiveState{h, q, h * h, -h * h * dudx + 1.5 * q3, q3};
  };
}

struct Instance {
  fem::Solver solver;
  Fields initial;
};

inline Instance instantiate(const ScenarioConfig& cfg) {
  cfg.validate();
  Mesh1D mesh(cfg.x_min, cfg.x_max, cfg.n_elements);
  const auto profile = cfg.bathymetry.build(mesh.dx());
  NodalBathymetry bathy(mesh, profile);

  fem::SolverOptions opt;
  opt.g = cfg.g;
  opt.lambda_bar = cfg.lambda_bar;
  opt.h_ref = cfg.h_ref;
  opt.variant = cfg.variant;
  opt.stabilization = cfg.stabilization;
  opt.indicator = cfg.indicator;
  opt.hyperviscosity = cfg.hyperviscosity;
  opt.boundaries = cfg.boundaries;
  const double m_min = 0.5 * mesh.dx();
  for (const auto& s : cfg.sponges) {
    fem::SpongeZone z;
    z.x_begin = s.x_begin;
    z.x_end = s.x_end;
    z.kind = s.kind;
    z.outer = s.outer;
    z.tau = s.tau > 0.0 ? s.tau : 10.0 * m_min / std::sqrt(cfg.g * cfg.h_ref);
    z.target = sponge_target(s, profile, cfg.g);
    opt.sponges.push_back(std::move(z));
  }

  Fields u;
  switch (cfg.initial.kind) {
    case InitialSpec::Kind::StillWater:
      u = still_water(mesh, bathy, cfg.initial.level);
      break;
    case InitialSpec::Kind::Solitary:
      u = solitary_initial_condition(mesh, bathy, cfg.initial.solitary, cfg.g, cfg.initial.level,
                                     cfg.variant);
      break;
    case InitialSpec::Kind::Steady:
      u = steady_initial_condition(mesh, bathy, cfg.initial.steady, cfg.variant);
      break;
  }
  fem::Solver solver(std::move(mesh), std::move(bathy), std::move(opt));
  return {std::move(solver), std::move(u)};
}

struct ScenarioRun {
  fem::Solver solver;
  Fields initial;
  fem::SimulationRecord record;
};

inline ScenarioRun run_scenario(const ScenarioConfig& cfg, const fem::StepObserver& observer = {}) {
  auto inst = instantiate(cfg);
  auto rec = fem::run(inst.solver, inst.initial, cfg.time, cfg.gauges, observer);
  return {std::move(inst.solver), std::move(inst.initial), std::move(rec)};
}

// ---------------------------------------------------------------------------
// Experiment tables
// ---------------------------------------------------------------------------

/// Solitary wave over a triangular obstacle; values in cm as tabulated.
struct TriangleRow {
  int exp;
  double h0_cm;
  double alpha_cm;
  double ref_full_cm;
  double ref_incomplete_cm;
};

inline const std::vector<TriangleRow>& triangle_rows() {
  static const std::vector<TriangleRow> rows{
      {72, 15.0, 2.96, 0.37, 0.61}, {73, 15.0, 4.35, 0.53, 1.07}, {74, 15.0, 5.81, 0.70, 1.64},
      {75, 15.0, 6.56, 0.79, 1.93}, {76, 15.0, 8.40, 0.96, 2.56}, {77, 12.5, 2.50, 0.49, 0.75},
      {78, 12.5, 4.75, 0.86, 1.66}, {79, 12.5, 6.00, 1.03, 2.21}, {80, 12.5, 6.30, 1.07, 2.34},
  };
  return rows;
}

/// Solitary wave over a step; transmitted amplitudes in cm (NaN: not reported).
struct StepRow {
  int exp;
  double h0_cm;
  double alpha_cm;
  std::array<double, 3> ref_cm;
};

inline const std::vector<StepRow>& step_rows() {
  constexpr double na = std::numeric_limits<double>::quiet_NaN();
  static const std::vector<StepRow> rows{
      {1, 30.0, 4.25, {5.58, 1.18, na}},   {2, 30.0, 6.80, {8.92, 1.78, na}},
      {3, 30.0, 7.10, {9.30, 1.85, na}},   {4, 30.0, 7.50, {9.81, 1.94, na}},
      {6, 30.0, 9.70, {12.54, 2.43, na}},  {7, 25.0, 1.78, {2.40, 0.69, na}},
      {8, 25.0, 2.57, {3.61, 0.96, na}},   {9, 25.0, 3.84, {5.42, 1.39, na}},
      {10, 25.0, 5.75, {7.96, 2.03, na}},  {11, 25.0, 7.17, {9.79, 2.49, na}},
      {20, 20.0, 1.63, {2.57, 0.90, 0.19}}, {21, 20.0, 2.08, {3.26, 1.17, 0.21}},
      {22, 20.0, 2.43, {3.77, 1.36, 0.24}}, {23, 20.0, 2.93, {4.49, 1.64, 0.27}},
      {24, 20.0, 3.65, {5.48, 2.01, 0.32}},
  };
  return rows;
}

/// Steady-state errors as tabulated: n, E1, E2, E3, E4.
struct SteadyRow {
  int n;
  double E1, E2, E3, E4;
};

inline const std::vector<SteadyRow>& steady_rows() {
  static const std::vector<SteadyRow> rows{
      {100, 1.98e-3, 7.55e-3, 8.54e-5, 1.33e-1}, {200, 1.09e-3, 3.15e-3, 3.83e-5, 6.77e-2},
      {400, 4.23e-4, 1.05e-3, 1.76e-5, 3.40e-2}, {800, 1.73e-4, 4.07e-4, 8.51e-6, 1.70e-2},
      {1600, 7.92e-5, 1.82e-4, 4.20e-6, 8.51e-3}, {3200, 3.62e-5, 8.51e-5, 2.09e-6, 4.25e-3},
      {6400, 1.85e-5, 4.31e-5, 1.05e-6, 2.13e-3},
  };
  return rows;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kSmoothingTarget = 0.075;  // smoothing length on the reference mesh [m]
constexpr int kSmoothingReference = 1600;

inline double solitary_cadence(double h0, double alpha, double g) {
  return h0 / std::sqrt(g * (h0 + alpha)) / 100.0;
}

inline ScenarioConfig steady() {
  ScenarioConfig c;
  c.name = "steady";
  c.description = "exact steady flow over a sech^2 bump (h0 = 1, a = 0.2)";
  c.x_min = -10.0;
  c.x_max = 15.0;
  c.n_elements = 200;
  c.h_ref = 1.0;
  c.bathymetry.kind = BathymetrySpec::Kind::SolitonBump;
  c.bathymetry.bump = {1.0, 0.2, c.g};
  c.initial.kind = InitialSpec::Kind::Steady;
  c.initial.steady = c.bathymetry.bump;
  // Inflow: every field on the constraint manifold of the exact state;
  // outflow: the water height only.
  const auto in = analytic::steady_state_exact(c.x_min, c.initial.steady);
  const auto out = analytic::steady_state_exact(c.x_max, c.initial.steady);
  c.boundaries.left = fem::Boundary::dirichlet({in.h, in.q, in.h * in.h, 0.0, 0.0},
                                               {true, true, true, true, true});
  c.boundaries.right = fem::Boundary::dirichlet({out.h, 0.0, 0.0, 0.0, 0.0},
                                                {true, false, false, false, false});
  c.time.t_final = 100.0;
  c.time.cfl = 0.5;
  c.time.steady_tolerance = 1e-10;
  c.time.sample_interval = 0.5;
  c.gauges = {-5.0, 0.0, 5.0};
  return c;
}

inline ScenarioConfig lake_at_rest() {
  ScenarioConfig c;
  c.name = "lake-at-rest";
  c.description = "still water over the smoothed triangle";
  c.x_min = -20.0;
  c.x_max = 20.0;
  c.n_elements = 800;
  c.h_ref = 0.125;
  c.bathymetry.kind = BathymetrySpec::Kind::SmoothedTriangle;
  c.bathymetry.height = 0.1;
  c.bathymetry.half_base = 0.0705;
  c.bathymetry.smoothing_depth = 0.125;
  c.bathymetry.smoothing_d = analytic::smoothing_constant(kSmoothingTarget, 0.125, 40.0,
                                                          kSmoothingReference);
  c.initial.kind = InitialSpec::Kind::StillWater;
  c.initial.level = 0.125;
  c.time.t_final = 10.0;
  c.time.cfl = 0.1;
  c.time.sample_interval = 0.01;
  c.gauges = {-5.0, 0.0, 5.0};
  return c;
}

inline ScenarioConfig solitary() {
  ScenarioConfig c;
  c.name = "solitary";
  c.description = "solitary wave on a flat bottom (h0 = 0.25, alpha = 0.05)";
  c.x_min = -5.0;
  c.x_max = 35.0;
  c.n_elements = 3200;
  c.h_ref = 0.25;
  c.initial.kind = InitialSpec::Kind::Solitary;
  c.initial.level = 0.25;
  c.initial.solitary = {0.25, 0.05, 5.0};
  c.time.t_final = 10.0;
  c.time.cfl = 0.1;
  c.time.sample_interval = solitary_cadence(0.25, 0.05, c.g);
  c.gauges = {10.0, 15.0, 20.0};
  return c;
}

inline ScenarioConfig triangle(const TriangleRow& r) {
  const double h0 = r.h0_cm / 100.0;
  const double alpha = r.alpha_cm / 100.0;
  ScenarioConfig c;
  c.name = "triangle-" + std::to_string(r.exp);
  c.description = "solitary wave over a triangular obstacle, Exp. " + std::to_string(r.exp);
  c.x_min = -20.0;
  c.x_max = 20.0;
  c.n_elements = 3200;
  c.h_ref = h0;
  c.bathymetry.kind = BathymetrySpec::Kind::SmoothedTriangle;
  c.bathymetry.height = 0.1;
  c.bathymetry.half_base = 0.0705;
  c.bathymetry.smoothing_depth = h0;
  c.bathymetry.smoothing_d =
      analytic::smoothing_constant(kSmoothingTarget, h0, 40.0, kSmoothingReference);
  c.initial.kind = InitialSpec::Kind::Solitary;
  c.initial.level = h0;
  c.initial.solitary = {h0, alpha, -15.0 * h0};
  c.time.t_final = 10.0;
  c.time.cfl = 0.1;
  c.time.sample_interval = solitary_cadence(h0, alpha, c.g);
  c.gauges = {-25.0 * h0};
  return c;
}

inline ScenarioConfig step(const StepRow& r) {
  const double h0 = r.h0_cm / 100.0;
  const double alpha = r.alpha_cm / 100.0;
  ScenarioConfig c;
  c.name = "step-" + std::to_string(r.exp);
  c.description = "solitary wave over a step, Exp. " + std::to_string(r.exp);
  c.x_min = -10.0;
  c.x_max = 30.0;
  c.n_elements = 3200;
  c.h_ref = h0;
  c.bathymetry.kind = BathymetrySpec::Kind::SmoothedStep;
  c.bathymetry.height = 0.1;
  c.bathymetry.smoothing_depth = h0;
  c.bathymetry.smoothing_d =
      analytic::smoothing_constant(kSmoothingTarget, h0, 40.0, kSmoothingReference);
  c.initial.kind = InitialSpec::Kind::Solitary;
  c.initial.level = h0;
  c.initial.solitary = {h0, alpha, -15.0 * h0};
  SpongeSpec abs;
  abs.x_begin = -10.0;
  abs.x_end = -5.0;
  abs.outer = fem::SpongeZone::Outer::Left;
  abs.level = h0;
  c.sponges = {abs};
  c.time.t_final = r.exp < 20 ? 20.0 : 25.0;
  c.time.cfl = 0.1;
  c.time.sample_interval = solitary_cadence(h0, alpha, c.g);
  c.gauges = {15.0};
  return c;
}

struct ShoalingCase {
  int id;
  double ratio;
  std::array<double, 3> gauges;
};

inline ScenarioConfig shoaling(const ShoalingCase& s) {
  constexpr double h0 = 0.25;
  ScenarioConfig c;
  c.name = "shoaling-" + std::to_string(s.id);
  c.description = "solitary wave shoaling on a 1/30 beach, case " + std::to_string(s.id);
  c.x_min = -5.0;
  c.x_max = 35.0;
  c.n_elements = 1600;
  c.h_ref = h0;
  c.bathymetry.kind = BathymetrySpec::Kind::Beach;
  c.bathymetry.depth = h0;
  c.bathymetry.toe = 25.0;
  c.bathymetry.slope = 1.0 / 30.0;
  c.initial.kind = InitialSpec::Kind::Solitary;
  c.initial.level = 0.0;
  c.initial.solitary = {h0, s.ratio * h0, 0.0};
  c.time.t_final = 10.0;
  c.time.cfl = 0.1;
  c.time.sample_interval = solitary_cadence(h0, s.ratio * h0, c.g);
  c.gauges = {s.gauges.begin(), s.gauges.end()};
  return c;
}

inline ScenarioConfig bar(bool long_waves) {
  constexpr double H0 = 0.4;
  ScenarioConfig c;
  c.name = long_waves ? "bar-SL" : "bar-SH";
  c.description = long_waves ? "long periodic waves over a submerged bar"
                             : "short periodic waves over a submerged bar";
  c.x_min = -12.3;
  c.x_max = 37.7;
  c.n_elements = 2000;
  c.h_ref = H0;
  c.bathymetry.kind = BathymetrySpec::Kind::TrapezoidBar;
  c.initial.kind = InitialSpec::Kind::StillWater;
  c.initial.level = H0;
  c.nominal_period = long_waves ? 2.0 : 1.25;
  c.adjusted_period = long_waves ? 2.01975 : 1.26215;
  SpongeSpec gen;
  gen.kind = fem::SpongeZone::Kind::Generation;
  gen.outer = fem::SpongeZone::Outer::Left;
  gen.x_begin = c.x_min;
  gen.x_end = c.x_min + (long_waves ? 6.0 : 4.0);
  gen.level = H0;
  gen.depth = H0;
  gen.amplitude = long_waves ? 0.01 : 0.014;
  gen.period = c.adjusted_period;
  SpongeSpec abs;
  abs.x_begin = 25.0;
  abs.x_end = c.x_max;
  abs.outer = fem::SpongeZone::Outer::Right;
  abs.level = H0;
  c.sponges = {gen, abs};
  c.time.t_final = 60.0;
  c.time.cfl = 0.175;
  c.time.sample_interval = c.adjusted_period / 100.0;
  c.gauges = {5.7, 10.5, 12.5, 13.5, 14.5, 15.7, 17.3};
  return c;
}

inline std::vector<ScenarioConfig> build_registry() {
  std::vector<ScenarioConfig> r{steady(), lake_at_rest(), solitary()};
  for (const auto& row : triangle_rows()) r.push_back(triangle(row));
  for (const auto& row : step_rows()) r.push_back(step(row));
  const std::array<ShoalingCase, 4> cases{{{1, 0.096, {7.75, 8.25, 8.75}},
                                           {2, 0.2975, {5.75, 6.25, 6.75}},
                                           {3, 0.456, {4.25, 5.0, 5.75}},
                                           {4, 0.5343, {4.25, 5.0, 5.75}}}};
  for (const auto& s : cases) r.push_back(shoaling(s));
  r.push_back(bar(true));
  r.push_back(bar(false));
  for (const auto& c : r) c.validate();
  return r;
}

}  // namespace detail

inline const std::vector<ScenarioConfig>& scenario_registry() {
  static const std::vector<ScenarioConfig> registry = detail::build_registry();
  return registry;
}

inline std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& c : scenario_registry()) out.push_back(c.name);
  return out;
}

inline const ScenarioConfig& find_scenario(const std::string& name) {
  for (const auto& c : scenario_registry()) {
    if (c.name == name) return c;
  }
  std::ostringstream os;
  os << "unknown scenario '" << name << "'; available:";
  for (const auto& n : scenario_names()) os << ' ' << n;
  throw std::invalid_argument(os.str());
}

}  // namespace serre::harness
