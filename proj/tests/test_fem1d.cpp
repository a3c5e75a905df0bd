#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "serre/analytic.hpp"
#include "serre/fem1d.hpp"
#include "serre/initial.hpp"
#include "serre/mesh.hpp"
#include "serre/run.hpp"

using namespace serre;
using analytic::BathymetryProfile;

namespace {

fem::Solver make_solver(const Mesh1D& mesh, const BathymetryProfile& prof, double h_ref,
                        fem::SolverOptions opt = {}) {
  opt.h_ref = h_ref;
  return fem::Solver(mesh, NodalBathymetry(mesh, prof), opt);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// --- mesh -------------------------------------------------------------------

TEST(Mesh, NodesMassesAndEps) {
  Mesh1D m(-1.0, 3.0, 8);
  EXPECT_EQ(m.num_nodes(), 9u);
  EXPECT_DOUBLE_EQ(m.dx(), 0.5);
  EXPECT_EQ(m.x(0), -1.0);
  EXPECT_EQ(m.x(8), 3.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    EXPECT_GT(m.mass(i), 0.0);
    EXPECT_EQ(m.eps(i), m.mass(i));
    if (i > 0) { EXPECT_GT(m.x(i), m.x(i - 1)); }
    total += m.mass(i);
  }
  EXPECT_DOUBLE_EQ(total, 4.0);
  EXPECT_DOUBLE_EQ(m.mass(0), 0.25);
  EXPECT_THROW(Mesh1D(0.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(Mesh1D(1.0, 1.0, 4), std::invalid_argument);
}

TEST(Mesh, GradientAndLocate) {
  Mesh1D m(0.0, 2.0, 20);
  std::vector<double> f(m.num_nodes());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 3.0 * m.x(i) - 1.0;
  const auto d = m.gradient(f);
  for (std::size_t i = 1; i + 1 < f.size(); ++i) EXPECT_NEAR(d[i], 3.0, 1e-12);
  const auto [e, s] = m.locate(0.25);
  EXPECT_EQ(e, 2u);
  EXPECT_NEAR(s, 0.5, 1e-12);
  EXPECT_EQ(m.locate(2.0).first, 19u);
  EXPECT_THROW(m.locate(2.1), std::out_of_range);
}

// --- spatial residual ------------------------------------------------------------

TEST(SpatialResidual, LakeAtRestIsExactlyZero) {
  for (int n : {100, 800}) {
    Mesh1D mesh(-20.0, 20.0, n);
    for (auto ind : {fem::Indicator::RelaxedEnergy, fem::Indicator::ShallowWater}) {
      fem::SolverOptions opt;
      opt.indicator = ind;
      auto solver =
          make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.0705, 0.075), 0.125, opt);
      const auto u = still_water(mesh, solver.bathymetry(), 0.125);
      for (auto order : {fem::Stabilization::FirstOrder, fem::Stabilization::SecondOrder}) {
        const auto r = solver.spatial_residual(u, order);
        EXPECT_EQ(max_abs(r.h), 0.0);
        EXPECT_EQ(max_abs(r.q), 0.0);
        EXPECT_EQ(max_abs(r.q1), 0.0);
        EXPECT_EQ(max_abs(r.q2), 0.0);
        EXPECT_EQ(max_abs(r.q3), 0.0);
      }
    }
  }
}

TEST(SpatialResidual, IndicatorsAgreeOnSmoothFlatFlow) {
  // On q1 = h^2, q2 = q3 = 0 the relaxed energy collapses to the
  // shallow-water one, so both indicators give the same psi.
  Mesh1D mesh(-10.0, 10.0, 400);
  fem::SolverOptions a, b;
  a.hyperviscosity = b.hyperviscosity = 0.0;
  b.indicator = fem::Indicator::ShallowWater;
  auto sa = make_solver(mesh, BathymetryProfile::flat(), 1.0, a);
  auto sb = make_solver(mesh, BathymetryProfile::flat(), 1.0, b);
  Fields u(mesh.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double h = 1.0 + 0.01 * std::exp(-mesh.x(i) * mesh.x(i));
    u.set(i, {h, 0.3 * h, h * h, 0.0, 0.0});
  }
  const auto ra = sa.spatial_residual(u, fem::Stabilization::SecondOrder);
  const auto rb = sb.spatial_residual(u, fem::Stabilization::SecondOrder);
  const auto rl = sa.spatial_residual(u, fem::Stabilization::FirstOrder);
  double dab = 0.0, dlow = 0.0;
  for (std::size_t i = 2; i + 2 < u.size(); ++i) {
    dab = std::max(dab, std::abs(ra.h[i] - rb.h[i]));
    dlow = std::max(dlow, std::abs(ra.h[i] - rl.h[i]));
  }
  EXPECT_GT(dlow, 0.0);
  EXPECT_LE(dab, 1e-8 * dlow);
}

TEST(SpatialResidual, UniformFlowOnFlatBottom) {
  Mesh1D mesh(0.0, 10.0, 50);
  auto solver = make_solver(mesh, BathymetryProfile::flat(), 1.0);
  Fields u(mesh.num_nodes());
  for (std::size_t i = 0; i < u.size(); ++i) u.set(i, {1.0, 0.4, 1.0, 0.0, 0.0});
  for (auto order : {fem::Stabilization::FirstOrder, fem::Stabilization::SecondOrder}) {
    const auto r = solver.spatial_residual(u, order);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
      EXPECT_NEAR(r.h[i], 0.0, 1e-14);
      EXPECT_NEAR(r.q[i], 0.0, 1e-14);
      EXPECT_NEAR(r.q1[i], 0.0, 1e-14);
      EXPECT_NEAR(r.q2[i], 0.0, 1e-14);
    }
  }
}

TEST(SpatialResidual, MassRateTelescopes) {
  Mesh1D mesh(-5.0, 5.0, 64);
  auto solver = make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.5, 0.1), 0.5);
  auto u = still_water(mesh, solver.bathymetry(), 0.5);
  for (std::size_t k : {1u, 20u, 32u, 63u}) {
    auto w = u;
    w.h[k] += 0.05;
    w.q1[k] = w.h[k] * w.h[k];
    for (auto order : {fem::Stabilization::FirstOrder, fem::Stabilization::SecondOrder}) {
      const auto r = solver.spatial_residual(w, order);
      double total = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        total += mesh.mass(i) * r.h[i];
        scale += mesh.mass(i) * std::abs(r.h[i]);
      }
      EXPECT_LE(std::abs(total), 1e-14 * std::max(1.0, scale)) << k;
    }
  }
}

TEST(SpatialResidual, RejectsInadmissibleInput) {
  Mesh1D mesh(0.0, 1.0, 10);
  auto solver = make_solver(mesh, BathymetryProfile::flat(), 1.0);
  auto u = still_water(mesh, solver.bathymetry(), 1.0);
  u.h[3] = -0.1;
  try {
    solver.spatial_residual(u);
    FAIL() << "expected NumericalError";
  } catch (const fem::NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("node 3"), std::string::npos);
  }
  u.h[3] = 1.0;
  u.q[5] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solver.spatial_residual(u), fem::NumericalError);
}

// --- time stepping ---------------------------------------------------------------

TEST(SspRk33, LinearOdeIsThirdOrder) {
  // du/dt = -2u + cos t over [0, 1].
  auto rate = [](double u, double t) { return -2.0 * u + std::cos(t); };
  auto exact = [](double t) {
    return (2.0 * std::cos(t) + std::sin(t)) / 5.0 + (1.0 - 0.4) * std::exp(-2.0 * t);
  };
  std::vector<double> err;
  for (int n : {80, 160, 320, 640}) {
    double u = 1.0, t = 0.0;
    const double dt = 1.0 / n;
    for (int k = 0; k < n; ++k) {
      fem::step_ssprk33(u, t, dt, rate);
      t += dt;
    }
    err.push_back(std::abs(u - exact(1.0)));
  }
  for (std::size_t k = 1; k < err.size(); ++k) {
    EXPECT_NEAR(std::log2(err[k - 1] / err[k]), 3.0, 0.15);
  }
}

TEST(SspRk33, ZeroRateIsIdentity) {
  double u = 0.123456789;
  fem::step_ssprk33(u, 0.0, 0.5, [](double, double) { return 0.0; });
  EXPECT_EQ(u, 0.123456789);
}

TEST(SspRk33, LakeAtRestStepIsBitwiseIdentical) {
  Mesh1D mesh(-20.0, 20.0, 400);
  auto solver = make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.0705, 0.1), 0.125);
  const auto u0 = still_water(mesh, solver.bathymetry(), 0.125);
  auto u = u0;
  const double dt = solver.compute_dt(u, 0.1);
  for (int k = 0; k < 10; ++k) solver.step(u, k * dt, dt);
  EXPECT_TRUE(u == u0);
}

TEST(ComputeDt, StillWaterOracle) {
  // lambda_bar -> 0 is the eps -> infinity limit: the bound is sqrt(g h).
  Mesh1D mesh(0.0, 1.0, 100);
  fem::SolverOptions opt;
  opt.lambda_bar = 1e-300;
  auto solver = make_solver(mesh, BathymetryProfile::flat(), 1.0, opt);
  const auto u = still_water(mesh, solver.bathymetry(), 1.0);
  const double dt = solver.compute_dt(u, 0.1);
  EXPECT_NEAR(dt, 0.1 * 0.01 / (2.0 * std::sqrt(9.81)), 1e-15);
  EXPECT_NEAR(dt, 1.596e-4, 1e-7);

  Mesh1D fine(0.0, 1.0, 200);
  auto s2 = make_solver(fine, BathymetryProfile::flat(), 1.0, opt);
  EXPECT_NEAR(s2.compute_dt(still_water(fine, s2.bathymetry(), 1.0), 0.1), 0.5 * dt, 1e-15);
  EXPECT_THROW(solver.compute_dt(u, 0.0), std::invalid_argument);
  EXPECT_THROW(solver.compute_dt(u, 1.5), std::invalid_argument);
}

TEST(ComputeDt, ShrinksWithEpsilonAndFallsBackWhenDry) {
  Mesh1D coarse(0.0, 1.0, 50), fine(0.0, 1.0, 100);
  auto a = make_solver(coarse, BathymetryProfile::flat(), 1.0);
  auto b = make_solver(fine, BathymetryProfile::flat(), 1.0);
  const double dta = a.compute_dt(still_water(coarse, a.bathymetry(), 1.0), 0.1);
  const double dtb = b.compute_dt(still_water(fine, b.bathymetry(), 1.0), 0.1);
  EXPECT_LT(dtb, 0.5 * dta);  // relaxation speed grows as eps shrinks
  const Fields dry(coarse.num_nodes());
  EXPECT_NEAR(a.compute_dt(dry, 0.1), 0.1 * 0.01 / std::sqrt(9.81), 1e-15);
}

// --- boundaries and sponges -------------------------------------------------------

TEST(Boundaries, WallAndMatchingDirichletLeaveStateUnchanged) {
  Mesh1D mesh(-10.0, 15.0, 100);
  auto wall = make_solver(mesh, BathymetryProfile::smoothed_step(0.1, 0.2), 0.5);
  auto u = still_water(mesh, wall.bathymetry(), 0.5);
  const auto u0 = u;
  wall.apply_boundaries(u);
  EXPECT_TRUE(u == u0);

  fem::SolverOptions opt;
  opt.boundaries.left = fem::Boundary::dirichlet(u0.at(0), {true, true, true, true, true});
  opt.boundaries.right = fem::Boundary::dirichlet(u0.at(100), {true, false, false, false, false});
  auto dir = make_solver(mesh, BathymetryProfile::smoothed_step(0.1, 0.2), 0.5, opt);
  dir.apply_boundaries(u);
  EXPECT_TRUE(u == u0);
}

TEST(Boundaries, DirichletOverwritesMaskedComponentsOnly) {
  Mesh1D mesh(0.0, 1.0, 10);
  fem::SolverOptions opt;
  opt.boundaries.right = fem::Boundary::dirichlet({2.0, 3.0, 4.0, 5.0, 6.0}, {true, false, true, false, false});
  auto s = make_solver(mesh, BathymetryProfile::flat(), 1.0, opt);
  auto u = still_water(mesh, s.bathymetry(), 1.0);
  u.q[10] = 0.7;
  s.apply_boundaries(u);
  EXPECT_EQ(u.h[10], 2.0);
  EXPECT_EQ(u.q[10], 0.7);
  EXPECT_EQ(u.q1[10], 4.0);
  EXPECT_EQ(u.q2[10], 0.0);
  // Left is a wall: the normal discharge is removed.
  u.q[0] = 0.3;
  s.apply_boundaries(u);
  EXPECT_EQ(u.q[0], 0.0);
}

TEST(Boundaries, WallStepConservesMass) {
  Mesh1D mesh(-5.0, 5.0, 200);
  auto s = make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.3, 0.05), 0.3);
  auto u = solitary_initial_condition(mesh, s.bathymetry(), {0.3, 0.06, -2.0}, 9.81, 0.3);
  s.apply_boundaries(u);
  const double m0 = s.total_mass(u);
  double t = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double dt = s.compute_dt(u, 0.2);
    s.step(u, t, dt);
    t += dt;
    EXPECT_LE(std::abs(s.total_mass(u) - m0), 1e-13 * m0);
  }
}

TEST(Sponges, RampAndTargetFixedPoint) {
  fem::SpongeZone z;
  z.x_begin = 5.0;
  z.x_end = 10.0;
  z.outer = fem::SpongeZone::Outer::Right;
  EXPECT_EQ(z.ramp(5.0), 0.0);
  EXPECT_EQ(z.ramp(10.0), 1.0);
  EXPECT_NEAR(z.ramp(7.5), 0.125, 1e-15);
  EXPECT_EQ(z.ramp(4.0), 0.0);
  z.outer = fem::SpongeZone::Outer::Left;
  EXPECT_EQ(z.ramp(5.0), 1.0);
  EXPECT_EQ(z.ramp(10.0), 0.0);
  // Continuity at the inner edge.
  EXPECT_LT(z.ramp(10.0 - 1e-6), 1e-17);

  Mesh1D mesh(0.0, 10.0, 100);
  fem::SolverOptions opt;
  z.tau = 0.01;
  z.target = [](double, double) { return PrimitiveState{1.0, 0.0, 1.0, 0.0, 0.0}; };
  opt.sponges = {z};
  auto s = make_solver(mesh, BathymetryProfile::flat(), 1.0, opt);
  auto u = still_water(mesh, s.bathymetry(), 1.0);
  const auto u0 = u;
  s.apply_sponges(u, 0.0, 0.001);
  EXPECT_TRUE(u == u0);
  u.h[70] = 1.1;
  s.apply_sponges(u, 0.0, 0.001);
  EXPECT_LT(u.h[70], 1.1);
  EXPECT_GT(u.h[70], 1.0);
}

TEST(Sponges, AbsorptionZoneReflectsUnderOnePercent) {
  // Solitary wave running into a 5 m absorption zone at the right end.
  const double h0 = 0.25, alpha = 0.05;
  Mesh1D mesh(-10.0, 10.0, 800);
  fem::SolverOptions opt;
  opt.h_ref = h0;
  fem::SpongeZone z;
  z.x_begin = 5.0;
  z.x_end = 10.0;
  z.outer = fem::SpongeZone::Outer::Right;
  z.tau = 10.0 * 0.5 * mesh.dx() / std::sqrt(9.81 * h0);
  z.target = [h0](double, double) { return PrimitiveState{h0, 0.0, h0 * h0, 0.0, 0.0}; };
  opt.sponges = {z};
  fem::Solver s(mesh, NodalBathymetry(mesh, BathymetryProfile::flat()), opt);
  const analytic::SolitaryParams p{h0, alpha, -3.0};
  auto u = solitary_initial_condition(mesh, s.bathymetry(), p, 9.81, h0);
  fem::TimeControls tc;
  tc.t_final = 12.0;
  tc.cfl = 0.25;
  tc.sample_interval = 0.005;
  const double xg = 0.0;
  const auto rec = fem::run(s, u, tc, {xg});
  // Window: five widths behind the incident crest, where its own tail is
  // below alpha sech^2(5) ~ 2e-4 alpha.
  const double c = analytic::solitary_speed(p, 9.81);
  const double t_open = (xg - p.x0) / c + 5.0 / (analytic::solitary_width(p) * c);
  double refl = 0.0;
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    if (rec.times[k] > t_open) refl = std::max(refl, std::abs(rec.gauges[0][k] - h0));
  }
  EXPECT_LT(refl, 0.01 * alpha);
}

// --- run loop ------------------------------------------------------------------

TEST(Run, ZeroFinalTimeEchoesInitialState) {
  Mesh1D mesh(-5.0, 5.0, 100);
  auto s = make_solver(mesh, BathymetryProfile::flat(), 0.5);
  auto u = solitary_initial_condition(mesh, s.bathymetry(), {0.5, 0.1, 0.0}, 9.81);
  s.apply_boundaries(u);
  fem::TimeControls tc;
  tc.t_final = 0.0;
  const auto rec = fem::run(s, u, tc, {0.0});
  EXPECT_EQ(rec.steps, 0u);
  ASSERT_EQ(rec.snapshots.size(), 1u);
  EXPECT_TRUE(rec.snapshots[0].state == u);
  EXPECT_TRUE(rec.final_state == u);
}

TEST(Run, LandsOnOutputTimesAndSamplesAtCadence) {
  Mesh1D mesh(-5.0, 5.0, 100);
  auto s = make_solver(mesh, BathymetryProfile::flat(), 0.5);
  const auto u = solitary_initial_condition(mesh, s.bathymetry(), {0.5, 0.1, 0.0}, 9.81);
  fem::TimeControls tc;
  tc.t_final = 0.3;
  tc.cfl = 0.5;
  tc.output_times = {0.1, 0.2, 5.0};
  tc.sample_interval = 0.05;
  const auto rec = fem::run(s, u, tc, {-1.0, 1.0});
  ASSERT_EQ(rec.snapshots.size(), 3u);
  EXPECT_EQ(rec.snapshots[0].t, 0.1);
  EXPECT_EQ(rec.snapshots[1].t, 0.2);
  EXPECT_EQ(rec.snapshots[2].t, 0.3);
  EXPECT_EQ(rec.t_end, 0.3);
  EXPECT_EQ(rec.gauges.size(), 2u);
  EXPECT_EQ(rec.times.size(), rec.gauges[0].size());
  EXPECT_GE(rec.times.size(), 7u);
  EXPECT_LE(rec.times.size(), 9u);
  for (std::size_t k = 1; k < rec.times.size(); ++k) EXPECT_GT(rec.times[k], rec.times[k - 1]);
  EXPECT_THROW(fem::run(s, u, tc, {6.0}), std::out_of_range);
}

TEST(Run, LakeAtRestTenSecondsIsWellBalanced) {
  Mesh1D mesh(-20.0, 20.0, 800);
  auto s = make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.0705, 0.075), 0.125);
  const auto u = still_water(mesh, s.bathymetry(), 0.125);
  fem::TimeControls tc;
  tc.t_final = 10.0;
  tc.cfl = 0.1;
  tc.sample_interval = 1.0;
  const auto rec = fem::run(s, u, tc, {0.0});
  double dev = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dev = std::max(dev, std::abs(rec.final_state.h[i] + s.bathymetry().z[i] - 0.125));
  }
  EXPECT_LE(dev, 1e-12);
  EXPECT_GE(rec.steps, 10000u);
}

TEST(Run, SteadyDetectionStopsEarly) {
  Mesh1D mesh(-10.0, 10.0, 50);
  auto s = make_solver(mesh, BathymetryProfile::smoothed_step(0.1, 0.5), 0.5);
  const auto u = still_water(mesh, s.bathymetry(), 0.5);
  fem::TimeControls tc;
  tc.t_final = 100.0;
  tc.steady_tolerance = 1e-12;
  const auto rec = fem::run(s, u, tc, {});
  EXPECT_TRUE(rec.steady_reached);
  EXPECT_EQ(rec.steps, 1u);
}

// --- model-level invariants ---------------------------------------------------------

TEST(Invariants, FlatBottomVariantsProduceIdenticalGauges) {
  Mesh1D mesh(-5.0, 15.0, 200);
  const analytic::SolitaryParams p{0.25, 0.05, 0.0};
  fem::TimeControls tc;
  tc.t_final = 2.0;
  tc.cfl = 0.2;
  std::vector<std::vector<double>> g;
  for (auto v : {ModelVariant::Full, ModelVariant::Incomplete}) {
    fem::SolverOptions opt;
    opt.variant = v;
    auto s = make_solver(mesh, BathymetryProfile::flat(), 0.25, opt);
    auto u = solitary_initial_condition(mesh, s.bathymetry(), p, 9.81, 0.25, v);
    g.push_back(fem::run(s, u, tc, {3.0}).gauges[0]);
  }
  ASSERT_EQ(g[0].size(), g[1].size());
  for (std::size_t k = 0; k < g[0].size(); ++k) EXPECT_NEAR(g[0][k], g[1][k], 1e-12);
}

TEST(Invariants, FirstOrderEnergyIsNonIncreasing) {
  Mesh1D mesh(-20.0, 20.0, 400);
  fem::SolverOptions opt;
  opt.stabilization = fem::Stabilization::FirstOrder;
  auto s = make_solver(mesh, BathymetryProfile::smoothed_triangle(0.1, 0.0705, 0.2), 0.125, opt);
  auto u = solitary_initial_condition(mesh, s.bathymetry(), {0.125, 0.0475, -1.875}, 9.81, 0.125);
  const double E0 = s.total_energy(u);
  double prev = E0, worst = -1.0;
  fem::TimeControls tc;
  tc.t_final = 3.0;
  tc.cfl = 0.1;
  tc.sample_interval = 1.0;
  fem::run(s, u, tc, {}, [&](double, double, const Fields& w) {
    const double e = s.total_energy(w);
    worst = std::max(worst, (e - prev) / E0);
    prev = e;
  });
  EXPECT_LE(worst, 1e-10);
}

TEST(Invariants, PositivityOnDryingBeach) {
  Mesh1D mesh(-5.0, 35.0, 400);
  auto s = make_solver(mesh, BathymetryProfile::beach(0.25, 25.0, 1.0 / 30.0), 0.25);
  auto u = solitary_initial_condition(mesh, s.bathymetry(), {0.25, 0.05, 5.0}, 9.81, 0.0);
  double t = 0.0;
  double hmin = 1.0;
  while (t < 10.0) {
    const double dt = s.compute_dt(u, 0.1);
    s.step(u, t, dt);
    t += dt;
    for (double h : u.h) hmin = std::min(hmin, h);
  }
  EXPECT_GE(hmin, 0.0);
}

TEST(Invariants, VerticalDatumShift) {
  // Same flow with bottom at 0 and at -0.25; the wave starts close to a wall.
  Mesh1D mesh(-5.0, 35.0, 800);
  auto sa = make_solver(mesh, BathymetryProfile::flat(0.0), 0.25);
  auto sb = make_solver(mesh, BathymetryProfile::flat(-0.25), 0.25);
  auto ua = solitary_initial_condition(mesh, sa.bathymetry(), {0.25, 0.024, 0.0}, 9.81, 0.25);
  auto ub = solitary_initial_condition(mesh, sb.bathymetry(), {0.25, 0.024, 0.0}, 9.81, 0.0);
  double t = 0.0;
  while (t < 1.0) {
    const double dt = sa.compute_dt(ua, 0.1);
    sa.step(ua, t, dt);
    sb.step(ub, t, dt);
    t += dt;
  }
  for (std::size_t i = 0; i < ua.size(); ++i) {
    ASSERT_NEAR(ua.h[i], ub.h[i], 1e-10) << i;
    ASSERT_NEAR(ua.q[i], ub.q[i], 1e-10) << i;
  }
}

TEST(Initial, RelaxationFieldsOnManifold) {
  Mesh1D mesh(-20.0, 20.0, 400);
  const auto prof = BathymetryProfile::smoothed_triangle(0.1, 0.0705, 0.1);
  NodalBathymetry b(mesh, prof);
  const auto u = solitary_initial_condition(mesh, b, {0.125, 0.0475, -1.875}, 9.81, 0.125);
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u.h[i] > 0 ? u.q[i] / u.h[i] : 0.0;
  const auto dv = mesh.gradient(v);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(u.q1[i], u.h[i] * u.h[i]);
    EXPECT_DOUBLE_EQ(u.q3[i], u.q[i] * b.dzdx[i]);
    if (b.dzdx[i] == 0.0) { EXPECT_EQ(u.q3[i], 0.0); }
    EXPECT_NEAR(u.q2[i], -u.h[i] * u.h[i] * dv[i] + 1.5 * u.q3[i], 1e-14);
  }
  const auto rest = solitary_initial_condition(mesh, NodalBathymetry(mesh, BathymetryProfile::flat()),
                                               {0.125, 0.0, 0.0}, 9.81);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_EQ(rest.h[i], 0.125);
    EXPECT_EQ(rest.q1[i], 0.125 * 0.125);
    EXPECT_EQ(rest.q2[i], 0.0);
    EXPECT_EQ(rest.q3[i], 0.0);
  }
}
