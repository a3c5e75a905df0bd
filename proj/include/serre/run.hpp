#pragma once

// Time loop: steps a Solver to a final time, sampling gauges and
// diagnostics at a fixed cadence and storing field snapshots at requested times.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "serre/fem1d.hpp"
#include "serre/mesh.hpp"

namespace serre::fem {

struct TimeControls {
  double t_final = 1.0;
  double cfl = 0.1;
  std::vector<double> output_times{};  // snapshots; t_final is always included
  // Stop early once max_i |h^{n+1} - h^n| / dt falls below this (0 disables).
  double steady_tolerance = 0.0;
  std::size_t max_steps = std::numeric_limits<std::size_t>::max();
  // Gauge/diagnostic cadence [s]; a sample is taken at the first step reaching
  // each multiple of the interval. 0 samples every step.
  double sample_interval = 0.0;

  void validate() const {
    if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be non-negative");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
    if (!(sample_interval >= 0.0)) throw std::invalid_argument("sample_interval must be non-negative");
  }
};

struct DiagnosticsRow {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double E3 = 0.0;
  double E4 = 0.0;
};

struct Snapshot {
  double t = 0.0;
  Fields state;
};

struct SimulationRecord {
  std::vector<double> gauge_x;
  std::vector<double> times;                // gauge sample times
  std::vector<std::vector<double>> gauges;  // gauges[k][n]: gauge k at times[n]
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Snapshot> snapshots;
  Fields final_state;
  double t_end = 0.0;
  std::size_t steps = 0;
  bool steady_reached = false;
};

/// Optional per-step hook, called after each accepted step with (t, dt, u).
using StepObserver = std::function<void(double, double, const Fields&)>;

inline SimulationRecord run(const Solver& solver, Fields u, const TimeControls& tc,
                            const std::vector<double>& gauge_x,
                            const StepObserver& observer = {}) {
  tc.validate();
  SimulationRecord rec;
  rec.gauge_x = gauge_x;
  rec.gauges.assign(gauge_x.size(), {});
  for (double x : gauge_x) (void)solver.mesh().locate(x);  // range check up front
  solver.apply_boundaries(u);
  solver.check_admissible(u);

  std::vector<double> outs = tc.output_times;
  outs.erase(std::remove_if(outs.begin(), outs.end(),
                            [&](double t) { return t < 0.0 || t > tc.t_final; }),
             outs.end());
  outs.push_back(tc.t_final);
  std::sort(outs.begin(), outs.end());
  outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
  std::size_t next_out = 0;

  auto sample = [&](double t, double dt) {
    rec.times.push_back(t);
    for (std::size_t k = 0; k < gauge_x.size(); ++k) {
      rec.gauges[k].push_back(solver.free_surface(u, gauge_x[k]));
    }
    const auto [e3, e4] = solver.relaxation_errors(u);
    rec.diagnostics.push_back({t, dt, solver.total_mass(u), solver.total_energy(u), e3, e4});
  };
  auto snapshot_due = [&](double t) {
    while (next_out < outs.size() && outs[next_out] <= t + 1e-12 * std::max(1.0, t)) {
      rec.snapshots.push_back({outs[next_out], u});
      ++next_out;
    }
  };

  double t = 0.0;
  double next_sample = tc.sample_interval;
  sample(t, 0.0);
  snapshot_due(t);

  Fields prev;
  while (t < tc.t_final && rec.steps < tc.max_steps) {
    double dt = solver.compute_dt(u, tc.cfl);
    const double remaining = tc.t_final - t;
    // Land exactly on the next snapshot time.
    if (next_out < outs.size()) dt = std::min(dt, outs[next_out] - t);
    dt = std::min(dt, remaining);
    if (!(dt > 0.0)) break;
    if (tc.steady_tolerance > 0.0) prev = u;
    solver.step(u, t, dt);
    t = (dt == remaining) ? tc.t_final : t + dt;
    ++rec.steps;
    if (observer) observer(t, dt, u);

    bool steady = false;
    if (tc.steady_tolerance > 0.0) {
      double rate = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        rate = std::max(rate, std::abs(u.h[i] - prev.h[i]) / dt);
      }
      steady = rate < tc.steady_tolerance;
    }
    bool due = t >= tc.t_final || steady;
    if (tc.sample_interval == 0.0) {
      due = true;
    } else if (t >= next_sample * (1.0 - 1e-12)) {
      due = true;
      while (next_sample <= t * (1.0 + 1e-12)) next_sample += tc.sample_interval;
    }
    if (due) sample(t, dt);
    if (steady) {
      rec.steady_reached = true;
      rec.snapshots.push_back({t, u});
      break;
    }
    snapshot_due(t);
  }
  rec.t_end = t;
  rec.final_state = u;
  return rec;
}

}  // namespace serre::fem
