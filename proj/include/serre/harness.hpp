#pragma once

// Study drivers: steady-state convergence, the reflected/transmitted
// amplitude tables and period folding of bar gauges, with CSV writers.

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "serre/analysis.hpp"
#include "serre/io.hpp"
#include "serre/scenario.hpp"

namespace serre::harness {

/// Runs task(k) for k in [0, count) on up to `jobs` threads; the first
/// exception is rethrown after all workers stop.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      {
        std::lock_guard lock(mu);
        if (err) return;
      }
      try {
        task(k);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(jobs));
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

inline GaugeSeries gauge_series(const fem::SimulationRecord& rec, std::size_t k) {
  if (k >= rec.gauges.size()) throw std::out_of_range("gauge index out of range");
  return {rec.times, rec.gauges[k]};
}

// ---------------------------------------------------------------------------
// Steady-state convergence
// ---------------------------------------------------------------------------

inline std::vector<double> exact_steady_height(const Mesh1D& mesh, const analytic::SteadyStateParams& p) {
  std::vector<double> h(mesh.num_nodes());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = analytic::steady_state_exact(mesh.x(i), p).h;
  return h;
}

/// Errors of one steady run against the exact solution.
inline ErrorNorms steady_errors(const ScenarioConfig& cfg) {
  if (cfg.initial.kind != InitialSpec::Kind::Steady) {
    throw std::invalid_argument("convergence study needs a scenario with an exact steady state");
  }
  auto r = run_scenario(cfg);
  return error_norms(r.solver.mesh(), r.solver.bathymetry(), r.record.final_state,
                     exact_steady_height(r.solver.mesh(), cfg.initial.steady));
}

inline std::vector<ConvergenceRow> convergence_study(const ScenarioConfig& base,
                                                     const std::vector<int>& counts, int jobs = 1) {
  if (base.initial.kind != InitialSpec::Kind::Steady) {
    throw std::invalid_argument("convergence study needs a scenario with an exact steady state");
  }
  std::vector<ConvergenceRow> rows(counts.size());
  parallel_for(counts.size(), jobs, [&](std::size_t k) {
    ScenarioConfig cfg = base;
    cfg.n_elements = counts[k];
    rows[k].n = counts[k];
    rows[k].errors = steady_errors(cfg);
  });
  fill_rates(rows);
  return rows;
}

/// table1.csv: errors and rates plus the tabulated reference values (NaN
/// where the count is not tabulated).
inline io::Table table1(const std::vector<ConvergenceRow>& rows) {
  io::Table t{{"n", "E1", "rate_E1", "E2", "rate_E2", "E3", "rate_E3", "E4", "rate_E4", "ref_E1",
               "ref_E2", "ref_E3", "ref_E4"},
              {}};
  const double na = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    SteadyRow ref{r.n, na, na, na, na};
    for (const auto& s : steady_rows()) {
      if (s.n == r.n) ref = s;
    }
    t.rows.push_back({double(r.n), r.errors.E1, r.rates.E1, r.errors.E2, r.rates.E2, r.errors.E3,
                      r.rates.E3, r.errors.E4, r.rates.E4, ref.E1, ref.E2, ref.E3, ref.E4});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Reflected waves over the triangle
// ---------------------------------------------------------------------------

inline const TriangleRow& triangle_row(int exp) {
  for (const auto& r : triangle_rows()) {
    if (r.exp == exp) return r;
  }
  throw std::invalid_argument("no triangle experiment " + std::to_string(exp));
}

inline const StepRow& step_row(int exp) {
  for (const auto& r : step_rows()) {
    if (r.exp == exp) return r;
  }
  throw std::invalid_argument("no step experiment " + std::to_string(exp));
}

/// Reflected amplitude [m] of a completed triangle run (gauge 0 at -25 h0).
inline double reflected_amplitude(const ScenarioConfig& cfg, const fem::SimulationRecord& rec) {
  if (cfg.gauges.empty()) throw std::invalid_argument("reflected_amplitude: gauge missing");
  return reflected_amplitude(gauge_series(rec, 0), cfg.gauges[0], cfg.initial.solitary, cfg.g);
}

/// Transmitted amplitudes [m] of a completed step run (gauge 0 at x = 15 m).
inline std::vector<double> transmitted_amplitudes(const ScenarioConfig& cfg,
                                                  const fem::SimulationRecord& rec) {
  if (cfg.gauges.empty()) throw std::invalid_argument("transmitted_amplitudes: gauge missing");
  return transmitted_amplitudes(gauge_series(rec, 0), cfg.initial.level,
                                cfg.initial.solitary.alpha);
}

struct Table2Result {
  int exp = 0;
  double alpha_r_full = 0.0;        // m
  double alpha_r_incomplete = 0.0;  // m
};

/// Runs both model variants of each requested row. When out_dir is non-empty
/// every run's record goes to out_dir/<scenario>-<variant>/.
inline std::vector<Table2Result> run_table2(const std::vector<int>& exps, const Overrides& ov,
                                            int jobs, const std::filesystem::path& out_dir = {}) {
  std::vector<Table2Result> res(exps.size());
  for (std::size_t k = 0; k < exps.size(); ++k) res[k].exp = exps[k];
  parallel_for(2 * exps.size(), jobs, [&](std::size_t job) {
    const std::size_t k = job / 2;
    const auto variant = job % 2 == 0 ? ModelVariant::Full : ModelVariant::Incomplete;
    Overrides o = ov;
    o.variant = variant;
    const auto cfg = apply(find_scenario("triangle-" + std::to_string(exps[k])), o);
    auto r = run_scenario(cfg);
    const double a = reflected_amplitude(cfg, r.record);
    if (variant == ModelVariant::Full) {
      res[k].alpha_r_full = a;
    } else {
      res[k].alpha_r_incomplete = a;
    }
    if (!out_dir.empty()) {
      io::write_record(out_dir / (cfg.name + "-" + std::string(to_string(variant))), r.solver,
                       r.record);
    }
  });
  return res;
}

inline io::Table table2(const std::vector<Table2Result>& res) {
  io::Table t{{"exp", "h0_cm", "alpha_cm", "alpha_r_cm", "ref_alpha_r_cm", "alpha_inc_r_cm",
               "ref_alpha_inc_r_cm"},
              {}};
  for (const auto& r : res) {
    const auto& ref = triangle_row(r.exp);
    t.rows.push_back({double(r.exp), ref.h0_cm, ref.alpha_cm, 100.0 * r.alpha_r_full,
                      ref.ref_full_cm, 100.0 * r.alpha_r_incomplete, ref.ref_incomplete_cm});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Transmitted waves over the step
// ---------------------------------------------------------------------------

struct Table3Result {
  int exp = 0;
  std::vector<double> amplitudes;  // m, ranked
};

inline std::vector<Table3Result> run_table3(const std::vector<int>& exps, const Overrides& ov,
                                            int jobs, const std::filesystem::path& out_dir = {}) {
  std::vector<Table3Result> res(exps.size());
  parallel_for(exps.size(), jobs, [&](std::size_t k) {
    const auto cfg = apply(find_scenario("step-" + std::to_string(exps[k])), ov);
    auto r = run_scenario(cfg);
    res[k] = {exps[k], transmitted_amplitudes(cfg, r.record)};
    if (!out_dir.empty()) io::write_record(out_dir / cfg.name, r.solver, r.record);
  });
  return res;
}

inline io::Table table3(const std::vector<Table3Result>& res) {
  io::Table t{{"exp", "h0_cm", "alpha_cm", "alpha_t1_cm", "ref_alpha_t1_cm", "alpha_t2_cm",
               "ref_alpha_t2_cm", "alpha_t3_cm", "ref_alpha_t3_cm", "n_waves"},
              {}};
  const double na = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : res) {
    const auto& ref = step_row(r.exp);
    std::vector<double> row{double(r.exp), ref.h0_cm, ref.alpha_cm};
    for (std::size_t j = 0; j < 3; ++j) {
      row.push_back(j < r.amplitudes.size() ? 100.0 * r.amplitudes[j] : na);
      row.push_back(ref.ref_cm[j]);
    }
    row.push_back(double(r.amplitudes.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Period folding
// ---------------------------------------------------------------------------

inline io::Table folded_table(const std::vector<FoldedSample>& f) {
  io::Table t{{"phase", "value", "t"}, {}};
  for (const auto& s : f) t.rows.push_back({s.phase, s.value, s.t});
  return t;
}

/// Folds every gauge column of a gauges.csv table into folded_<gauge>.csv.
inline std::vector<std::filesystem::path> fold_gauges(const io::Table& gauges, double t0, double Tp,
                                                      const std::filesystem::path& out_dir) {
  const auto t = gauges.values("t");
  std::vector<std::filesystem::path> written;
  for (const auto& name : gauges.header) {
    if (name == "t") continue;
    const auto f = period_fold({t, gauges.values(name)}, t0, Tp);
    const auto path = out_dir / ("folded_" + name + ".csv");
    io::write_table(path, folded_table(f));
    written.push_back(path);
  }
  return written;
}

}  // namespace serre::harness
