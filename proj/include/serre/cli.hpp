#pragma once

// Command-line front end: run | convergence | table2 | table3 | fold | list.
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "serre/config.hpp"
#include "serre/harness.hpp"
#include "serre/io.hpp"

namespace serre::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Invocation {
  enum class Command { Run, Convergence, Table2, Table3, Fold, List };
  Command command = Command::List;
  std::string target;  // scenario name, config path or (fold) gauges.csv path
  std::filesystem::path out;
  harness::Overrides overrides;
  std::vector<int> counts;
  std::vector<int> rows;
  int jobs = 1;
  std::optional<double> period;  // fold
  std::optional<double> t0;      // fold
};

inline std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("SERRE_OUT_DIR"); env && *env) return env;
  return "serre_out";
}

/// Parses argv (argv[0] is the program name). Throws UsageError; `--help`
/// output is returned through the message with an empty command.
inline Invocation parse_invocation(const std::vector<std::string>& args) {
  CLI::App app{"Hyperbolic Serre-Green-Naghdi solver and experiment harness", "serre"};
  app.require_subcommand(1);
  Invocation inv;
  std::string out;
  std::optional<int> n_elements;
  std::optional<double> cfl, t_final;
  std::string variant;

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--n-elements", n_elements, "number of P1 elements")->check(CLI::Range(2, 10000000));
    sub->add_option("--cfl", cfl, "CFL number in (0, 1]");
    sub->add_option("--t-final", t_final, "final time [s]")->check(CLI::NonNegativeNumber);
    sub->add_option("--variant", variant, "model variant")
        ->check(CLI::IsMember({"full", "incomplete"}));
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out, "output directory (default $SERRE_OUT_DIR or ./serre_out)");
  };

  auto* run = app.add_subcommand("run", "run one scenario and write its CSV record");
  run->add_option("scenario", inv.target, "registry name or INI config file")->required();
  add_out(run);
  add_overrides(run);

  auto* conv = app.add_subcommand("convergence", "steady-state convergence study (table1.csv)");
  conv->add_option("scenario", inv.target, "base scenario")->capture_default_str();
  conv->add_option("--counts", inv.counts, "element counts")->delimiter(',');
  conv->add_option("--jobs", inv.jobs, "parallel runs")->check(CLI::PositiveNumber);
  add_out(conv);
  add_overrides(conv);

  auto* t2 = app.add_subcommand("table2", "reflected waves over the triangle (table2.csv)");
  t2->add_option("--rows", inv.rows, "experiment numbers")->delimiter(',');
  t2->add_option("--jobs", inv.jobs, "parallel runs")->check(CLI::PositiveNumber);
  add_out(t2);
  add_overrides(t2);

  auto* t3 = app.add_subcommand("table3", "transmitted waves over the step (table3.csv)");
  t3->add_option("--rows", inv.rows, "experiment numbers")->delimiter(',');
  t3->add_option("--jobs", inv.jobs, "parallel runs")->check(CLI::PositiveNumber);
  add_out(t3);
  add_overrides(t3);

  auto* fold = app.add_subcommand("fold", "period-fold gauge series (folded_<gauge>.csv)");
  fold->add_option("source", inv.target, "gauges.csv file or periodic scenario name")->required();
  fold->add_option("--period", inv.period, "folding period [s]")->check(CLI::PositiveNumber);
  fold->add_option("--t0", inv.t0, "folding origin [s]");
  add_out(fold);
  add_overrides(fold);

  app.add_subcommand("list", "list registry scenarios");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  using C = Invocation::Command;
  if (run->parsed()) inv.command = C::Run;
  else if (conv->parsed()) inv.command = C::Convergence;
  else if (t2->parsed()) inv.command = C::Table2;
  else if (t3->parsed()) inv.command = C::Table3;
  else if (fold->parsed()) inv.command = C::Fold;
  else inv.command = C::List;

  if (inv.command == C::Convergence && inv.target.empty()) inv.target = "steady";
  if (inv.command == C::Convergence && inv.counts.empty()) inv.counts = {100, 200, 400, 800, 1600};
  for (int n : inv.counts) {
    if (n < 2) throw UsageError("--counts: element counts must be at least 2");
  }
  if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw UsageError("--cfl: must lie in (0, 1]");
  inv.overrides.n_elements = n_elements;
  inv.overrides.cfl = cfl;
  inv.overrides.t_final = t_final;
  if (!variant.empty()) inv.overrides.variant = parse_variant(variant);
  inv.out = out.empty() ? default_out_dir() : std::filesystem::path(out);
  return inv;
}

inline Invocation parse_invocation(int argc, const char* const* argv) {
  return parse_invocation(std::vector<std::string>(argv, argv + argc));
}

/// Registry name, or an INI file when the argument names an existing file.
inline harness::ScenarioConfig resolve_scenario(const std::string& target) {
  if (std::filesystem::is_regular_file(target)) return harness::load_scenario_file(target);
  try {
    return harness::find_scenario(target);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline std::string summary_line(const std::string& name, const fem::Solver& s,
                                const fem::SimulationRecord& rec) {
  std::ostringstream os;
  os << name << ": steps=" << rec.steps << " t=" << io::fmt17(rec.t_end)
     << " mass=" << io::fmt17(s.total_mass(rec.final_state))
     << " energy=" << io::fmt17(s.total_energy(rec.final_state));
  return os.str();
}

inline int execute(const Invocation& inv, std::ostream& out) {
  using C = Invocation::Command;
  switch (inv.command) {
    case C::List: {
      for (const auto& c : harness::scenario_registry()) out << c.name << "  " << c.description << '\n';
      return 0;
    }
    case C::Run: {
      const auto cfg = harness::apply(resolve_scenario(inv.target), inv.overrides);
      auto r = harness::run_scenario(cfg);
      io::write_record(inv.out / cfg.name, r.solver, r.record);
      out << summary_line(cfg.name, r.solver, r.record) << '\n';
      return 0;
    }
    case C::Convergence: {
      const auto base = harness::apply(resolve_scenario(inv.target), inv.overrides);
      const auto rows = harness::convergence_study(base, inv.counts, inv.jobs);
      const auto path = inv.out / "table1.csv";
      io::write_table(path, harness::table1(rows));
      out << "convergence: " << rows.size() << " rows -> " << path.string() << '\n';
      return 0;
    }
    case C::Table2: {
      std::vector<int> rows = inv.rows;
      if (rows.empty()) {
        for (const auto& r : harness::triangle_rows()) rows.push_back(r.exp);
      }
      for (int e : rows) {
        try {
          harness::triangle_row(e);
        } catch (const std::invalid_argument& err) {
          throw UsageError(err.what());
        }
      }
      const auto res = harness::run_table2(rows, inv.overrides, inv.jobs, inv.out / "table2");
      const auto path = inv.out / "table2.csv";
      io::write_table(path, harness::table2(res));
      for (const auto& r : res) {
        out << "triangle-" << r.exp << ": alpha_r=" << 100.0 * r.alpha_r_full
            << " cm, alpha_inc_r=" << 100.0 * r.alpha_r_incomplete << " cm\n";
      }
      return 0;
    }
    case C::Table3: {
      std::vector<int> rows = inv.rows;
      if (rows.empty()) {
        for (const auto& r : harness::step_rows()) rows.push_back(r.exp);
      }
      for (int e : rows) {
        try {
          harness::step_row(e);
        } catch (const std::invalid_argument& err) {
          throw UsageError(err.what());
        }
      }
      const auto res = harness::run_table3(rows, inv.overrides, inv.jobs, inv.out / "table3");
      const auto path = inv.out / "table3.csv";
      io::write_table(path, harness::table3(res));
      for (const auto& r : res) {
        out << "step-" << r.exp << ":";
        for (double a : r.amplitudes) out << ' ' << 100.0 * a;
        out << " cm\n";
      }
      return 0;
    }
    case C::Fold: {
      io::Table gauges;
      double period = 0.0, t0 = 0.0;
      std::filesystem::path dir = inv.out;
      if (std::filesystem::is_regular_file(inv.target)) {
        if (!inv.period) throw UsageError("fold: --period is required for a gauges file");
        gauges = io::read_table(inv.target);
        period = *inv.period;
        t0 = inv.t0 ? *inv.t0 : (gauges.rows.empty() ? 0.0 : gauges.rows.front()[0]);
      } else {
        const auto cfg = harness::apply(resolve_scenario(inv.target), inv.overrides);
        if (!(cfg.adjusted_period > 0.0) && !inv.period) {
          throw UsageError("fold: scenario '" + cfg.name + "' has no period; pass --period");
        }
        auto r = harness::run_scenario(cfg);
        dir = inv.out / cfg.name;
        io::write_record(dir, r.solver, r.record);
        out << summary_line(cfg.name, r.solver, r.record) << '\n';
        gauges = io::gauges_table(r.record);
        period = inv.period ? *inv.period : cfg.adjusted_period;
        // Default origin: half way through, once the periodic regime is set up.
        t0 = inv.t0 ? *inv.t0 : 0.5 * cfg.time.t_final;
        auto& rows = gauges.rows;
        if (!inv.t0) {
          std::erase_if(rows, [&](const std::vector<double>& row) { return row[0] < t0; });
        }
      }
      const auto written = harness::fold_gauges(gauges, t0, period, dir);
      out << "fold: " << written.size() << " gauges, Tp=" << period << " -> " << dir.string() << '\n';
      return 0;
    }
  }
  return 1;
}

/// main() body: parse, execute, map failures to exit codes.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Invocation inv;
  try {
    inv = parse_invocation(argc, argv);
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    const bool help = argc >= 2 && (std::string(argv[argc - 1]) == "--help" ||
                                    std::string(argv[argc - 1]) == "-h");
    (help ? out : err) << msg << (msg.empty() || msg.back() == '\n' ? "" : "\n");
    return help ? 0 : 1;
  }
  try {
    return execute(inv, out);
  } catch (const fem::NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const harness::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace serre::cli
