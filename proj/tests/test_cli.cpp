#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "serre/cli.hpp"

using namespace serre;
using namespace serre::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "serre");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Invocation parsed(std::vector<std::string> args) {
  args.insert(args.begin(), "serre");
  return parse_invocation(args);
}

fs::path scratch_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("serre_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST(Parse, RunWithOverrides) {
  const auto inv = parsed({"run", "triangle-78", "--n-elements", "400", "--cfl", "0.2", "--t-final", "3",
                           "--variant", "incomplete", "--out", "/tmp/x"});
  EXPECT_EQ(inv.command, Invocation::Command::Run);
  EXPECT_EQ(inv.target, "triangle-78");
  EXPECT_EQ(*inv.overrides.n_elements, 400);
  EXPECT_EQ(*inv.overrides.cfl, 0.2);
  EXPECT_EQ(*inv.overrides.t_final, 3.0);
  EXPECT_EQ(*inv.overrides.variant, ModelVariant::Incomplete);
  EXPECT_EQ(inv.out, fs::path("/tmp/x"));
}

TEST(Parse, Defaults) {
  const auto conv = parsed({"convergence"});
  EXPECT_EQ(conv.target, "steady");
  EXPECT_EQ(conv.counts, (std::vector<int>{100, 200, 400, 800, 1600}));
  EXPECT_EQ(conv.jobs, 1);
  const auto t2 = parsed({"table2", "--rows", "72,78", "--jobs", "2"});
  EXPECT_EQ(t2.rows, (std::vector<int>{72, 78}));
  EXPECT_EQ(t2.jobs, 2);
  const auto f = parsed({"fold", "g.csv", "--period", "2.01975", "--t0", "30"});
  EXPECT_EQ(*f.period, 2.01975);
  EXPECT_EQ(*f.t0, 30.0);
  EXPECT_EQ(parsed({"list"}).command, Invocation::Command::List);
}

TEST(Parse, UsageErrors) {
  EXPECT_THROW(parsed({}), UsageError);
  EXPECT_THROW(parsed({"frobnicate"}), UsageError);
  EXPECT_THROW(parsed({"run"}), UsageError);
  EXPECT_THROW(parsed({"run", "steady", "--cfl", "1.5"}), UsageError);
  EXPECT_THROW(parsed({"run", "steady", "--variant", "partial"}), UsageError);
  EXPECT_THROW(parsed({"run", "steady", "--n-elements", "1"}), UsageError);
  EXPECT_THROW(parsed({"convergence", "--counts", "100,1"}), UsageError);
  EXPECT_THROW(parsed({"fold", "x", "--period", "-1"}), UsageError);
}

TEST(Exit, CodesAndMessages) {
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("convergence"), std::string::npos);

  const auto unknown = invoke({"run", "no-such-scenario"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("no-such-scenario"), std::string::npos);
  EXPECT_NE(unknown.err.find("triangle-78"), std::string::npos);

  EXPECT_EQ(invoke({"bogus"}).code, 1);
  EXPECT_EQ(invoke({"table2", "--rows", "71"}).code, 1);
  EXPECT_EQ(invoke({"table3", "--rows", "5"}).code, 1);

  const auto d = scratch_dir("exit");
  {
    std::ofstream os(d / "bad.ini");
    os << "[scenario]\nbase = steady\n[time]\nclf = 0.3\n";
  }
  const auto bad = invoke({"run", (d / "bad.ini").string(), "--out", d.string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("clf"), std::string::npos);

  const auto fold = invoke({"fold", "lake-at-rest", "--out", d.string()});
  EXPECT_EQ(fold.code, 1);  // no period
  fs::remove_all(d);
}

TEST(Exit, NumericalFailureIsTwo) {
  // A huge solitary wave on a tiny mesh with CFL 1 blows up.
  const auto d = scratch_dir("nan");
  {
    std::ofstream os(d / "boom.ini");
    os << "[scenario]\nx_min = -1\nx_max = 1\nn_elements = 20\nstabilization = second\nhyperviscosity = 0\n"
          "[physics]\nh_ref = 0.1\n[initial]\nkind = solitary\nlevel = 0.1\nh0 = 0.1\nalpha = 5\nx0 = 0\n"
          "[time]\nt_final = 5\ncfl = 1\n";
  }
  const auto r = invoke({"run", (d / "boom.ini").string(), "--out", d.string()});
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_NE(r.err.find("numerical failure"), std::string::npos);
  fs::remove_all(d);
}

TEST(Run, ZeroFinalTimeWritesInitialFields) {
  const auto d = scratch_dir("zero");
  const auto r = invoke({"run", "steady", "--t-final", "0", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("steady: steps=0"), std::string::npos);
  const auto t = io::read_table(d / "steady" / io::fields_filename(0, 0.0));
  auto inst = harness::instantiate(harness::find_scenario("steady"));
  inst.solver.apply_boundaries(inst.initial);
  const auto expect = io::fields_table(inst.solver, inst.initial);
  EXPECT_EQ(t.header, expect.header);
  EXPECT_EQ(t.rows, expect.rows);
  fs::remove_all(d);
}

TEST(Run, DeterministicOutput) {
  const auto a = scratch_dir("detA"), b = scratch_dir("detB");
  for (const auto& d : {a, b}) {
    const auto r = invoke({"run", "triangle-78", "--n-elements", "200", "--t-final", "0.5", "--out", d.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"gauges.csv", "diagnostics.csv"}) {
    EXPECT_EQ(slurp(a / "triangle-78" / f), slurp(b / "triangle-78" / f)) << f;
  }
  EXPECT_FALSE(slurp(a / "triangle-78" / "gauges.csv").empty());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, ConfigFileAndList) {
  const auto d = scratch_dir("cfg");
  {
    std::ofstream os(d / "mine.ini");
    os << "[scenario]\nbase = solitary\nn_elements = 100\n[time]\nt_final = 0.2\n";
  }
  const auto r = invoke({"run", (d / "mine.ini").string(), "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(d / "solitary" / "gauges.csv"));
  const auto l = invoke({"list"});
  EXPECT_EQ(l.code, 0);
  for (const auto& n : harness::scenario_names()) EXPECT_NE(l.out.find(n), std::string::npos);
  fs::remove_all(d);
}

TEST(Commands, ConvergenceWritesOneRowPerCount) {
  const auto d = scratch_dir("conv");
  const auto r = invoke({"convergence", "--counts", "20,40", "--t-final", "0.5", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = io::read_table(d / "table1.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], 20.0);
  EXPECT_EQ(t.rows[1][0], 40.0);
  EXPECT_GT(t.rows[1][t.column("E3")], 0.0);
  fs::remove_all(d);
}

TEST(Commands, Table2AndTable3Layout) {
  const auto d = scratch_dir("tables");
  const auto r2 = invoke({"table2", "--rows", "78", "--n-elements", "100", "--t-final", "1.5", "--out", d.string()});
  ASSERT_EQ(r2.code, 0) << r2.err;
  const auto t2 = io::read_table(d / "table2.csv");
  EXPECT_EQ(t2.rows.size(), 1u);
  EXPECT_TRUE(fs::exists(d / "table2" / "triangle-78-full" / "gauges.csv"));
  EXPECT_TRUE(fs::exists(d / "table2" / "triangle-78-incomplete" / "gauges.csv"));

  const auto r3 = invoke({"table3", "--rows", "24", "--n-elements", "100", "--t-final", "1", "--out", d.string()});
  ASSERT_EQ(r3.code, 0) << r3.err;
  const auto t3 = io::read_table(d / "table3.csv");
  EXPECT_EQ(t3.header.back(), "n_waves");
  EXPECT_TRUE(fs::exists(d / "table3" / "step-24" / "gauges.csv"));
  fs::remove_all(d);
}

TEST(Commands, FoldFromGaugesFileAndScenario) {
  const auto d = scratch_dir("fold");
  {
    std::ofstream os(d / "gauges.csv");
    os << "t,gauge_1\n";
    for (int k = 0; k < 40; ++k) os << 0.1 * k << ',' << (k % 10) << '\n';
  }
  const auto r = invoke({"fold", (d / "gauges.csv").string(), "--period", "1", "--out", d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = io::read_table(d / "folded_gauge_1.csv");
  EXPECT_EQ(f.rows.size(), 40u);
  EXPECT_EQ(invoke({"fold", (d / "gauges.csv").string(), "--out", d.string()}).code, 1);

  const auto s = invoke({"fold", "bar-SL", "--n-elements", "100", "--t-final", "2", "--out", d.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_TRUE(fs::exists(d / "bar-SL" / "folded_gauge_7.csv"));
  fs::remove_all(d);
}
