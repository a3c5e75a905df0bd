#pragma once

// INI scenario files. A file either starts from a registry entry
// ([scenario] base = <name>) and overrides scalar fields, or describes a
// scenario from scratch. Unknown keys and malformed values are errors that
// name the offending key.
//
//   [scenario]   base name description variant stabilization indicator hyperviscosity
//                x_min x_max n_elements
//   [physics]    g lambda_bar h_ref
//   [bathymetry] kind level height half_base smoothing_d smoothing_depth depth toe slope
//                bump_h0 bump_a
//   [initial]    kind level h0 alpha x0 a
//   [boundary]   left right left_h left_q left_q1 left_q2 left_q3 left_mask (same for right)
//   [time]       t_final cfl output_times steady_tolerance sample_interval max_steps
//   [gauges]     x
//   [sponge.*]   kind outer x_begin x_end tau level amplitude period depth
//
// Lists are comma separated; masks list component names (h,q,q1,q2,q3).

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "serre/scenario.hpp"

namespace serre::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace config_detail {

namespace pt = boost::property_tree;

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Section {
 public:
  Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

  const std::string& name() const { return name_; }

  void allow(std::initializer_list<const char*> keys) {
    for (const char* k : keys) allowed_.insert(k);
  }
  void check_keys() const {
    for (const auto& [k, v] : tree_) {
      if (!allowed_.count(k)) throw ConfigError("unknown key '" + qualified(k) + "'");
    }
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }
  std::string raw(const std::string& key) const { return trim(tree_.get<std::string>(key)); }
  std::string qualified(const std::string& key) const { return name_ + "." + key; }

  void read(const std::string& key, double& out) const {
    if (!has(key)) return;
    const std::string s = raw(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      out = v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + qualified(key) + "': expected a number, got '" + s + "'");
    }
  }
  void read(const std::string& key, int& out) const {
    if (!has(key)) return;
    const std::string s = raw(key);
    try {
      std::size_t pos = 0;
      const long v = std::stol(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      out = static_cast<int>(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + qualified(key) + "': expected an integer, got '" + s + "'");
    }
  }
  void read(const std::string& key, std::size_t& out) const {
    int v = 0;
    if (!has(key)) return;
    read(key, v);
    if (v < 0) throw ConfigError("key '" + qualified(key) + "': must be non-negative");
    out = static_cast<std::size_t>(v);
  }
  void read(const std::string& key, std::string& out) const {
    if (has(key)) out = raw(key);
  }
  void read(const std::string& key, std::vector<double>& out) const {
    if (!has(key)) return;
    out.clear();
    for (const auto& item : split(raw(key))) {
      try {
        std::size_t pos = 0;
        out.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("key '" + qualified(key) + "': bad list entry '" + item + "'");
      }
    }
  }
  template <class E>
  void read_enum(const std::string& key, E& out, const std::map<std::string, E>& names) const {
    if (!has(key)) return;
    const std::string s = raw(key);
    const auto it = names.find(s);
    if (it == names.end()) {
      std::string opts;
      for (const auto& [k, v] : names) opts += (opts.empty() ? "" : ", ") + k;
      throw ConfigError("key '" + qualified(key) + "': '" + s + "' is not one of " + opts);
    }
    out = it->second;
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  std::set<std::string> allowed_;
};

inline void read_boundary(const Section& sec, const std::string& side, fem::Boundary& b) {
  sec.read_enum(side, b.kind,
                std::map<std::string, fem::Boundary::Kind>{{"wall", fem::Boundary::Kind::Wall},
                                                           {"dirichlet", fem::Boundary::Kind::Dirichlet}});
  sec.read(side + "_h", b.target.h);
  sec.read(side + "_q", b.target.q);
  sec.read(side + "_q1", b.target.q1);
  sec.read(side + "_q2", b.target.q2);
  sec.read(side + "_q3", b.target.q3);
  const std::string mk = side + "_mask";
  if (sec.has(mk)) {
    static const std::array<const char*, 5> comps{"h", "q", "q1", "q2", "q3"};
    b.imposed = {};
    for (const auto& c : split(sec.raw(mk))) {
      bool found = false;
      for (std::size_t k = 0; k < comps.size(); ++k) {
        if (c == comps[k]) b.imposed[k] = found = true;
      }
      if (!found) throw ConfigError("key '" + sec.qualified(mk) + "': unknown component '" + c + "'");
    }
  }
}

}  // namespace config_detail

/// Parses INI text into a scenario.
inline ScenarioConfig parse_scenario_ini(std::istream& is, const std::string& source = "<config>") {
  namespace pt = boost::property_tree;
  using config_detail::Section;
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.what());
  }

  static const std::set<std::string> sections{"scenario", "physics", "bathymetry", "initial",
                                              "boundary", "time",    "gauges"};
  const pt::ptree empty;
  auto get = [&](const std::string& s) -> const pt::ptree& {
    const auto it = root.find(s);
    return it == root.not_found() ? empty : it->second;
  };
  for (const auto& [name, tree] : root) {
    if (!sections.count(name) && name.rfind("sponge", 0) != 0) {
      throw ConfigError("unknown section '" + name + "'");
    }
    if (tree.empty() && !tree.data().empty()) {
      throw ConfigError("key '" + name + "' must belong to a section");
    }
  }

  Section sc("scenario", get("scenario"));
  sc.allow({"base", "name", "description", "variant", "stabilization", "indicator",
            "hyperviscosity", "x_min", "x_max", "n_elements"});
  sc.check_keys();

  ScenarioConfig cfg;
  bool from_base = false;
  if (sc.has("base")) {
    try {
      cfg = find_scenario(sc.raw("base"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key 'scenario.base': ") + e.what());
    }
    from_base = true;
  } else {
    cfg.name = std::filesystem::path(source).stem().string();
  }
  sc.read("name", cfg.name);
  sc.read("description", cfg.description);
  sc.read_enum("variant", cfg.variant,
               std::map<std::string, ModelVariant>{{"full", ModelVariant::Full},
                                                   {"incomplete", ModelVariant::Incomplete}});
  sc.read_enum("stabilization", cfg.stabilization,
               std::map<std::string, fem::Stabilization>{{"first", fem::Stabilization::FirstOrder},
                                                         {"second", fem::Stabilization::SecondOrder}});
  sc.read_enum("indicator", cfg.indicator,
               std::map<std::string, fem::Indicator>{{"relaxed", fem::Indicator::RelaxedEnergy},
                                                     {"shallow_water", fem::Indicator::ShallowWater}});
  sc.read("hyperviscosity", cfg.hyperviscosity);
  sc.read("x_min", cfg.x_min);
  sc.read("x_max", cfg.x_max);
  sc.read("n_elements", cfg.n_elements);

  Section ph("physics", get("physics"));
  ph.allow({"g", "lambda_bar", "h_ref"});
  ph.check_keys();
  ph.read("g", cfg.g);
  ph.read("lambda_bar", cfg.lambda_bar);
  ph.read("h_ref", cfg.h_ref);

  Section ba("bathymetry", get("bathymetry"));
  ba.allow({"kind", "level", "height", "half_base", "smoothing_d", "smoothing_depth", "depth", "toe",
            "slope", "bump_h0", "bump_a"});
  ba.check_keys();
  auto& b = cfg.bathymetry;
  if (from_base && ba.has("kind")) {
    throw ConfigError("key 'bathymetry.kind': structural change on top of a registry base");
  }
  using BK = BathymetrySpec::Kind;
  ba.read_enum("kind", b.kind,
               std::map<std::string, BK>{{"flat", BK::Flat},
                                         {"soliton_bump", BK::SolitonBump},
                                         {"smoothed_triangle", BK::SmoothedTriangle},
                                         {"smoothed_step", BK::SmoothedStep},
                                         {"beach", BK::Beach},
                                         {"trapezoid_bar", BK::TrapezoidBar}});
  ba.read("level", b.level);
  ba.read("height", b.height);
  ba.read("half_base", b.half_base);
  ba.read("smoothing_d", b.smoothing_d);
  ba.read("smoothing_depth", b.smoothing_depth);
  ba.read("depth", b.depth);
  ba.read("toe", b.toe);
  ba.read("slope", b.slope);
  b.bump.g = cfg.g;
  ba.read("bump_h0", b.bump.h0);
  ba.read("bump_a", b.bump.a);

  Section in("initial", get("initial"));
  in.allow({"kind", "level", "h0", "alpha", "x0", "a"});
  in.check_keys();
  if (from_base && in.has("kind")) {
    throw ConfigError("key 'initial.kind': structural change on top of a registry base");
  }
  using IK = InitialSpec::Kind;
  in.read_enum("kind", cfg.initial.kind,
               std::map<std::string, IK>{
                   {"still", IK::StillWater}, {"solitary", IK::Solitary}, {"steady", IK::Steady}});
  in.read("level", cfg.initial.level);
  in.read("h0", cfg.initial.solitary.h0);
  in.read("alpha", cfg.initial.solitary.alpha);
  in.read("x0", cfg.initial.solitary.x0);
  if (cfg.initial.kind == IK::Steady) {
    cfg.initial.steady = b.bump;
    in.read("h0", cfg.initial.steady.h0);
    in.read("a", cfg.initial.steady.a);
    cfg.initial.steady.g = cfg.g;
  } else if (in.has("a")) {
    throw ConfigError("key 'initial.a': only meaningful for steady initial data");
  }

  Section bo("boundary", get("boundary"));
  bo.allow({"left", "right", "left_h", "left_q", "left_q1", "left_q2", "left_q3", "left_mask",
            "right_h", "right_q", "right_q1", "right_q2", "right_q3", "right_mask"});
  bo.check_keys();
  if (from_base && (bo.has("left") || bo.has("right") || bo.has("left_mask") || bo.has("right_mask"))) {
    throw ConfigError("key 'boundary': structural change on top of a registry base");
  }
  config_detail::read_boundary(bo, "left", cfg.boundaries.left);
  config_detail::read_boundary(bo, "right", cfg.boundaries.right);

  Section ti("time", get("time"));
  ti.allow({"t_final", "cfl", "output_times", "steady_tolerance", "sample_interval", "max_steps"});
  ti.check_keys();
  ti.read("t_final", cfg.time.t_final);
  ti.read("cfl", cfg.time.cfl);
  ti.read("output_times", cfg.time.output_times);
  ti.read("steady_tolerance", cfg.time.steady_tolerance);
  ti.read("sample_interval", cfg.time.sample_interval);
  ti.read("max_steps", cfg.time.max_steps);

  Section ga("gauges", get("gauges"));
  ga.allow({"x"});
  ga.check_keys();
  if (from_base && ga.has("x")) throw ConfigError("key 'gauges.x': structural change on top of a registry base");
  ga.read("x", cfg.gauges);

  std::vector<SpongeSpec> sponges;
  bool any_sponge = false;
  for (const auto& [name, tree] : root) {
    if (name.rfind("sponge", 0) != 0) continue;
    if (from_base) throw ConfigError("section '" + name + "': structural change on top of a registry base");
    any_sponge = true;
    Section sp(name, tree);
    sp.allow({"kind", "outer", "x_begin", "x_end", "tau", "level", "amplitude", "period", "depth"});
    sp.check_keys();
    SpongeSpec s;
    sp.read_enum("kind", s.kind,
                 std::map<std::string, fem::SpongeZone::Kind>{
                     {"absorption", fem::SpongeZone::Kind::Absorption},
                     {"generation", fem::SpongeZone::Kind::Generation}});
    sp.read_enum("outer", s.outer,
                 std::map<std::string, fem::SpongeZone::Outer>{{"left", fem::SpongeZone::Outer::Left},
                                                               {"right", fem::SpongeZone::Outer::Right}});
    sp.read("x_begin", s.x_begin);
    sp.read("x_end", s.x_end);
    sp.read("tau", s.tau);
    sp.read("level", s.level);
    sp.read("amplitude", s.amplitude);
    sp.read("period", s.period);
    sp.read("depth", s.depth);
    sponges.push_back(s);
  }
  if (any_sponge) cfg.sponges = sponges;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_scenario_ini(is, path.string());
}

}  // namespace serre::harness
