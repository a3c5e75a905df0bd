#pragma once

// CSV serialization of simulation records. Every file has a header row and
// floats are written with 17 significant digits so they round-trip exactly.

#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "serre/fem1d.hpp"
#include "serre/run.hpp"

namespace serre::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Column-oriented CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return k;
    }
    throw IoError("missing column '" + name + "'");
  }
  std::vector<double> values(const std::string& name) const {
    const std::size_t k = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
  }
};

inline std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

inline void write_table(const std::filesystem::path& path, const Table& t) {
  auto os = open_out(path);
  for (std::size_t k = 0; k < t.header.size(); ++k) os << (k ? "," : "") << t.header[k];
  os << '\n';
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw IoError("row width mismatch in " + path.string());
    for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << fmt17(r[k]);
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

inline Table read_table(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != t.header.size()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// x, z, h, q, q1, q2, q3, H, E (E = nodal energy density).
inline Table fields_table(const fem::Solver& solver, const Fields& u) {
  Table t{{"x", "z", "h", "q", "q1", "q2", "q3", "H", "E"}, {}};
  const auto& z = solver.bathymetry().z;
  t.rows.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto s = u.at(i);
    t.rows.push_back({solver.mesh().x(i), z[i], s.h, s.q, s.q1, s.q2, s.q3, s.h + z[i],
                      energy_density(s, z[i], solver.node_params(i))});
  }
  return t;
}

inline Table gauges_table(const fem::SimulationRecord& rec) {
  Table t;
  t.header.push_back("t");
  for (std::size_t k = 0; k < rec.gauges.size(); ++k) t.header.push_back("gauge_" + std::to_string(k + 1));
  for (std::size_t n = 0; n < rec.times.size(); ++n) {
    std::vector<double> row{rec.times[n]};
    for (const auto& g : rec.gauges) row.push_back(g[n]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table diagnostics_table(const fem::SimulationRecord& rec) {
  Table t{{"t", "dt", "mass", "energy", "E3", "E4"}, {}};
  for (const auto& d : rec.diagnostics) t.rows.push_back({d.t, d.dt, d.mass, d.energy, d.E3, d.E4});
  return t;
}

/// fields_<k>_t<time>.csv, k counting snapshots in time order.
inline std::string fields_filename(std::size_t k, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "fields_%04zu_t%.6f.csv", k, t);
  return buf;
}

/// Writes every snapshot, gauges.csv and diagnostics.csv into `dir`.
inline void write_record(const std::filesystem::path& dir, const fem::Solver& solver,
                         const fem::SimulationRecord& rec) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    const auto& s = rec.snapshots[k];
    write_table(dir / fields_filename(k, s.t), fields_table(solver, s.state));
  }
  write_table(dir / "gauges.csv", gauges_table(rec));
  write_table(dir / "diagnostics.csv", diagnostics_table(rec));
}

}  // namespace serre::io
