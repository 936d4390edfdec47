#pragma once
// Deterministic data artifacts: CSV tables with 17-significant-digit values
// (round-trip exact for doubles) and profile files that reload bit-faithfully
// as initial data.  All formatting is locale-independent.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bblab/grid.hpp"

namespace bblab {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One table: equally long columns under a single header line.
inline void write_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    throw IoError("column name/data count mismatch for " + path.string());
  for (const auto& c : columns)
    if (c.size() != columns.front().size())
      throw IoError("ragged columns for " + path.string());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < names.size(); ++j)
    out << (j ? "," : "") << names[j];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_value(columns[j][i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

struct CsvTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == name) return columns[j];
    throw IoError("missing column '" + name + "'");
  }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file " + path.string());
  std::stringstream hdr(line);
  for (std::string cell; std::getline(hdr, cell, ',');) t.names.push_back(cell);
  t.columns.resize(t.names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0, j = 0;
    while (j < t.columns.size()) {
      const std::size_t next = line.find(',', pos);
      const std::string cell = line.substr(pos, next == std::string::npos
                                                    ? std::string::npos
                                                    : next - pos);
      double v{};
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{})
        throw IoError(path.string() + ":" + std::to_string(lineno) +
                      ": bad numeric cell '" + cell + "'");
      t.columns[j++].push_back(v);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (j != t.columns.size())
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected " + std::to_string(t.columns.size()) + " cells");
  }
  return t;
}

// ---------------------------------------------------------------------------
struct ProfileData {
  RealField x, zeta, v_beta, u;
};

inline void write_profile_csv(const std::filesystem::path& path, const Grid& g,
                              const RealField& zeta, const RealField& v_beta,
                              const RealField& u) {
  RealField xs(g.size());
  for (int j = 0; j < g.size(); ++j) xs[j] = g.node(j);
  write_csv(path, {"x", "zeta", "v_beta", "u"}, {xs, zeta, v_beta, u});
}

inline ProfileData load_profile_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  ProfileData p{t.column("x"), t.column("zeta"), t.column("v_beta"),
                t.column("u")};
  if (p.x.empty() || p.zeta.size() != p.x.size() ||
      p.v_beta.size() != p.x.size() || p.u.size() != p.x.size())
    throw IoError("profile columns are empty or unequal in " + path.string());
  return p;
}

}  // namespace bblab
