#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "landscape/diagram.hpp"
#include "landscape/error.hpp"
#include "landscape/landscape.hpp"
#include "landscape/ph/complex.hpp"
#include "landscape/random_models.hpp"

namespace landscape::io {

/// Shortest text that is still 17 significant digits; round trips exactly.
inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double parse_real(const std::string& token, const std::string& where) {
  if (token == "inf" || token == "+inf" || token == "Inf" || token == "infinity") {
    return kInfinity;
  }
  if (token == "-inf" || token == "-Inf") {
    return -kInfinity;
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE || std::isnan(v)) {
    throw ContractError(where + ": invalid number '" + token + "'");
  }
  return v;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write '" + path + "'");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Diagram files: lines "<degree> <birth> <death>", '#' comments, blank lines.

/// All degrees present in the stream, keyed by degree.
inline std::map<int, PersistenceDiagram> read_diagrams(std::istream& in,
                                                       const std::string& name = "diagram") {
  std::map<int, PersistenceDiagram> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    if (tokens.size() != 3) {
      throw ContractError(where + ": expected '<degree> <birth> <death>'");
    }
    const double deg = detail::parse_real(tokens[0], where);
    if (!(deg >= 0.0) || deg != std::floor(deg) || deg > 1e6) {
      throw ContractError(where + ": degree must be a non-negative integer");
    }
    const DiagramPoint p{detail::parse_real(tokens[1], where), detail::parse_real(tokens[2], where)};
    if (!std::isfinite(p.birth)) throw ContractError(where + ": birth must be finite");
    if (p.death < p.birth) throw ContractError(where + ": death precedes birth");
    auto& d = out[static_cast<int>(deg)];
    d.degree = static_cast<int>(deg);
    d.points.push_back(p);
  }
  return out;
}

/// The points of one degree (empty diagram if the degree is absent).
inline PersistenceDiagram read_diagram(const std::string& path, int degree) {
  auto in = detail::open_input(path);
  auto all = read_diagrams(in, path);
  if (auto it = all.find(degree); it != all.end()) return it->second;
  PersistenceDiagram empty;
  empty.degree = degree;
  return empty;
}

inline void write_diagrams(std::ostream& out, std::span<const PersistenceDiagram> diagrams) {
  for (const auto& d : diagrams) {
    for (const auto& p : d.points) {
      out << d.degree << ' ' << format_real(p.birth) << ' ' << format_real(p.death) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Landscape files: {"kmax": K, "levels": [[[t, v], ...], ...]}

inline std::string landscape_to_json(const PersistenceLandscape& l) {
  std::string s = "{\"kmax\": " + std::to_string(l.num_levels()) + ", \"levels\": [";
  for (std::size_t k = 0; k < l.num_levels(); ++k) {
    s += k ? ",\n  [" : "\n  [";
    const auto pts = l.levels()[k].points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ", ";
      s += "[" + format_real(pts[i].t) + ", " + format_real(pts[i].value) + "]";
    }
    s += "]";
  }
  s += l.num_levels() ? "\n]}\n" : "]}\n";
  return s;
}

inline PersistenceLandscape landscape_from_json(const std::string& text,
                                                const std::string& name = "landscape") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(name + ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object() || !doc.contains("levels") || !doc["levels"].is_array()) {
    throw ContractError(name + ": expected an object with a 'levels' array");
  }
  std::vector<PiecewiseLinearFunction> levels;
  for (const auto& level : doc["levels"]) {
    if (!level.is_array()) throw ContractError(name + ": each level must be an array");
    std::vector<CriticalPoint> pts;
    for (const auto& pt : level) {
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        throw ContractError(name + ": critical points must be [t, value] pairs");
      }
      pts.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i].t > pts[i - 1].t)) {
        throw ContractError(name + ": abscissae must be strictly increasing within a level");
      }
    }
    levels.emplace_back(std::move(pts));
  }
  if (doc.contains("kmax") && doc["kmax"].is_number_integer() &&
      doc["kmax"].get<long long>() < static_cast<long long>(levels.size())) {
    throw ContractError(name + ": kmax is smaller than the number of levels");
  }
  return PersistenceLandscape(std::move(levels));
}

inline PersistenceLandscape read_landscape(const std::string& path) {
  auto in = detail::open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return landscape_from_json(buf.str(), path);
}

inline void write_landscape(const std::string& path, const PersistenceLandscape& l) {
  auto out = detail::open_output(path);
  out << landscape_to_json(l);
}

/// Per-level curves sampled every `step` over the landscape's support:
/// header "t,lambda_1,...,lambda_K", one row per abscissa.
inline std::string landscape_to_csv(const PersistenceLandscape& l, double step) {
  if (!(step > 0.0)) throw ContractError("export: grid step must be positive");
  std::string s = "t";
  for (std::size_t k = 1; k <= l.num_levels(); ++k) s += ",lambda_" + std::to_string(k);
  s += '\n';
  if (l.num_levels() == 0) return s;
  double lo = kInfinity;
  double hi = -kInfinity;
  for (const auto& level : l.levels()) {
    lo = std::min(lo, level.support_min());
    hi = std::max(hi, level.support_max());
  }
  const auto first = static_cast<long long>(std::floor(lo / step + 1e-9));
  const auto last = static_cast<long long>(std::ceil(hi / step - 1e-9));
  for (long long i = first; i <= last; ++i) {
    const double t = static_cast<double>(i) * step;
    s += format_real(t);
    for (std::size_t k = 1; k <= l.num_levels(); ++k) s += "," + format_real(l(k, t));
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Point clouds, graphs and grid values as CSV.

inline std::vector<std::vector<double>> read_csv_rows(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    for (std::string tok; std::getline(fields, tok, ',');) {
      const auto b = tok.find_first_not_of(" \t\r");
      const auto e = tok.find_last_not_of(" \t\r");
      tok = b == std::string::npos ? "" : tok.substr(b, e - b + 1);
      row.push_back(detail::parse_real(tok, name + ":" + std::to_string(line_no)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline models::PointCloud read_points(const std::string& path) {
  auto in = detail::open_input(path);
  auto rows = read_csv_rows(in, path);
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw ContractError(path + ": rows have different numbers of coordinates");
    }
    for (double v : r) {
      if (!std::isfinite(v)) throw ContractError(path + ": coordinates must be finite");
    }
  }
  return rows;
}

inline void write_rows(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_real(r[i]);
    out << '\n';
  }
}

/// Graph CSV: first row "n", then "u,v,value" per edge.
inline ph::FilteredGraph read_graph(const std::string& path) {
  auto in = detail::open_input(path);
  const auto rows = read_csv_rows(in, path);
  if (rows.empty() || rows.front().size() != 1 || !(rows.front()[0] >= 0.0)) {
    throw ContractError(path + ": first row must hold the vertex count");
  }
  const auto n = static_cast<std::size_t>(rows.front()[0]);
  std::vector<ph::WeightedEdge> edges;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3 || r[0] < 0 || r[1] < 0 || r[0] != std::floor(r[0]) || r[1] != std::floor(r[1])) {
      throw ContractError(path + ": edge rows must be 'u,v,value' with integer vertices");
    }
    edges.push_back({static_cast<std::uint32_t>(r[0]), static_cast<std::uint32_t>(r[1]), r[2]});
  }
  return ph::FilteredGraph(n, std::move(edges));
}

inline void write_graph(std::ostream& out, const ph::FilteredGraph& g) {
  out << g.num_vertices() << '\n';
  for (const auto& e : g.edges()) out << e.u << ',' << e.v << ',' << format_real(e.value) << '\n';
}

/// Grid values: all numbers in file order (any mix of commas and newlines),
/// matched against `shape` in vertex-id order.
inline models::GridField read_grid(const std::string& path, const ph::GridShape& shape) {
  shape.validate();
  auto in = detail::open_input(path);
  models::GridField field{shape, {}};
  for (const auto& row : read_csv_rows(in, path)) {
    field.values.insert(field.values.end(), row.begin(), row.end());
  }
  if (field.values.size() != shape.num_vertices()) {
    throw ContractError(path + ": expected " + std::to_string(shape.num_vertices()) +
                        " grid values, found " + std::to_string(field.values.size()));
  }
  return field;
}

/// Grid written one row per line along axis 0.
inline void write_grid(std::ostream& out, const models::GridField& field) {
  const std::size_t row = field.shape.dims.front();
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    out << (i % row ? "," : "") << format_real(field.values[i]);
    if (i % row == row - 1) out << '\n';
  }
}

/// Parses "32x32" or "13x13x13".
inline ph::GridShape parse_shape(const std::string& text) {
  ph::GridShape shape;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, 'x');) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (tok.empty() || *end != '\0' || v <= 0) {
      throw ContractError("invalid grid shape '" + text + "' (expected e.g. 32x32)");
    }
    shape.dims.push_back(static_cast<std::size_t>(v));
  }
  shape.validate();
  return shape;
}

}  // namespace landscape::io
