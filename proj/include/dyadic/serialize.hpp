#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "dyadic/haar.hpp"
#include "dyadic/operators.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

/// Shortest decimal that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::int64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
  std::int64_t line_number;
};

inline nlohmann::json to_json(const Window& w) {
  return {{"K", w.half_extent_log()}, {"N", w.resolution_log()}, {"A", w.ancestor_depth()}};
}

inline Window window_from_json(const nlohmann::json& j) {
  for (const char* key : {"K", "N", "A"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("window: missing field '") + key + "'");
  return Window(j.at("K").get<int>(), j.at("N").get<int>(), j.at("A").get<int>());
}

// ---------------------------------------------------------------------
// StepFunction CSV: a window comment line, a header, one row per cell.
//
//   # {"K":1,"N":3,"A":0}
//   cell_index,left_endpoint,value
//   0,-2,0
//   ...

inline void write_step_function(std::ostream& os, const StepFunction& f) {
  const Window& w = f.window();
  os << "# {\"K\":" << w.half_extent_log() << ",\"N\":" << w.resolution_log()
     << ",\"A\":" << w.ancestor_depth() << "}\n";
  os << "cell_index,left_endpoint,value\n";
  for (std::int64_t c = 0; c < f.size(); ++c)
    os << c << "," << format_double(f.window().cell_left(c)) << "," << format_double(f[c])
       << "\n";
}

inline void save_step_function(const std::filesystem::path& path, const StepFunction& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_step_function(os, f);
}

inline StepFunction read_step_function(std::istream& is) {
  std::string line;
  std::int64_t lineno = 0;

  if (!std::getline(is, line)) throw ParseError("no cells (empty file)", 1);
  ++lineno;
  if (line.rfind("# ", 0) != 0) throw ParseError("expected '# {\"K\":...}' window line", lineno);
  Window w;
  try {
    w = window_from_json(nlohmann::json::parse(line.substr(2)));
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad window JSON: ") + e.what(), lineno);
  }

  if (!std::getline(is, line)) throw ParseError("missing CSV header", lineno + 1);
  ++lineno;
  if (line != "cell_index,left_endpoint,value")
    throw ParseError("expected header 'cell_index,left_endpoint,value'", lineno);

  std::vector<double> cells;
  cells.reserve(static_cast<std::size_t>(w.cell_count()));
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw ParseError("expected 3 comma-separated fields", lineno);
    std::int64_t idx;
    double value;
    try {
      idx = parse_int(std::string_view(line).substr(0, c1));
      parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));  // left endpoint
      value = parse_double(std::string_view(line).substr(c2 + 1));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), lineno);
    }
    if (idx != static_cast<std::int64_t>(cells.size()))
      throw ParseError("cell_index out of order (expected " + std::to_string(cells.size()) + ")",
                       lineno);
    cells.push_back(value);
  }
  if (cells.empty()) throw ParseError("no cells", lineno);
  if (static_cast<std::int64_t>(cells.size()) != w.cell_count())
    throw ParseError("cell count " + std::to_string(cells.size()) + " does not match window (" +
                         std::to_string(w.cell_count()) + ")",
                     lineno);
  return StepFunction(w, std::move(cells));
}

inline StepFunction load_step_function(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_step_function(is);
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------
// SymbolSequence JSON: {"default": x, "entries": [{"k","m","value"}...]}

inline nlohmann::json to_json(const SymbolSequence& eps) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [I, v] : eps.entries)
    entries.push_back({{"k", I.scale}, {"m", I.offset}, {"value", v}});
  return {{"default", eps.default_value}, {"entries", entries}};
}

inline SymbolSequence symbol_from_json(const nlohmann::json& j) {
  SymbolSequence eps;
  if (!j.contains("default")) throw std::invalid_argument("symbol: missing field 'default'");
  eps.default_value = j.at("default").get<double>();
  for (const auto& e : j.value("entries", nlohmann::json::array())) {
    for (const char* key : {"k", "m", "value"})
      if (!e.contains(key))
        throw std::invalid_argument(std::string("symbol entry: missing field '") + key + "'");
    eps.entries[DyadicInterval{e.at("k").get<int>(), e.at("m").get<std::int64_t>()}] =
        e.at("value").get<double>();
  }
  return eps;
}

inline SymbolSequence load_symbol(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return symbol_from_json(nlohmann::json::parse(is));
}

inline void save_symbol(const std::filesystem::path& path, const SymbolSequence& eps) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << to_json(eps).dump(2) << "\n";
}

// ---------------------------------------------------------------------
// WeightVector JSON: {"exponents": [...], "weight_files": [...]};
// weight files are CSVs resolved relative to the JSON's directory.

inline WeightVector load_weight_vector(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  const nlohmann::json j = nlohmann::json::parse(is);
  for (const char* key : {"exponents", "weight_files"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("weight vector: missing field '") + key + "'");
  ExponentVector P(j.at("exponents").get<std::vector<double>>());
  std::vector<Weight> ws;
  for (const auto& f : j.at("weight_files")) {
    const std::filesystem::path wp = path.parent_path() / f.get<std::string>();
    ws.emplace_back(load_step_function(wp));
  }
  return WeightVector(std::move(ws), std::move(P));
}

// ---------------------------------------------------------------------
// Haar expansion JSON (output of `haar coeffs`, input of `haar reconstruct`)

inline nlohmann::json to_json(const HaarExpansion& e, const Window& w) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [I, v] : e.coefficients)
    coeffs.push_back({{"k", I.scale}, {"m", I.offset}, {"value", v}});
  return {{"window", to_json(w)},
          {"averages", {e.average_negative, e.average_positive}},
          {"coeffs", coeffs}};
}

struct ExpansionFile {
  Window window;
  HaarExpansion expansion;
};

inline ExpansionFile expansion_from_json(const nlohmann::json& j) {
  for (const char* key : {"window", "averages", "coeffs"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("expansion: missing field '") + key + "'");
  ExpansionFile out;
  out.window = window_from_json(j.at("window"));
  const auto& av = j.at("averages");
  if (!av.is_array() || av.size() != 2)
    throw std::invalid_argument("expansion: 'averages' must be a pair");
  out.expansion.average_negative = av[0].get<double>();
  out.expansion.average_positive = av[1].get<double>();
  for (const auto& e : j.at("coeffs"))
    out.expansion.coefficients[DyadicInterval{e.at("k").get<int>(),
                                              e.at("m").get<std::int64_t>()}] =
        e.at("value").get<double>();
  return out;
}

}  // namespace dyadic
