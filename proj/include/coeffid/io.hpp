#pragma once

// CSV and JSON serialization of grid functions and experiment reports.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace coeffid {

using Json = nlohmann::ordered_json;

/// Shortest-roundtrip text is not what we want for tables; CSV columns are
/// always printed with 17 significant digits.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("cannot parse number '" + std::string(s) + "'");
  return v;
}

/// A table of named columns; written as CSV with a header line.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c) out += ',';
        out += format_double(r[c]);
      }
      out += '\n';
    }
    return out;
  }
};

/// Columns x followed by one column per grid function; all must share a grid.
inline Table grid_table(const std::vector<std::pair<std::string, const GridFunction1D*>>& cols) {
  Table t;
  t.columns.push_back("x");
  for (auto& [name, g] : cols) {
    t.columns.push_back(name);
    g->require_same_grid(*cols.front().second);
  }
  const auto& g0 = *cols.front().second;
  for (std::size_t i = 0; i < g0.size(); ++i) {
    std::vector<double> row{g0.x(i)};
    for (auto& c : cols) row.push_back((*c.second)[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string to_csv(const GridFunction1D& g) { return grid_table({{"value", &g}}).to_csv(); }

/// Parses "x,<value>[,...]" rows. With a header, `column` selects a named
/// value column; otherwise the second column is used. The grid must be
/// uniform to within rounding.
inline GridFunction1D grid_function_from_csv(const std::string& text, const std::string& column = "") {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs, vs;
  std::size_t col = 1;
  bool first = true;
  auto split = [](const std::string& l) {
    std::vector<std::string_view> out;
    std::string_view v(l);
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    for (std::size_t start = 0;;) {
      const auto c = v.find(',', start);
      out.push_back(v.substr(start, c == std::string_view::npos ? std::string_view::npos : c - start));
      if (c == std::string_view::npos) break;
      start = c + 1;
    }
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      if (cells[0] == "x") {
        if (!column.empty()) {
          auto it = std::find(cells.begin(), cells.end(), std::string_view(column));
          if (it == cells.end()) throw Error("CSV has no column '" + column + "'");
          col = static_cast<std::size_t>(it - cells.begin());
        }
        continue;
      }
      if (!column.empty()) throw Error("CSV column '" + column + "' requested but no header");
    }
    if (cells.size() <= col) throw Error("CSV row has too few columns: '" + line + "'");
    xs.push_back(parse_double(cells[0]));
    vs.push_back(parse_double(cells[col]));
  }
  if (xs.size() < 2) throw Error("CSV needs at least two rows");
  GridFunction1D g(Interval(xs.front(), xs.back()), std::move(vs));
  const double tol = 1e-9 * g.h();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.x(i)) > tol) throw Error("CSV grid is not uniform");
  return g;
}

inline Json to_json(const GridFunction1D& g) {
  Json j;
  j["interval"] = {g.interval().lo, g.interval().hi};
  j["n"] = g.cells();
  j["values"] = std::vector<double>(g.values().begin(), g.values().end());
  return j;
}

inline GridFunction1D grid_function_from_json(const Json& j) {
  try {
    Interval iv(j.at("interval").at(0).get<double>(), j.at("interval").at(1).get<double>());
    auto values = j.at("values").get<std::vector<double>>();
    if (j.contains("n") && j.at("n").get<std::size_t>() + 1 != values.size())
      throw Error("JSON grid function: n does not match values");
    return GridFunction1D(iv, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed grid function JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

/// Machine-readable record of one verification run.
struct ExperimentReport {
  std::string experiment;
  Json inputs = Json::object();
  Json results = Json::object();
  bool passed = true;
  std::vector<std::string> notes;
  std::vector<Table> curves;
  std::vector<std::string> curve_names;

  void add_curve(std::string name, Table t) {
    curve_names.push_back(std::move(name));
    curves.push_back(std::move(t));
  }

  Json to_json() const {
    Json j;
    j["experiment"] = experiment;
    j["inputs"] = inputs;
    j["results"] = results;
    j["passed"] = passed;
    j["notes"] = notes;
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }
};

/// NaN and infinities are not representable in JSON; they become null.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace coeffid
