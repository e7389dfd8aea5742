#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "swarmsense/errors.hpp"

namespace swarmsense {

// Planar grid of sensing cells. Cells are indexed row-major from the top-left
// corner: x grows with column, y with row. All lengths in metres.
struct SensingMap {
  int rows = 0;
  int cols = 0;
  double width = 0.0;
  double height = 0.0;
  int departure_cell = 0;
  double altitude = 0.40;  // hover height; metadata, travel is horizontal

  int cell_count() const { return rows * cols; }
  double pitch_x() const { return width / cols; }
  double pitch_y() const { return height / rows; }
  int row_of(int n) const { return n / cols; }
  int col_of(int n) const { return n % cols; }
  int index_of(int row, int col) const { return row * cols + col; }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline SensingMap build_map(int rows, int cols, double width, double height,
                            int departure_cell, double altitude = 0.40) {
  if (rows < 1 || cols < 1)
    throw ConfigError("sensing map needs at least one row and one column");
  if (!(width > 0.0) || !(height > 0.0))
    throw ConfigError("sensing map dimensions must be positive");
  if (!(altitude > 0.0)) throw ConfigError("flight altitude must be positive");
  SensingMap map;
  map.rows = rows;
  map.cols = cols;
  map.width = width;
  map.height = height;
  map.departure_cell = departure_cell;
  map.altitude = altitude;
  if (departure_cell < 0 || departure_cell >= map.cell_count())
    throw ConfigError("departure cell " + std::to_string(departure_cell) +
                      " lies outside the map");
  return map;
}

inline void check_cell(const SensingMap& map, int n) {
  if (n < 0 || n >= map.cell_count())
    throw ConfigError("cell index " + std::to_string(n) + " lies outside the map");
}

inline Point cell_center(const SensingMap& map, int n) {
  check_cell(map, n);
  return {(map.col_of(n) + 0.5) * map.pitch_x(),
          (map.row_of(n) + 0.5) * map.pitch_y()};
}

inline double distance(const SensingMap& map, int a, int b) {
  Point pa = cell_center(map, a);
  Point pb = cell_center(map, b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

// Per-cell sensing requirements in seconds, optionally alongside the density
// estimates they were derived from.
struct Requirements {
  std::vector<double> values;
  std::vector<double> densities;  // empty when not supplied
};

struct HoverAllocation {
  std::vector<double> t;  // seconds per cell
  double total = 0.0;     // the operating-time budget the allocation sums to
};

// Split a total operating-time budget across cells proportionally to the
// per-cell density estimates.
inline HoverAllocation allocate_hover_time(const std::vector<double>& densities,
                                           double total_s) {
  if (total_s < 0.0) throw ConfigError("operating-time budget must be non-negative");
  double sum = 0.0;
  for (double d : densities) {
    if (d < 0.0) throw ConfigError("density estimates must be non-negative");
    sum += d;
  }
  if (!(sum > 0.0))
    throw ConfigError("cannot allocate hover time over all-zero density estimates");
  HoverAllocation out;
  out.total = total_s;
  out.t.reserve(densities.size());
  for (double d : densities) out.t.push_back(d / sum * total_s);
  return out;
}

namespace detail {

inline double parse_strict_double(std::string token,
                                  const std::string& origin = "numeric field") {
  auto first = token.find_first_not_of(" \t\r");
  auto last = token.find_last_not_of(" \t\r");
  if (first == std::string::npos)
    throw ConfigError("empty value in " + origin);
  token = token.substr(first, last - first + 1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ConfigError("unparsable value '" + token + "' in " + origin);
  return value;
}

}  // namespace detail

// CSV grid: one line per map row, comma-separated decimals. Blank lines are
// skipped.
inline std::vector<double> load_grid_csv(const std::filesystem::path& file,
                                         const SensingMap& map) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::vector<double> values;
  std::string line;
  int rows_seen = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++rows_seen;
    std::size_t start = 0;
    int cols_seen = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string token = line.substr(start, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - start);
      values.push_back(detail::parse_strict_double(token, file.string()));
      ++cols_seen;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols_seen != map.cols)
      throw ConfigError(file.string() + ": row " + std::to_string(rows_seen) +
                        " has " + std::to_string(cols_seen) + " values, map has " +
                        std::to_string(map.cols) + " columns");
  }
  if (rows_seen != map.rows)
    throw ConfigError(file.string() + " has " + std::to_string(rows_seen) +
                      " rows, map has " + std::to_string(map.rows));
  return values;
}

inline Requirements load_requirements(const std::filesystem::path& file,
                                      const SensingMap& map) {
  Requirements req;
  req.values = load_grid_csv(file, map);
  bool any_positive = false;
  for (double v : req.values) {
    if (v < 0.0) throw ConfigError("negative sensing requirement in " + file.string());
    if (v > 0.0) any_positive = true;
  }
  if (!any_positive)
    throw ConfigError("all sensing requirements are zero in " + file.string());
  return req;
}

}  // namespace swarmsense
