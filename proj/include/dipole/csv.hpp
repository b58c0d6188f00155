#pragma once

// Minimal CSV reading and writing with round-trip number formatting.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dipole/geometry.hpp"

namespace dipole::csv {

/// Shortest decimal form that parses back to the same double.
std::string format(double value);
std::string format(std::uint64_t value);
std::string format(std::int64_t value);

double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws if absent.
  std::size_t column(std::string_view name) const;
};

Table read(std::istream& in);
Table read_file(const std::string& path);

/// Reads the `x` and `y` columns of any table that has them.
std::vector<Point2> read_points(const std::string& path);

}  // namespace dipole::csv
