#include "dipole/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "dipole/config.hpp"

namespace dipole::csv {

namespace {

template <typename T>
std::string to_text(T value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

template <typename T>
T from_text(std::string_view text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(ErrorKind::InvalidArgument, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format(double value) { return to_text(value); }
std::string format(std::uint64_t value) { return to_text(value); }
std::string format(std::int64_t value) { return to_text(value); }

double parse_double(std::string_view text) { return from_text<double>(text); }
std::int64_t parse_int(std::string_view text) { return from_text<std::int64_t>(text); }

std::vector<std::string> split_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.emplace_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

void Writer::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  fail(ErrorKind::InvalidArgument, "csv: missing column '" + std::string(name) + "'");
}

Table read(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Io, "csv: empty input");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) fail(ErrorKind::InvalidArgument, "csv: ragged row '" + line + "'");
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  return read(in);
}

std::vector<Point2> read_points(const std::string& path) {
  const Table table = read_file(path);
  const std::size_t cx = table.column("x");
  const std::size_t cy = table.column("y");
  std::vector<Point2> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) points.push_back({parse_double(row[cx]), parse_double(row[cy])});
  return points;
}

}  // namespace dipole::csv
