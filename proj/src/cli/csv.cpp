#include "spinvault/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "spinvault/core/error.hpp"

namespace spinvault::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw Error(Errc::InvalidParameter, "row width does not match header");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

nlohmann::json table_to_json(const Table& table) {
  auto arr = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[table.columns[i]] = v; }, row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

double parse_double(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end || !std::isfinite(v))
    throw Error(Errc::InvalidParameter,
                "not a finite number: '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_values(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(Errc::EmptyGrid, "empty value list");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
      throw Error(Errc::InvalidParameter,
                  "range must be min:max:steps, got '" + std::string(text) + "'");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double steps = parse_double(parts[2]);
    if (steps != std::floor(steps) || steps < 0)
      throw Error(Errc::InvalidParameter, "steps must be a whole number");
    if (steps == 0) throw Error(Errc::EmptyGrid, "range has zero steps");
    const auto n = static_cast<std::size_t>(steps);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
      values[i] = n == 1 ? lo
                         : lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(n - 1);
    return values;
  }
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> values;
  for (auto part : split(trim(text), ',')) {
    int v = 0;
    const auto* end = part.data() + part.size();
    const auto [p, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc{} || p != end || part.empty())
      throw Error(Errc::InvalidParameter,
                  "not an integer: '" + std::string(part) + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace spinvault::cli
