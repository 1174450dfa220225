#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spinvault::cli {

using Cell = std::variant<double, long long, std::string>;

/// Column-labelled result rows shared by the CSV and JSON emitters.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Fixed scientific form with nine significant digits, e.g. 8.66216000e-01.
std::string format_number(double x);

void write_csv(const Table& table, std::ostream& out);

/// Array of {column: value} objects.
nlohmann::json table_to_json(const Table& table);

/// "min:max:steps" (steps >= 1, both ends included) or a comma list
/// "v1,v2,...". Throws EmptyGrid for zero values and InvalidParameter on
/// malformed text.
std::vector<double> parse_values(std::string_view text);

/// "4,8" -> {4, 8}.
std::vector<int> parse_int_list(std::string_view text);

double parse_double(std::string_view text);

}  // namespace spinvault::cli
