#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace cubeq {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

// Row-oriented output for CSV and JSON. Doubles print with 17 significant
// digits so output is reproducible byte-for-byte.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  void write_csv(std::ostream& out) const;
  // Array of objects, one per row.
  void write_json(std::ostream& out) const;
};

std::string format_cell(const Cell& c);

}  // namespace cubeq
