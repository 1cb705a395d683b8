#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rpys::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> cells;
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
/// Blank lines are skipped.
std::vector<Row> parse(std::string_view text);

/// Quotes a cell when it contains a comma, quote or line break.
std::string escape(std::string_view cell);

std::string join_row(const std::vector<std::string> &cells);

}  // namespace rpys::csv
