#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hydrograph::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

// Comma-separated, double-quote escaping, LF or CRLF line ends. A leading
// UTF-8 BOM is dropped, header names are trimmed and blank lines skipped.
Table parse(std::string_view text);

// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string_view trim(std::string_view s) noexcept;

}  // namespace hydrograph::csv
