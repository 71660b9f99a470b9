#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace scholartrace {

/// Splits one CSV record. Supports double-quoted fields with "" escapes; no embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads all non-empty records. A trailing '\r' on each line is dropped.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Quotes a field when it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

}  // namespace scholartrace
