#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace scholartrace {

bool is_valid_utf8(std::string_view bytes);

/// Replaces every invalid UTF-8 sequence with U+FFFD. Valid input is returned unchanged.
std::string sanitize_utf8(std::string_view bytes);

/// Number of code points in valid UTF-8 text.
std::size_t utf8_length(std::string_view text);

bool is_lower_hex(std::string_view text);

}  // namespace scholartrace
