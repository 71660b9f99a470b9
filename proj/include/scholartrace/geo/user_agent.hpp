#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scholartrace::geo {

struct UAInfo {
    std::string browser_family;   ///< "Chrome", "Firefox", "Safari", "Edge", "Opera", "IE" or "other"
    std::string browser_version;  ///< empty when the family is "other"
    std::string os_family;        ///< "Windows", "macOS", "Linux", "Android", "iOS", "Chrome OS" or "other"
    std::string raw;              ///< input with invalid UTF-8 replaced by U+FFFD

    friend bool operator==(const UAInfo&, const UAInfo&) = default;
};

/// One "name/version" product token from a User-Agent header.
struct UAProduct {
    std::string name;
    std::string version;
};

/// Tokenized header: products in order, and each parenthesized comment split on ';'.
struct UATokens {
    std::vector<UAProduct> products;
    std::vector<std::string> comments;
};

UATokens tokenize_user_agent(std::string_view ua);

/// Total: never throws, unknown input maps to "other".
UAInfo parse_user_agent(std::string_view raw);

}  // namespace scholartrace::geo
