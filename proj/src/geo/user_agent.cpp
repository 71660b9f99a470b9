#include "scholartrace/geo/user_agent.hpp"

#include <algorithm>
#include <optional>

#include "scholartrace/common/text.hpp"

namespace scholartrace::geo {

namespace {

constexpr std::string_view kOther = "other";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool contains(std::string_view haystack, std::string_view needle) {
    return haystack.find(needle) != std::string_view::npos;
}

const UAProduct* find_product(const UATokens& t, std::string_view name) {
    const auto it = std::find_if(t.products.begin(), t.products.end(),
                                 [&](const UAProduct& p) { return p.name == name; });
    return it == t.products.end() ? nullptr : &*it;
}

bool any_comment(const UATokens& t, std::string_view needle) {
    return std::any_of(t.comments.begin(), t.comments.end(),
                       [&](const std::string& c) { return contains(c, needle); });
}

struct Browser {
    std::string family;
    std::string version;
};

std::optional<Browser> detect_browser(const UATokens& t) {
    // ordered: several browsers also carry the Chrome and Safari tokens
    static constexpr std::pair<std::string_view, std::string_view> kTokens[] = {
        {"Edg", "Edge"},       {"Edge", "Edge"},       {"EdgA", "Edge"},      {"EdgiOS", "Edge"},
        {"OPR", "Opera"},      {"OPiOS", "Opera"},     {"CriOS", "Chrome"},   {"FxiOS", "Firefox"},
        {"Firefox", "Firefox"}, {"Chrome", "Chrome"},
    };
    for (const auto& [token, family] : kTokens) {
        if (const auto* p = find_product(t, token)) return Browser{std::string{family}, p->version};
    }
    if (const auto* opera = find_product(t, "Opera")) {
        const auto* version = find_product(t, "Version");
        return Browser{"Opera", version ? version->version : opera->version};
    }
    if (find_product(t, "Safari")) {
        if (const auto* version = find_product(t, "Version")) return Browser{"Safari", version->version};
    }
    for (const auto& comment : t.comments) {
        if (comment.rfind("MSIE ", 0) == 0) return Browser{"IE", std::string{trim(comment.substr(5))}};
    }
    if (any_comment(t, "Trident/")) {
        for (const auto& comment : t.comments) {
            if (comment.rfind("rv:", 0) == 0) return Browser{"IE", comment.substr(3)};
        }
    }
    return std::nullopt;
}

std::string detect_os(const UATokens& t) {
    if (any_comment(t, "iPhone") || any_comment(t, "iPad") || any_comment(t, "iPod")) return "iOS";
    if (any_comment(t, "Android")) return "Android";
    if (any_comment(t, "Windows")) return "Windows";
    if (any_comment(t, "CrOS")) return "Chrome OS";
    if (any_comment(t, "Macintosh") || any_comment(t, "Mac OS X")) return "macOS";
    if (any_comment(t, "Linux") || any_comment(t, "linux") || any_comment(t, "X11")) return "Linux";
    return std::string{kOther};
}

}  // namespace

UATokens tokenize_user_agent(std::string_view ua) {
    UATokens tokens;
    std::size_t pos = 0;
    while (pos < ua.size()) {
        const char ch = ua[pos];
        if (ch == ' ' || ch == '\t') {
            ++pos;
        } else if (ch == '(') {
            int depth = 0;
            std::size_t end = pos;
            for (; end < ua.size(); ++end) {
                if (ua[end] == '(') ++depth;
                else if (ua[end] == ')' && --depth == 0) break;
            }
            const std::string_view body = ua.substr(pos + 1, std::min(end, ua.size()) - pos - 1);
            std::size_t start = 0;
            while (start <= body.size()) {
                std::size_t semi = body.find(';', start);
                if (semi == std::string_view::npos) semi = body.size();
                const auto part = trim(body.substr(start, semi - start));
                if (!part.empty()) tokens.comments.emplace_back(part);
                start = semi + 1;
            }
            pos = end + 1;
        } else {
            std::size_t end = pos;
            while (end < ua.size() && ua[end] != ' ' && ua[end] != '\t' && ua[end] != '(') ++end;
            const std::string_view token = ua.substr(pos, end - pos);
            const std::size_t slash = token.find('/');
            if (slash != std::string_view::npos) {
                tokens.products.push_back(
                    UAProduct{std::string{token.substr(0, slash)}, std::string{token.substr(slash + 1)}});
            } else {
                tokens.products.push_back(UAProduct{std::string{token}, {}});
            }
            pos = end;
        }
    }
    return tokens;
}

UAInfo parse_user_agent(std::string_view raw) {
    UAInfo info;
    info.raw = sanitize_utf8(raw);
    const UATokens tokens = tokenize_user_agent(info.raw);
    if (auto browser = detect_browser(tokens)) {
        info.browser_family = browser->family;
        info.browser_version = browser->version;
    } else {
        info.browser_family = kOther;
    }
    info.os_family = detect_os(tokens);
    return info;
}

}  // namespace scholartrace::geo
