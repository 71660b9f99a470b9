#include "scholartrace/common/time.hpp"

#include <charconv>
#include <cstdio>

namespace scholartrace {

namespace {

bool parse_int(std::string_view text, int& out) {
    if (text.empty()) return false;
    for (char ch : text) {
        if (ch < '0' || ch > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
    // 2018-07-04T12:00:00Z
    if (text.size() != 20) return std::nullopt;
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z') {
        return std::nullopt;
    }
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
        !parse_int(text.substr(8, 2), day) || !parse_int(text.substr(11, 2), hour) ||
        !parse_int(text.substr(14, 2), minute) || !parse_int(text.substr(17, 2), second)) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) return std::nullopt;
    return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

std::string format_iso8601(Timestamp ts) {
    using namespace std::chrono;
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss<seconds> tod{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

std::chrono::local_seconds to_local(Timestamp ts, UtcOffset offset) {
    return std::chrono::local_seconds{ts.time_since_epoch() + offset.minutes};
}

std::chrono::local_days local_day(Timestamp ts, UtcOffset offset) {
    return std::chrono::floor<std::chrono::days>(to_local(ts, offset));
}

int local_hour(Timestamp ts, UtcOffset offset) {
    const auto local = to_local(ts, offset);
    const auto since_midnight = local - std::chrono::floor<std::chrono::days>(local);
    return static_cast<int>(std::chrono::floor<std::chrono::hours>(since_midnight).count());
}

bool is_local_weekend(Timestamp ts, UtcOffset offset) {
    const std::chrono::weekday wd{local_day(ts, offset)};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace scholartrace
