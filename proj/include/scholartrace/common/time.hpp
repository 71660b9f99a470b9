#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace scholartrace {

/// UTC instant with one-second resolution. Every timestamp in the system uses this.
using Timestamp = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

/// Fixed offset from UTC used to compute local calendar days and hours.
/// The study population is in China, hence the UTC+8 default.
struct UtcOffset {
    std::chrono::minutes minutes{8 * 60};

    static constexpr UtcOffset utc() { return UtcOffset{std::chrono::minutes{0}}; }
    static constexpr UtcOffset china() { return UtcOffset{std::chrono::minutes{8 * 60}}; }
};

/// Parses "YYYY-MM-DDTHH:MM:SSZ". Returns nullopt for anything else.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp ts);

std::chrono::local_seconds to_local(Timestamp ts, UtcOffset offset);
std::chrono::local_days local_day(Timestamp ts, UtcOffset offset);

/// Hour of day [0, 24) in the given offset.
int local_hour(Timestamp ts, UtcOffset offset);

/// True for Saturday and Sunday in the given offset.
bool is_local_weekend(Timestamp ts, UtcOffset offset);

/// Half-open UTC interval [start, end).
struct TimeWindow {
    Timestamp start;
    Timestamp end;

    bool contains(Timestamp ts) const { return start <= ts && ts < end; }
    bool overlaps(const TimeWindow& other) const { return start < other.end && other.start < end; }
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

}  // namespace scholartrace
