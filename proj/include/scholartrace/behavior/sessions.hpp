#pragma once

#include <span>
#include <vector>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::behavior {

inline constexpr Seconds kDefaultSessionGap{30 * 60};

struct Session {
    ingest::Uid uid;
    Timestamp start;
    Timestamp end;
    std::size_t event_count = 0;

    friend bool operator==(const Session&, const Session&) = default;
};

/// Splits one participant's sorted timestamps into sessions. A new session
/// starts whenever the gap to the previous event is strictly greater than `gap`.
/// Throws std::invalid_argument if `times` is not sorted.
std::vector<Session> sessionize(const ingest::Uid& uid, std::span<const Timestamp> times,
                                Seconds gap = kDefaultSessionGap);

}  // namespace scholartrace::behavior
