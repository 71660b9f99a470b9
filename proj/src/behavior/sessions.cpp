#include "scholartrace/behavior/sessions.hpp"

#include <algorithm>
#include <stdexcept>

namespace scholartrace::behavior {

std::vector<Session> sessionize(const ingest::Uid& uid, std::span<const Timestamp> times, Seconds gap) {
    if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("events must be time-sorted");
    std::vector<Session> sessions;
    for (const Timestamp t : times) {
        if (sessions.empty() || t - sessions.back().end > gap) {
            sessions.push_back(Session{uid, t, t, 1});
        } else {
            sessions.back().end = t;
            ++sessions.back().event_count;
        }
    }
    return sessions;
}

}  // namespace scholartrace::behavior
