#include "scholartrace/geo/anonymity.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace scholartrace::geo {

Classification classify_anonymous(const ingest::Uid& uid, std::span<const LocatedEvent> trace,
                                  double max_speed_kmh) {
    Classification out;
    out.trace.reserve(trace.size());
    if (!std::is_sorted(trace.begin(), trace.end(),
                        [](const LocatedEvent& a, const LocatedEvent& b) { return a.ts < b.ts; })) {
        throw std::invalid_argument("trace must be sorted by timestamp");
    }

    std::unordered_set<std::string> flagged_ips;
    const LocatedEvent* anchor = nullptr;

    for (const auto& event : trace) {
        AnnotatedEvent annotated{event, false};
        if (flagged_ips.contains(event.ip)) {
            annotated.flagged = true;
        } else if (event.location) {
            if (anchor == nullptr) {
                anchor = &event;
            } else {
                const double km = haversine_km(anchor->location->point, event.location->point);
                const double hours =
                    std::chrono::duration<double>(event.ts - anchor->ts).count() / 3600.0;
                const bool impossible = hours == 0.0 ? km > 0.0 : km / hours > max_speed_kmh;
                if (impossible) {
                    annotated.flagged = true;
                    flagged_ips.insert(event.ip);
                    out.labels.push_back(AnonymityLabel{event.ip, uid, event.ts});
                } else {
                    anchor = &event;
                }
            }
        }
        out.trace.push_back(std::move(annotated));
    }
    return out;
}

Classification classify_anonymous(const ingest::Uid& uid, std::span<const AnnotatedEvent> trace,
                                  double max_speed_kmh) {
    std::vector<LocatedEvent> plain;
    plain.reserve(trace.size());
    for (const auto& a : trace) plain.push_back(a.event);
    return classify_anonymous(uid, std::span<const LocatedEvent>(plain), max_speed_kmh);
}

std::vector<ReassignedEvent> reassign_locations(std::span<const AnnotatedEvent> trace) {
    std::vector<std::size_t> trusted;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (!trace[i].flagged && trace[i].event.location) trusted.push_back(i);
    }

    std::vector<ReassignedEvent> out;
    out.reserve(trace.size());
    std::size_t next_trusted = 0;  // first trusted index with position >= i
    for (std::size_t i = 0; i < trace.size(); ++i) {
        while (next_trusted < trusted.size() && trusted[next_trusted] < i) ++next_trusted;
        const AnnotatedEvent& current = trace[i];
        ReassignedEvent result{current, std::nullopt};

        const std::size_t* before = next_trusted > 0 ? &trusted[next_trusted - 1] : nullptr;
        const std::size_t* after = next_trusted < trusted.size() ? &trusted[next_trusted] : nullptr;

        if (!current.flagged) {
            if (current.event.location) result.real_location = current.event.location;
            else if (before) result.real_location = trace[*before].event.location;
        } else if (before && after) {
            const auto gap_before = current.event.ts - trace[*before].event.ts;
            const auto gap_after = trace[*after].event.ts - current.event.ts;
            result.real_location = gap_after < gap_before ? trace[*after].event.location
                                                          : trace[*before].event.location;
        } else if (before) {
            result.real_location = trace[*before].event.location;
        } else if (after) {
            result.real_location = trace[*after].event.location;
        }
        out.push_back(std::move(result));
    }
    return out;
}

}  // namespace scholartrace::geo
