#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scholartrace/common/time.hpp"
#include "scholartrace/geo/geo_point.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::geo {

/// Speed of sound at sea level, 343 m/s, in km/h.
inline constexpr double kSpeedOfSoundKmh = 343.0 * 3.6;

struct LocatedEvent {
    Timestamp ts;
    std::string ip;
    std::optional<CityLocation> location;  ///< nullopt when the IP did not resolve
};

struct AnnotatedEvent {
    LocatedEvent event;
    bool flagged = false;  ///< reached through an IP labelled as an anonymous node for this uid
};

/// An IP labelled as an anonymizer exit for one participant.
struct AnonymityLabel {
    std::string ip;
    ingest::Uid scope;
    Timestamp flagged_at;  ///< ts of the event that triggered the label
};

struct Classification {
    std::vector<AnonymityLabel> labels;
    std::vector<AnnotatedEvent> trace;
};

/// Impossible-travel test over one participant's time-sorted trace.
///
/// The first resolvable event is the trusted anchor. Each later resolvable
/// event is compared with the anchor: if the implied speed exceeds
/// `max_speed_kmh` (or the events are simultaneous at different places) its IP
/// is labelled and the anchor stays put; otherwise the event becomes the new
/// anchor. Events through an already labelled IP are flagged without testing.
/// Unresolved events never move the anchor and are never tested.
///
/// Throws std::invalid_argument if the trace is not sorted by ts.
Classification classify_anonymous(const ingest::Uid& uid, std::span<const LocatedEvent> trace,
                                  double max_speed_kmh = kSpeedOfSoundKmh);

/// Re-runs classification on an annotated trace, ignoring its existing flags.
Classification classify_anonymous(const ingest::Uid& uid, std::span<const AnnotatedEvent> trace,
                                  double max_speed_kmh = kSpeedOfSoundKmh);

struct ReassignedEvent {
    AnnotatedEvent annotated;
    std::optional<CityLocation> real_location;
};

/// Gives every event a best-estimate real location.
/// Flagged events take the location of the nearest-in-time trusted (unflagged,
/// resolved) event, ties going to the earlier one. Trusted events keep their own
/// location; unflagged unresolved events keep the last known trusted location.
std::vector<ReassignedEvent> reassign_locations(std::span<const AnnotatedEvent> trace);

}  // namespace scholartrace::geo
