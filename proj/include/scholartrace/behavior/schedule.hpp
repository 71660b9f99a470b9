#pragma once

#include <span>

#include <json.hpp>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::behavior {

/// Local hours counted as night: [start_hour, 24) ∪ [0, end_hour).
struct NightWindow {
    int start_hour = 22;
    int end_hour = 6;

    bool contains(int hour) const;
};

struct ScheduleFeatures {
    ingest::Uid uid;
    double night_fraction = 0.0;
    double weekend_fraction = 0.0;
    std::size_t active_days = 0;
    std::size_t events_total = 0;

    friend bool operator==(const ScheduleFeatures&, const ScheduleFeatures&) = default;
};

/// Count-weighted shares of night and weekend events. Duplicates are counted
/// as given. Zero events give zero fractions.
ScheduleFeatures schedule_features(const ingest::Uid& uid, std::span<const Timestamp> times,
                                   UtcOffset offset = UtcOffset::china(), NightWindow night = {});

nlohmann::ordered_json to_json(const ScheduleFeatures& f);

}  // namespace scholartrace::behavior
