#include "scholartrace/behavior/schedule.hpp"

#include <set>

namespace scholartrace::behavior {

bool NightWindow::contains(int hour) const {
    if (start_hour <= end_hour) return start_hour <= hour && hour < end_hour;
    return hour >= start_hour || hour < end_hour;
}

ScheduleFeatures schedule_features(const ingest::Uid& uid, std::span<const Timestamp> times, UtcOffset offset,
                                   NightWindow night) {
    ScheduleFeatures f{uid};
    std::size_t nights = 0, weekends = 0;
    std::set<std::chrono::local_days> days;
    for (const Timestamp t : times) {
        if (night.contains(local_hour(t, offset))) ++nights;
        if (is_local_weekend(t, offset)) ++weekends;
        days.insert(local_day(t, offset));
    }
    f.events_total = times.size();
    f.active_days = days.size();
    if (!times.empty()) {
        f.night_fraction = static_cast<double>(nights) / static_cast<double>(times.size());
        f.weekend_fraction = static_cast<double>(weekends) / static_cast<double>(times.size());
    }
    return f;
}

nlohmann::ordered_json to_json(const ScheduleFeatures& f) {
    nlohmann::ordered_json j;
    j["uid"] = f.uid.str();
    j["night_fraction"] = f.night_fraction;
    j["weekend_fraction"] = f.weekend_fraction;
    j["active_days"] = f.active_days;
    j["events_total"] = f.events_total;
    return j;
}

}  // namespace scholartrace::behavior
