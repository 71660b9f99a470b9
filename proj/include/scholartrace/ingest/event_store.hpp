#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/access_event.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::ingest {

/// Position of an appended record in the log, 1-based. Strictly increasing.
struct Ack {
    std::uint64_t seq = 0;
    friend bool operator==(const Ack&, const Ack&) = default;
};

struct UidRecord {
    std::uint64_t seq;
    Uid uid;
};

struct EventRecord {
    std::uint64_t seq;
    Timestamp received;
    AccessEvent event;
};

struct SurveyRecord {
    std::uint64_t seq;
    Uid uid;
    Timestamp received;
    int wave_index;       ///< ordinal of this submission among the uid's submissions
    std::string payload;  ///< verbatim request body
};

struct DowntimeRecord {
    std::uint64_t seq;
    TimeWindow window;
};

using StoreRecord = std::variant<UidRecord, EventRecord, SurveyRecord, DowntimeRecord>;

/// Immutable copy of the store contents for analysis.
struct StoreSnapshot {
    std::vector<Uid> participants;
    std::vector<EventRecord> events;
    std::vector<SurveyRecord> surveys;
    std::vector<TimeWindow> downtime;
};

struct StoreConfig {
    /// Per-deployment salt mixed into UID digests; nullopt disables salting.
    std::optional<std::string> salt;
    /// JSON-lines log. Without it the store is memory-only.
    std::optional<std::filesystem::path> log_path;

    /// Salt from SCHOLARTRACE_SALT when set.
    static StoreConfig from_environment();
};

/// Append-only participant/event/survey store with a downtime registry.
/// All members are safe to call concurrently; appends are totally ordered.
class EventStore {
public:
    using Clock = std::function<Timestamp()>;

    static Timestamp system_now();

    explicit EventStore(StoreConfig config = {}, Clock clock = &EventStore::system_now);

    /// Rebuilds a store from an existing log file. Records are re-applied in order
    /// without re-validation; new appends continue the same file.
    static EventStore open(StoreConfig config, Clock clock = &EventStore::system_now);

    EventStore(EventStore&& other) noexcept;
    EventStore(const EventStore&) = delete;
    EventStore& operator=(const EventStore&) = delete;

    /// Registers a participant. A client presenting an already registered UID
    /// gets it back unchanged. Otherwise the digest of entropy ‖ ts ‖ salt is
    /// registered, regenerating up to three times on collision.
    Uid allocate_uid(std::string_view client_entropy, std::optional<Timestamp> ts,
                     std::optional<std::string_view> presented_uid = std::nullopt);

    /// Registers a UID minted elsewhere (log replay from another store). No-op if known.
    Ack import_uid(const Uid& uid);

    Ack submit_event(const AccessEvent& event);
    Ack submit_survey(std::string_view payload);
    Ack register_downtime(TimeWindow window);

    bool is_registered(const Uid& uid) const;
    std::size_t size() const;
    StoreSnapshot snapshot() const;

    /// The persisted log bytes this store corresponds to.
    std::string serialize() const;

private:
    Ack append(StoreRecord record);
    std::uint64_t next_seq() const { return records_.size() + 1; }
    bool in_downtime(Timestamp ts) const;
    void apply(StoreRecord record);

    StoreConfig config_;
    Clock clock_;
    mutable std::mutex mutex_;
    std::vector<StoreRecord> records_;
    std::unordered_set<Uid> participants_;
    std::unordered_map<Uid, int> survey_counts_;
    std::vector<TimeWindow> downtime_;
    std::ofstream log_;
};

std::string record_to_line(const StoreRecord& record);
StoreRecord record_from_line(std::string_view line);

/// UIDs with events on at least `min_days` distinct local calendar days.
/// Fewer than seven days of use excludes a participant.
std::set<Uid> eligible_participants(const StoreSnapshot& snapshot,
                                    UtcOffset offset = UtcOffset::china(), int min_days = 7);

}  // namespace scholartrace::ingest
