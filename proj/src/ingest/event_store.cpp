#include "scholartrace/ingest/event_store.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "scholartrace/ingest/errors.hpp"

namespace scholartrace::ingest {

namespace {

constexpr int kMaxRegenerations = 3;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Timestamp require_ts(const nlohmann::json& obj, const char* key) {
    auto ts = parse_iso8601(obj.at(key).get<std::string>());
    if (!ts) throw std::runtime_error(std::string("bad timestamp in log: ") + key);
    return *ts;
}

Uid require_uid(const nlohmann::json& obj) {
    auto uid = Uid::parse(obj.at("uid").get<std::string>());
    if (!uid) throw std::runtime_error("bad uid in log");
    return *uid;
}

}  // namespace

StoreConfig StoreConfig::from_environment() {
    StoreConfig config;
    if (const char* salt = std::getenv("SCHOLARTRACE_SALT"); salt != nullptr && *salt != '\0') {
        config.salt = salt;
    }
    return config;
}

std::string record_to_line(const StoreRecord& record) {
    nlohmann::ordered_json out;
    std::visit(overloaded{
                   [&](const UidRecord& r) {
                       out["type"] = "uid";
                       out["seq"] = r.seq;
                       out["uid"] = r.uid.str();
                   },
                   [&](const EventRecord& r) {
                       out["type"] = "event";
                       out["seq"] = r.seq;
                       out["received"] = format_iso8601(r.received);
                       const auto wire = event_to_wire(r.event);
                       for (const auto& [key, value] : wire.items()) out[key] = value;
                   },
                   [&](const SurveyRecord& r) {
                       out["type"] = "survey";
                       out["seq"] = r.seq;
                       out["uid"] = r.uid.str();
                       out["received"] = format_iso8601(r.received);
                       out["wave_index"] = r.wave_index;
                       out["payload"] = r.payload;
                   },
                   [&](const DowntimeRecord& r) {
                       out["type"] = "downtime";
                       out["seq"] = r.seq;
                       out["start"] = format_iso8601(r.window.start);
                       out["end"] = format_iso8601(r.window.end);
                   },
               },
               record);
    return out.dump() + "\n";
}

StoreRecord record_from_line(std::string_view line) {
    const auto obj = nlohmann::json::parse(line);
    const auto type = obj.at("type").get<std::string>();
    const auto seq = obj.at("seq").get<std::uint64_t>();
    if (type == "uid") return UidRecord{seq, require_uid(obj)};
    if (type == "event") {
        nlohmann::json wire = obj;
        wire.erase("type");
        wire.erase("seq");
        wire.erase("received");
        return EventRecord{seq, require_ts(obj, "received"), event_from_wire(wire)};
    }
    if (type == "survey") {
        return SurveyRecord{seq, require_uid(obj), require_ts(obj, "received"),
                            obj.at("wave_index").get<int>(), obj.at("payload").get<std::string>()};
    }
    if (type == "downtime") {
        return DowntimeRecord{seq, TimeWindow{require_ts(obj, "start"), require_ts(obj, "end")}};
    }
    throw std::runtime_error("unknown record type in log: " + type);
}

Timestamp EventStore::system_now() {
    return std::chrono::floor<Seconds>(std::chrono::system_clock::now());
}

EventStore::EventStore(StoreConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
    if (config_.log_path) {
        log_.open(*config_.log_path, std::ios::binary | std::ios::app);
        if (!log_) throw IngestError(IngestErrc::StoreUnavailable);
    }
}

EventStore::EventStore(EventStore&& other) noexcept {
    std::lock_guard lock(other.mutex_);
    config_ = std::move(other.config_);
    clock_ = std::move(other.clock_);
    records_ = std::move(other.records_);
    participants_ = std::move(other.participants_);
    survey_counts_ = std::move(other.survey_counts_);
    downtime_ = std::move(other.downtime_);
    log_ = std::move(other.log_);
}

EventStore EventStore::open(StoreConfig config, Clock clock) {
    std::vector<StoreRecord> existing;
    if (config.log_path && std::filesystem::exists(*config.log_path)) {
        std::ifstream in(*config.log_path, std::ios::binary);
        if (!in) throw IngestError(IngestErrc::StoreUnavailable);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) existing.push_back(record_from_line(line));
        }
    }
    EventStore store(std::move(config), std::move(clock));
    for (auto& record : existing) store.apply(std::move(record));
    return store;
}

void EventStore::apply(StoreRecord record) {
    std::visit(overloaded{
                   [&](const UidRecord& r) { participants_.insert(r.uid); },
                   [&](const EventRecord&) {},
                   [&](const SurveyRecord& r) { ++survey_counts_[r.uid]; },
                   [&](const DowntimeRecord& r) { downtime_.push_back(r.window); },
               },
               record);
    records_.push_back(std::move(record));
}

Ack EventStore::append(StoreRecord record) {
    if (log_.is_open()) {
        log_ << record_to_line(record);
        log_.flush();
        if (!log_) throw IngestError(IngestErrc::StoreUnavailable);
    }
    apply(std::move(record));
    return Ack{records_.size()};
}

bool EventStore::in_downtime(Timestamp ts) const {
    for (const auto& window : downtime_) {
        if (window.contains(ts)) return true;
    }
    return false;
}

Uid EventStore::allocate_uid(std::string_view client_entropy, std::optional<Timestamp> ts,
                             std::optional<std::string_view> presented_uid) {
    std::lock_guard lock(mutex_);
    if (presented_uid) {
        if (auto uid = Uid::parse(*presented_uid); uid && participants_.contains(*uid)) return *uid;
    }
    const bool raw_mode = !config_.salt && !ts;
    if (client_entropy.empty() && !raw_mode) {
        throw IngestError(IngestErrc::InvalidArgument, "entropy");
    }
    for (int attempt = 0; attempt <= kMaxRegenerations; ++attempt) {
        Uid candidate = derive_uid(client_entropy, ts, config_.salt, attempt);
        if (participants_.contains(candidate)) continue;
        append(UidRecord{next_seq(), candidate});
        return candidate;
    }
    throw IngestError(IngestErrc::CollisionRetryExhausted);
}

Ack EventStore::import_uid(const Uid& uid) {
    std::lock_guard lock(mutex_);
    if (participants_.contains(uid)) return Ack{0};
    return append(UidRecord{next_seq(), uid});
}

Ack EventStore::submit_event(const AccessEvent& event) {
    const Timestamp now = clock_();
    validate_event(event, now);
    std::lock_guard lock(mutex_);
    if (!participants_.contains(event.uid)) throw IngestError(IngestErrc::UnknownUid);
    if (in_downtime(event.ts)) throw IngestError(IngestErrc::DowntimeRejected);
    return append(EventRecord{next_seq(), now, event});
}

Ack EventStore::submit_survey(std::string_view payload) {
    const auto parsed = nlohmann::json::parse(payload, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw IngestError(IngestErrc::MalformedSurvey, "payload");
    }
    const auto uid_it = parsed.find("uid");
    if (uid_it == parsed.end() || !uid_it->is_string()) {
        throw IngestError(IngestErrc::MalformedSurvey, "uid");
    }
    const auto uid = Uid::parse(uid_it->get_ref<const std::string&>());
    if (!uid) throw IngestError(IngestErrc::MalformedSurvey, "uid");

    const Timestamp now = clock_();
    std::lock_guard lock(mutex_);
    if (!participants_.contains(*uid)) throw IngestError(IngestErrc::UnknownUid);
    if (in_downtime(now)) throw IngestError(IngestErrc::DowntimeRejected);
    const int wave = survey_counts_.contains(*uid) ? survey_counts_.at(*uid) : 0;
    return append(SurveyRecord{next_seq(), *uid, now, wave, std::string{payload}});
}

Ack EventStore::register_downtime(TimeWindow window) {
    if (!(window.start < window.end)) throw IngestError(IngestErrc::InvalidArgument, "window");
    std::lock_guard lock(mutex_);
    for (const auto& existing : downtime_) {
        if (existing.overlaps(window)) throw IngestError(IngestErrc::OverlapsExisting);
    }
    for (const auto& record : records_) {
        if (const auto* ev = std::get_if<EventRecord>(&record); ev && window.contains(ev->event.ts)) {
            throw IngestError(IngestErrc::ConflictsWithEvents);
        }
    }
    return append(DowntimeRecord{next_seq(), window});
}

bool EventStore::is_registered(const Uid& uid) const {
    std::lock_guard lock(mutex_);
    return participants_.contains(uid);
}

std::size_t EventStore::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

StoreSnapshot EventStore::snapshot() const {
    std::lock_guard lock(mutex_);
    StoreSnapshot snap;
    for (const auto& record : records_) {
        std::visit(overloaded{
                       [&](const UidRecord& r) { snap.participants.push_back(r.uid); },
                       [&](const EventRecord& r) { snap.events.push_back(r); },
                       [&](const SurveyRecord& r) { snap.surveys.push_back(r); },
                       [&](const DowntimeRecord& r) { snap.downtime.push_back(r.window); },
                   },
                   record);
    }
    return snap;
}

std::string EventStore::serialize() const {
    std::lock_guard lock(mutex_);
    std::string out;
    for (const auto& record : records_) out += record_to_line(record);
    return out;
}

std::set<Uid> eligible_participants(const StoreSnapshot& snapshot, UtcOffset offset, int min_days) {
    std::unordered_map<Uid, std::set<std::chrono::local_days>> days;
    for (const auto& record : snapshot.events) {
        days[record.event.uid].insert(local_day(record.event.ts, offset));
    }
    std::set<Uid> eligible;
    for (const auto& [uid, distinct] : days) {
        if (static_cast<int>(distinct.size()) >= min_days) eligible.insert(uid);
    }
    return eligible;
}

}  // namespace scholartrace::ingest
