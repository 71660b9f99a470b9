#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/access_event.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::pipeline {

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Offset from the cohort start, in whole hours.
struct DowntimeSpec {
    int offset_hours = 0;
    int duration_hours = 0;
    friend bool operator==(const DowntimeSpec&, const DowntimeSpec&) = default;
};

/// Parameters of a synthetic cohort. Shares are probabilities per participant.
struct CohortSpec {
    std::uint64_t seed = 42;
    int n_participants = 200;
    int days = 30;
    std::string start_date = "2019-10-07";  ///< local calendar date of day 0
    double night_owl_share = 0.3;
    double weekend_share = 0.3;
    double vpn_share = 0.2;
    double short_user_share = 0.1;  ///< active on fewer than seven days
    double travel_share = 0.15;
    double survey_completion_rate = 0.85;
    double survey_error_rate = 0.08;
    double unmapped_ip_share = 0.02;
    std::vector<DowntimeSpec> downtime{{10 * 24 + 2, 4}};

    /// Throws SpecError on a share outside [0, 1], a non-positive size, a bad
    /// date or a downtime window leaving the study period.
    void validate() const;
    Timestamp start() const;  ///< local midnight of day 0 as UTC
    std::vector<TimeWindow> downtime_windows() const;

    friend bool operator==(const CohortSpec&, const CohortSpec&) = default;
};

/// Missing keys keep their defaults; unknown keys and a missing "seed" are a SpecError.
CohortSpec spec_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const CohortSpec& spec);

/// Persona membership is the cluster truth: index = night_owl + 2·weekend_worker.
struct ParticipantTruth {
    ingest::Uid uid;
    bool night_owl = false;
    bool weekend_worker = false;
    bool short_user = false;
    bool vpn_user = false;
    bool traveler = false;
    std::string home_city;
    int active_days = 0;
    bool eligible = false;
    bool survey_submitted = false;
    bool survey_valid = false;
    int persona() const { return (night_owl ? 1 : 0) + (weekend_worker ? 2 : 0); }
};

struct VpnTruth {
    ingest::Uid uid;
    std::string ip;
    friend auto operator<=>(const VpnTruth&, const VpnTruth&) = default;
};

struct FunnelTruth {
    std::size_t recruited = 0;
    std::size_t excluded_short = 0;
    std::size_t eligible = 0;
    std::size_t surveyed = 0;
    std::size_t survey_rejected = 0;
    std::size_t analyzed = 0;
};

struct SurveySubmission {
    Timestamp received;
    std::string payload;
};

struct GeoRow {
    std::string ip;
    std::string country;
    std::string city;
    double lat = 0;
    double lon = 0;
};

struct Simulation {
    CohortSpec spec;
    std::vector<ingest::Uid> participants;      ///< sorted
    std::vector<ingest::AccessEvent> events;    ///< sorted by ts, then uid
    std::vector<SurveySubmission> surveys;      ///< sorted by received, then payload
    std::vector<GeoRow> geo;                    ///< sorted by ip
    std::vector<ParticipantTruth> truth;        ///< sorted by uid
    std::vector<VpnTruth> vpn_ips;              ///< sorted
    FunnelTruth funnel;
};

/// Needs the PMID → field table contents to draw realistic PMIDs.
Simulation simulate(const CohortSpec& spec, const std::vector<std::pair<std::uint32_t, std::string>>& fields);

std::vector<std::pair<std::uint32_t, std::string>> read_field_rows(const std::filesystem::path& csv);

nlohmann::ordered_json sidecar_json(const Simulation& sim);
std::string events_ndjson(const Simulation& sim);
/// One line per submission: {"received": iso8601, "payload": {...}}.
std::string surveys_ndjson(const Simulation& sim);
std::string geo_csv(const Simulation& sim);
std::string participants_txt(const Simulation& sim);

/// Writes events.ndjson, surveys.ndjson, participants.txt, geo.csv,
/// resolver.json, sidecar.json, fields.csv, risk_model.json and pipeline.json.
void write_simulation(const Simulation& sim, const std::filesystem::path& out_dir,
                      const std::filesystem::path& field_table, const std::filesystem::path& risk_model);

}  // namespace scholartrace::pipeline
