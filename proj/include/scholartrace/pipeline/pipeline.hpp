#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scholartrace/behavior/schedule.hpp"
#include "scholartrace/behavior/sessions.hpp"
#include "scholartrace/common/time.hpp"
#include "scholartrace/geo/anonymity.hpp"
#include "scholartrace/ingest/event_store.hpp"
#include "scholartrace/pipeline/report.hpp"
#include "scholartrace/psychometrics/scoring.hpp"

namespace scholartrace::pipeline {

/// Failure inside one pipeline stage ("config", "ingest", "geo", "behavior",
/// "psychometrics", "risk" or "analytics").
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& detail);
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct AnalysisOptions {
    std::uint64_t seed = 42;
    double night_owl_threshold = 0.25;  ///< night fraction at or above which a participant counts as a night owl
    int fcm_clusters = 4;
    int knn_k = 5;
    double svm_c = 1.0;
    double logit_l2 = 0.01;
    double test_fraction = 0.3;
};

/// Relative paths are resolved against the directory of the config file.
struct PipelineConfig {
    std::filesystem::path participants = "participants.txt";
    std::filesystem::path events = "events.ndjson";
    std::filesystem::path surveys = "surveys.ndjson";
    std::filesystem::path resolver = "resolver.json";
    std::filesystem::path field_table = "fields.csv";
    std::filesystem::path risk_model = "risk_model.json";
    std::vector<TimeWindow> downtime;
    UtcOffset offset = UtcOffset::china();
    int min_active_days = 7;
    Seconds session_gap = behavior::kDefaultSessionGap;
    behavior::NightWindow night;
    double max_speed_kmh = geo::kSpeedOfSoundKmh;
    Seconds bucket_width{3600};
    psychometrics::ScoringConfig scoring;
    AnalysisOptions analysis;
};

/// Missing keys keep their defaults; unknown keys are rejected. Throws PipelineError("config").
PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
/// Paths are written as stored.
nlohmann::ordered_json to_json(const PipelineConfig& config);

/// Raw log contents: participant UIDs one per line, event wire lines, and
/// survey lines of the form {"received": iso8601, "payload": {...}}.
struct PipelineLogs {
    std::string participants;
    std::string events;
    std::string surveys;
};

PipelineLogs load_logs(const PipelineConfig& config);

/// Per-participant derived features, one JSON line each.
struct ParticipantFeatures {
    ingest::Uid uid;
    bool eligible = false;
    behavior::ScheduleFeatures schedule;
    std::size_t sessions = 0;
    std::size_t anonymous_ips = 0;
    std::optional<std::string> dominant_field;
    double field_coverage = 0;
    std::optional<psychometrics::ScoredWave> scores;
    std::optional<double> risk;
    std::optional<int> cluster;
};

nlohmann::ordered_json to_json(const ParticipantFeatures& f);

struct ScoredSurvey {
    psychometrics::SurveyWave wave;
    psychometrics::ScoredWave scores;
};

struct PipelineRun {
    PipelineReport report;
    std::vector<ParticipantFeatures> features;  ///< sorted by uid
    std::vector<ScoredSurvey> scored;           ///< every valid wave of analyzed participants, by uid then arrival
};

/// Scored-survey CSV: header then one row per (uid, wave).
void write_scored_csv(std::ostream& out, const std::vector<ScoredSurvey>& rows);

/// Replays the logs into a memory-only store whose clock follows each record,
/// then analyzes the snapshot. Record-level rejections are counted, not thrown.
PipelineRun run_pipeline_detailed(const PipelineLogs& logs, const PipelineConfig& config);
PipelineReport run_pipeline(const PipelineLogs& logs, const PipelineConfig& config);

/// Replays logs into an existing store and returns the intake counts.
IngestSummary replay_logs(const PipelineLogs& logs, const std::vector<TimeWindow>& downtime,
                          ingest::EventStore& store, Timestamp& clock);

/// Stages geo through analytics over a store snapshot.
PipelineRun analyze_snapshot(const ingest::StoreSnapshot& snapshot, const PipelineConfig& config,
                             IngestSummary ingest = {});

}  // namespace scholartrace::pipeline
