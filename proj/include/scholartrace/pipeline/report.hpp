#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace scholartrace::pipeline {

/// Participant counts at each reporting stage. Non-increasing from recruited to analyzed.
struct Funnel {
    std::size_t recruited = 0;
    std::size_t excluded_short = 0;  ///< fewer than the minimum active days
    std::size_t eligible = 0;
    std::size_t surveyed = 0;
    std::size_t survey_rejected = 0;  ///< no valid survey wave
    std::size_t analyzed = 0;
    friend bool operator==(const Funnel&, const Funnel&) = default;
};

struct IngestSummary {
    std::size_t events_read = 0;
    std::size_t events_accepted = 0;
    std::map<std::string, std::size_t> event_rejections;  ///< by error code
    std::size_t surveys_read = 0;
    std::size_t surveys_accepted = 0;
    std::map<std::string, std::size_t> survey_rejections;
    friend bool operator==(const IngestSummary&, const IngestSummary&) = default;
};

struct Stat {
    std::size_t n = 0;
    double mean = 0;
    double sd = 0;
    friend bool operator==(const Stat&, const Stat&) = default;
};

struct LabelRow {
    std::string uid;
    std::string ip;
    std::string flagged_at;
    friend bool operator==(const LabelRow&, const LabelRow&) = default;
};

struct GeoSummary {
    std::size_t events_resolved = 0;
    std::size_t events_unresolved = 0;
    std::size_t events_flagged = 0;
    std::vector<LabelRow> labels;  ///< sorted by uid, then flagged_at
    std::map<std::string, std::size_t> real_countries;  ///< events by reassigned country
    std::map<std::string, std::size_t> browsers;        ///< participants by most used browser
    std::map<std::string, std::size_t> operating_systems;
    friend bool operator==(const GeoSummary&, const GeoSummary&) = default;
};

struct SeriesSummary {
    std::size_t buckets = 0;
    std::size_t observed = 0;
    std::size_t missing = 0;
    std::size_t imputed = 0;
    std::size_t unresolved = 0;
    double imputed_mass = 0;
    friend bool operator==(const SeriesSummary&, const SeriesSummary&) = default;
};

struct BehaviorSummary {
    std::size_t participants = 0;
    std::size_t night_owls = 0;
    std::optional<Stat> night_fraction;
    std::optional<Stat> weekend_fraction;
    std::optional<Stat> active_days;
    std::optional<Stat> sessions;
    std::map<std::string, double> field_shares;
    double field_coverage = 0;
    SeriesSummary hourly;
    friend bool operator==(const BehaviorSummary&, const BehaviorSummary&) = default;
};

struct SurveySummary {
    std::map<std::string, std::size_t> rejections;  ///< "Reason:field"
    std::optional<Stat> pss_total;
    std::optional<Stat> jss_total;
    std::optional<Stat> role_conflict_total;
    std::optional<Stat> role_ambiguity_total;
    std::optional<Stat> family_support_mean;
    std::map<std::string, std::optional<double>> alpha;  ///< per instrument
    friend bool operator==(const SurveySummary&, const SurveySummary&) = default;
};

struct RiskSummary {
    std::string model;
    std::size_t scored = 0;
    std::size_t failed = 0;
    std::optional<Stat> risk;
    friend bool operator==(const RiskSummary&, const RiskSummary&) = default;
};

/// `status` is "ok" or the analytics error code that prevented the test.
struct TestRow {
    std::string name;
    std::string status;
    double statistic = 0;
    double df = 0;
    double p_value = 0;
    friend bool operator==(const TestRow&, const TestRow&) = default;
};

struct ModelRow {
    std::string name;
    std::string status;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double train_accuracy = 0;
    double test_accuracy = 0;
    int iterations = 0;
    bool converged = false;
    friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

struct ClusterRow {
    std::size_t size = 0;  ///< participants whose highest membership is this cluster
    std::vector<double> center;
    friend bool operator==(const ClusterRow&, const ClusterRow&) = default;
};

struct ClusterSummary {
    std::string status;
    std::vector<std::string> features;
    int iterations = 0;
    bool converged = false;
    double objective = 0;
    std::vector<ClusterRow> clusters;  ///< sorted by center
    friend bool operator==(const ClusterSummary&, const ClusterSummary&) = default;
};

struct PipelineReport {
    Funnel funnel;
    IngestSummary ingest;
    GeoSummary geo;
    BehaviorSummary behavior;
    SurveySummary surveys;
    RiskSummary risk;
    std::vector<TestRow> tests;
    std::vector<ModelRow> models;
    ClusterSummary clusters;
    friend bool operator==(const PipelineReport&, const PipelineReport&) = default;
};

enum class ReportFormat { Json, Text };

/// JSON keys are sorted; reals use the shortest round-trip form.
/// Text uses fixed four-decimal reals.
std::string report_render(const PipelineReport& report, ReportFormat format);
PipelineReport report_from_json(const nlohmann::json& doc);
nlohmann::json report_to_json(const PipelineReport& report);

}  // namespace scholartrace::pipeline
