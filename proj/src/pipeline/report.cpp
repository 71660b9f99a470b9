#include "scholartrace/pipeline/report.hpp"

#include <cstdio>
#include <sstream>

namespace nlohmann {

template <typename T>
struct adl_serializer<std::optional<T>> {
    static void to_json(json& j, const std::optional<T>& value) {
        if (value) j = *value;
        else j = nullptr;
    }
    static void from_json(const json& j, std::optional<T>& value) {
        if (j.is_null()) value.reset();
        else value = j.get<T>();
    }
};

}  // namespace nlohmann

namespace scholartrace::pipeline {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Funnel, recruited, excluded_short, eligible, surveyed, survey_rejected, analyzed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(IngestSummary, events_read, events_accepted, event_rejections, surveys_read,
                                   surveys_accepted, survey_rejections)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Stat, n, mean, sd)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LabelRow, uid, ip, flagged_at)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GeoSummary, events_resolved, events_unresolved, events_flagged, labels,
                                   real_countries, browsers, operating_systems)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SeriesSummary, buckets, observed, missing, imputed, unresolved, imputed_mass)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BehaviorSummary, participants, night_owls, night_fraction, weekend_fraction,
                                   active_days, sessions, field_shares, field_coverage, hourly)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SurveySummary, rejections, pss_total, jss_total, role_conflict_total,
                                   role_ambiguity_total, family_support_mean, alpha)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RiskSummary, model, scored, failed, risk)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TestRow, name, status, statistic, df, p_value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ModelRow, name, status, n_train, n_test, train_accuracy, test_accuracy,
                                   iterations, converged)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterRow, size, center)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterSummary, status, features, iterations, converged, objective, clusters)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PipelineReport, funnel, ingest, geo, behavior, surveys, risk, tests, models,
                                   clusters)

nlohmann::json report_to_json(const PipelineReport& report) { return report; }

PipelineReport report_from_json(const nlohmann::json& doc) { return doc.get<PipelineReport>(); }

namespace {

std::string fixed(double x, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

class TextWriter {
public:
    void section(const std::string& title) { out_ << title << '\n'; }
    void row(const std::string& label, const std::string& value) {
        out_ << "  " << label;
        for (std::size_t i = label.size(); i < 34; ++i) out_ << ' ';
        out_ << ' ' << value << '\n';
    }
    void row(const std::string& label, std::size_t value) { row(label, std::to_string(value)); }
    void stat(const std::string& label, const std::optional<Stat>& s) {
        if (!s) row(label, "n/a");
        else row(label, "n=" + std::to_string(s->n) + " mean=" + fixed(s->mean) + " sd=" + fixed(s->sd));
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string render_text(const PipelineReport& r) {
    TextWriter w;
    w.section("participants");
    w.row("recruited", r.funnel.recruited);
    w.row("excluded (<7 active days)", r.funnel.excluded_short);
    w.row("eligible", r.funnel.eligible);
    w.row("surveyed", r.funnel.surveyed);
    w.row("survey rejected", r.funnel.survey_rejected);
    w.row("analyzed", r.funnel.analyzed);

    w.section("ingest");
    w.row("events read", r.ingest.events_read);
    w.row("events accepted", r.ingest.events_accepted);
    for (const auto& [code, n] : r.ingest.event_rejections) w.row("events rejected " + code, n);
    w.row("surveys read", r.ingest.surveys_read);
    w.row("surveys accepted", r.ingest.surveys_accepted);
    for (const auto& [code, n] : r.ingest.survey_rejections) w.row("surveys rejected " + code, n);

    w.section("geo");
    w.row("events resolved", r.geo.events_resolved);
    w.row("events unresolved", r.geo.events_unresolved);
    w.row("events via anonymous ips", r.geo.events_flagged);
    w.row("anonymous ip labels", r.geo.labels.size());
    for (const auto& [country, n] : r.geo.real_countries) w.row("events in " + country, n);
    for (const auto& [browser, n] : r.geo.browsers) w.row("browser " + browser, n);
    for (const auto& [os, n] : r.geo.operating_systems) w.row("os " + os, n);

    w.section("behavior");
    w.row("participants", r.behavior.participants);
    w.row("night owls", r.behavior.night_owls);
    w.stat("night fraction", r.behavior.night_fraction);
    w.stat("weekend fraction", r.behavior.weekend_fraction);
    w.stat("active days", r.behavior.active_days);
    w.stat("sessions", r.behavior.sessions);
    w.row("field coverage", fixed(r.behavior.field_coverage));
    for (const auto& [field, share] : r.behavior.field_shares) w.row("field " + field, fixed(share));
    w.row("hourly buckets", r.behavior.hourly.buckets);
    w.row("hourly observed", r.behavior.hourly.observed);
    w.row("hourly missing", r.behavior.hourly.missing);
    w.row("hourly imputed", r.behavior.hourly.imputed);
    w.row("hourly unresolved", r.behavior.hourly.unresolved);
    w.row("imputed events", fixed(r.behavior.hourly.imputed_mass));

    w.section("surveys");
    for (const auto& [reason, n] : r.surveys.rejections) w.row("rejected " + reason, n);
    w.stat("pss total", r.surveys.pss_total);
    w.stat("jss total", r.surveys.jss_total);
    w.stat("role conflict total", r.surveys.role_conflict_total);
    w.stat("role ambiguity total", r.surveys.role_ambiguity_total);
    w.stat("family support mean", r.surveys.family_support_mean);
    for (const auto& [scale, a] : r.surveys.alpha) w.row("alpha " + scale, a ? fixed(*a) : "n/a");

    w.section("risk");
    w.row("model", r.risk.model);
    w.row("scored", r.risk.scored);
    w.row("failed", r.risk.failed);
    w.stat("risk", r.risk.risk);

    w.section("tests");
    for (const auto& t : r.tests) {
        if (t.status != "ok") w.row(t.name, t.status);
        else w.row(t.name, "stat=" + fixed(t.statistic) + " df=" + fixed(t.df) + " p=" + fixed(t.p_value));
    }

    w.section("models");
    for (const auto& m : r.models) {
        if (m.status != "ok") {
            w.row(m.name, m.status);
            continue;
        }
        w.row(m.name, "train=" + std::to_string(m.n_train) + " test=" + std::to_string(m.n_test) +
                          " acc_train=" + fixed(m.train_accuracy) + " acc_test=" + fixed(m.test_accuracy) +
                          " iter=" + std::to_string(m.iterations) + (m.converged ? " converged" : " not converged"));
    }

    w.section("clusters");
    w.row("status", r.clusters.status);
    if (r.clusters.status == "ok") {
        std::string features;
        for (const auto& f : r.clusters.features) features += (features.empty() ? "" : ",") + f;
        w.row("features", features);
        w.row("iterations", std::to_string(r.clusters.iterations));
        w.row("objective", fixed(r.clusters.objective));
        for (std::size_t i = 0; i < r.clusters.clusters.size(); ++i) {
            const auto& c = r.clusters.clusters[i];
            std::string center;
            for (const double v : c.center) center += (center.empty() ? "" : ",") + fixed(v);
            w.row("cluster " + std::to_string(i), "size=" + std::to_string(c.size) + " center=" + center);
        }
    }
    return w.str();
}

}  // namespace

std::string report_render(const PipelineReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return report_to_json(report).dump(2) + "\n";
    return render_text(report);
}

}  // namespace scholartrace::pipeline
