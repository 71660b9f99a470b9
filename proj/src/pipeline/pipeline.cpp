#include "scholartrace/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <Eigen/Core>

#include "scholartrace/analytics/describe.hpp"
#include "scholartrace/analytics/errors.hpp"
#include "scholartrace/analytics/fcm.hpp"
#include "scholartrace/analytics/hypothesis.hpp"
#include "scholartrace/analytics/knn.hpp"
#include "scholartrace/analytics/logit.hpp"
#include "scholartrace/analytics/matrix_io.hpp"
#include "scholartrace/analytics/svm.hpp"
#include "scholartrace/behavior/fields.hpp"
#include "scholartrace/behavior/timeseries.hpp"
#include "scholartrace/geo/resolver.hpp"
#include "scholartrace/geo/user_agent.hpp"
#include "scholartrace/ingest/errors.hpp"
#include "scholartrace/psychometrics/reliability.hpp"
#include "scholartrace/risk/risk_model.hpp"

namespace scholartrace::pipeline {

PipelineError::PipelineError(std::string stage, const std::string& detail)
    : std::runtime_error(stage + ": " + detail), stage_(std::move(stage)) {}

namespace {

template <typename F>
auto in_stage(const char* stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(stage, e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
        start = end + 1;
    }
    return out;
}

std::optional<Stat> summarize(const std::vector<double>& xs) {
    if (xs.size() < 2) return std::nullopt;
    const Eigen::Map<const Eigen::VectorXd> v(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const auto d = analytics::describe(v);
    return Stat{static_cast<std::size_t>(d.n), d.mean, d.sd};
}

std::string status_of(const std::exception& e) {
    if (const auto* a = dynamic_cast<const analytics::AnalyticsError*>(&e)) return analytics::to_string(a->code());
    return e.what();
}

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    return in_stage("config", [&] {
        if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");
        static const std::set<std::string> known{
            "participants", "events", "surveys", "resolver", "field_table", "risk_model", "downtime",
            "utc_offset_minutes", "min_active_days", "session_gap_seconds", "night_start_hour", "night_end_hour",
            "max_speed_kmh", "bucket_width_seconds", "scoring", "analysis"};
        for (const auto& [key, _] : doc.items()) {
            if (!known.contains(key)) throw std::runtime_error("unknown config key " + key);
        }
        PipelineConfig c;
        const auto path_of = [&](const char* key, const std::filesystem::path& fallback) {
            return resolve(base_dir, doc.contains(key) ? std::filesystem::path(doc.at(key).get<std::string>()) : fallback);
        };
        c.participants = path_of("participants", c.participants);
        c.events = path_of("events", c.events);
        c.surveys = path_of("surveys", c.surveys);
        c.resolver = path_of("resolver", c.resolver);
        c.field_table = path_of("field_table", c.field_table);
        c.risk_model = path_of("risk_model", c.risk_model);
        for (const auto& w : doc.value("downtime", nlohmann::json::array())) {
            const auto start = parse_iso8601(w.at("start").get<std::string>());
            const auto end = parse_iso8601(w.at("end").get<std::string>());
            if (!start || !end || !(*start < *end)) throw std::runtime_error("malformed downtime window");
            c.downtime.push_back({*start, *end});
        }
        c.offset.minutes = std::chrono::minutes(doc.value("utc_offset_minutes", 8 * 60));
        c.min_active_days = doc.value("min_active_days", c.min_active_days);
        c.session_gap = Seconds(doc.value("session_gap_seconds", c.session_gap.count()));
        c.night.start_hour = doc.value("night_start_hour", c.night.start_hour);
        c.night.end_hour = doc.value("night_end_hour", c.night.end_hour);
        c.max_speed_kmh = doc.value("max_speed_kmh", c.max_speed_kmh);
        c.bucket_width = Seconds(doc.value("bucket_width_seconds", c.bucket_width.count()));
        if (doc.contains("scoring")) {
            const auto& s = doc.at("scoring");
            c.scoring.pss_reverse = s.value("pss_reverse", c.scoring.pss_reverse);
            c.scoring.reverse_role_ambiguity = s.value("reverse_role_ambiguity", c.scoring.reverse_role_ambiguity);
        }
        if (doc.contains("analysis")) {
            const auto& a = doc.at("analysis");
            auto& o = c.analysis;
            o.seed = a.value("seed", o.seed);
            o.night_owl_threshold = a.value("night_owl_threshold", o.night_owl_threshold);
            o.fcm_clusters = a.value("fcm_clusters", o.fcm_clusters);
            o.knn_k = a.value("knn_k", o.knn_k);
            o.svm_c = a.value("svm_c", o.svm_c);
            o.logit_l2 = a.value("logit_l2", o.logit_l2);
            o.test_fraction = a.value("test_fraction", o.test_fraction);
        }
        if (c.min_active_days < 1) throw std::runtime_error("min_active_days must be positive");
        if (c.session_gap.count() <= 0) throw std::runtime_error("session_gap_seconds must be positive");
        if (!(c.max_speed_kmh > 0)) throw std::runtime_error("max_speed_kmh must be positive");
        if (!(c.analysis.test_fraction > 0 && c.analysis.test_fraction < 1)) {
            throw std::runtime_error("test_fraction must lie in (0, 1)");
        }
        return c;
    });
}

PipelineConfig load_config(const std::filesystem::path& path) {
    const auto doc = in_stage("config", [&] { return nlohmann::json::parse(read_file(path)); });
    return config_from_json(doc, path.parent_path());
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["participants"] = c.participants.string();
    j["events"] = c.events.string();
    j["surveys"] = c.surveys.string();
    j["resolver"] = c.resolver.string();
    j["field_table"] = c.field_table.string();
    j["risk_model"] = c.risk_model.string();
    j["downtime"] = nlohmann::ordered_json::array();
    for (const auto& w : c.downtime) {
        j["downtime"].push_back({{"start", format_iso8601(w.start)}, {"end", format_iso8601(w.end)}});
    }
    j["utc_offset_minutes"] = c.offset.minutes.count();
    j["min_active_days"] = c.min_active_days;
    j["session_gap_seconds"] = c.session_gap.count();
    j["night_start_hour"] = c.night.start_hour;
    j["night_end_hour"] = c.night.end_hour;
    j["max_speed_kmh"] = c.max_speed_kmh;
    j["bucket_width_seconds"] = c.bucket_width.count();
    j["scoring"] = {{"pss_reverse", c.scoring.pss_reverse},
                    {"reverse_role_ambiguity", c.scoring.reverse_role_ambiguity}};
    const auto& a = c.analysis;
    j["analysis"] = {{"seed", a.seed},         {"night_owl_threshold", a.night_owl_threshold},
                     {"fcm_clusters", a.fcm_clusters}, {"knn_k", a.knn_k},
                     {"svm_c", a.svm_c},       {"logit_l2", a.logit_l2},
                     {"test_fraction", a.test_fraction}};
    return j;
}

PipelineLogs load_logs(const PipelineConfig& config) {
    return in_stage("ingest", [&] {
        return PipelineLogs{read_file(config.participants), read_file(config.events), read_file(config.surveys)};
    });
}

nlohmann::ordered_json to_json(const ParticipantFeatures& f) {
    nlohmann::ordered_json j;
    j["uid"] = f.uid.str();
    j["eligible"] = f.eligible;
    j["events"] = f.schedule.events_total;
    j["active_days"] = f.schedule.active_days;
    j["night_fraction"] = f.schedule.night_fraction;
    j["weekend_fraction"] = f.schedule.weekend_fraction;
    j["sessions"] = f.sessions;
    j["anonymous_ips"] = f.anonymous_ips;
    j["dominant_field"] = f.dominant_field ? nlohmann::ordered_json(*f.dominant_field) : nullptr;
    j["field_coverage"] = f.field_coverage;
    if (f.scores) {
        j["pss_total"] = f.scores->pss_total;
        j["jss_total"] = f.scores->jss_total;
        j["role_conflict_total"] = f.scores->role_conflict_total;
        j["role_ambiguity_total"] = f.scores->role_ambiguity_total;
        j["family_support_total"] = f.scores->family_support_total;
        j["family_support_mean"] = f.scores->family_support_mean;
    }
    j["risk"] = f.risk ? nlohmann::ordered_json(*f.risk) : nullptr;
    j["cluster"] = f.cluster ? nlohmann::ordered_json(*f.cluster) : nullptr;
    return j;
}

void write_scored_csv(std::ostream& out, const std::vector<ScoredSurvey>& rows) {
    psychometrics::write_scored_header(out);
    for (const auto& r : rows) psychometrics::write_scored_row(out, r.wave, r.scores);
}

IngestSummary replay_logs(const PipelineLogs& logs, const std::vector<TimeWindow>& downtime,
                          ingest::EventStore& store, Timestamp& clock) {
    return in_stage("ingest", [&] {
        IngestSummary s;
        for (const auto& w : downtime) store.register_downtime(w);

        std::size_t line_no = 0;
        for (const auto line : lines_of(logs.participants)) {
            ++line_no;
            const auto uid = ingest::Uid::parse(line);
            if (!uid) throw std::runtime_error("participants line " + std::to_string(line_no) + " is not a UID");
            store.import_uid(*uid);
        }

        for (const auto line : lines_of(logs.events)) {
            ++s.events_read;
            try {
                const auto event = ingest::event_from_line(line);
                clock = event.ts;
                store.submit_event(event);
                ++s.events_accepted;
            } catch (const ingest::IngestError& e) {
                ++s.event_rejections[ingest::to_string(e.code())];
            }
        }

        for (const auto line : lines_of(logs.surveys)) {
            ++s.surveys_read;
            const auto doc = nlohmann::json::parse(line, nullptr, false);
            std::optional<Timestamp> received;
            if (doc.is_object() && doc.contains("received") && doc["received"].is_string()) {
                received = parse_iso8601(doc["received"].get<std::string>());
            }
            if (!received || !doc.contains("payload")) {
                ++s.survey_rejections[ingest::to_string(ingest::IngestErrc::MalformedSurvey)];
                continue;
            }
            try {
                clock = *received;
                store.submit_survey(doc["payload"].dump());
                ++s.surveys_accepted;
            } catch (const ingest::IngestError& e) {
                ++s.survey_rejections[ingest::to_string(e.code())];
            }
        }
        return s;
    });
}

PipelineRun analyze_snapshot(const ingest::StoreSnapshot& snapshot, const PipelineConfig& config,
                             IngestSummary ingest_summary) {
    PipelineRun run;
    PipelineReport& report = run.report;
    report.ingest = std::move(ingest_summary);

    // ingest: per-uid traces in (ts, seq) order and the funnel
    std::vector<ingest::Uid> uids = snapshot.participants;
    std::sort(uids.begin(), uids.end());
    std::unordered_map<ingest::Uid, std::vector<const ingest::EventRecord*>> traces;
    std::unordered_map<ingest::Uid, std::vector<const ingest::SurveyRecord*>> surveys;
    std::set<ingest::Uid> eligible;
    in_stage("ingest", [&] {
        for (const auto& e : snapshot.events) traces[e.event.uid].push_back(&e);
        for (auto& [_, trace] : traces) {
            std::stable_sort(trace.begin(), trace.end(), [](const auto* a, const auto* b) {
                return a->event.ts != b->event.ts ? a->event.ts < b->event.ts : a->seq < b->seq;
            });
        }
        for (const auto& s : snapshot.surveys) surveys[s.uid].push_back(&s);
        for (auto& [_, list] : surveys) {
            std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->seq < b->seq; });
        }
        eligible = ingest::eligible_participants(snapshot, config.offset, config.min_active_days);
        report.funnel.recruited = uids.size();
        report.funnel.eligible = eligible.size();
        report.funnel.excluded_short = uids.size() - eligible.size();
    });

    run.features.resize(uids.size());
    for (std::size_t i = 0; i < uids.size(); ++i) {
        run.features[i].uid = uids[i];
        run.features[i].eligible = eligible.contains(uids[i]);
    }
    const auto trace_of = [&](const ingest::Uid& uid) -> const std::vector<const ingest::EventRecord*>& {
        static const std::vector<const ingest::EventRecord*> empty;
        const auto it = traces.find(uid);
        return it == traces.end() ? empty : it->second;
    };

    // geo
    in_stage("geo", [&] {
        auto upstream = geo::make_resolver(config.resolver);
        geo::CachingResolver resolver(*upstream);
        std::unordered_map<std::string, geo::UAInfo> ua_cache;
        for (std::size_t i = 0; i < uids.size(); ++i) {
            const auto& trace = trace_of(uids[i]);
            std::vector<geo::LocatedEvent> located;
            located.reserve(trace.size());
            std::map<std::string, std::size_t> ua_counts;
            for (const auto* rec : trace) {
                located.push_back({rec->event.ts, rec->event.ip, geo::resolve_ip(rec->event.ip, resolver)});
                if (located.back().location) ++report.geo.events_resolved;
                else ++report.geo.events_unresolved;
                ++ua_counts[rec->event.ua];
            }
            const auto classified = geo::classify_anonymous(uids[i], std::span<const geo::LocatedEvent>(located),
                                                            config.max_speed_kmh);
            for (const auto& label : classified.labels) {
                report.geo.labels.push_back({label.scope.str(), label.ip, format_iso8601(label.flagged_at)});
            }
            run.features[i].anonymous_ips = classified.labels.size();
            for (const auto& r : geo::reassign_locations(classified.trace)) {
                if (r.annotated.flagged) ++report.geo.events_flagged;
                ++report.geo.real_countries[r.real_location ? r.real_location->country : "unknown"];
            }
            if (!ua_counts.empty()) {
                const auto top = std::max_element(ua_counts.begin(), ua_counts.end(),
                                                  [](const auto& a, const auto& b) { return a.second < b.second; });
                auto it = ua_cache.find(top->first);
                if (it == ua_cache.end()) it = ua_cache.emplace(top->first, geo::parse_user_agent(top->first)).first;
                ++report.geo.browsers[it->second.browser_family];
                ++report.geo.operating_systems[it->second.os_family];
            }
        }
    });

    // behavior: eligible participants only
    in_stage("behavior", [&] {
        const auto table = behavior::FieldTable::from_file(config.field_table);
        std::vector<double> night, weekend, days, sessions;
        std::map<std::string, double> pooled;
        std::size_t matched = 0, total_pmids = 0;
        std::vector<Timestamp> all_times;
        for (std::size_t i = 0; i < uids.size(); ++i) {
            if (!run.features[i].eligible) continue;
            auto& f = run.features[i];
            const auto& trace = trace_of(uids[i]);
            std::vector<Timestamp> times;
            std::vector<std::uint32_t> pmids;
            for (const auto* rec : trace) {
                times.push_back(rec->event.ts);
                if (rec->event.pmid) pmids.push_back(*rec->event.pmid);
            }
            all_times.insert(all_times.end(), times.begin(), times.end());
            f.schedule = behavior::schedule_features(uids[i], times, config.offset, config.night);
            f.sessions = behavior::sessionize(uids[i], times, config.session_gap).size();
            if (!pmids.empty()) {
                const auto dist = behavior::categorize_participant(pmids, table);
                f.field_coverage = dist.coverage();
                if (dist.matched > 0) {
                    const auto top = std::max_element(dist.shares.begin(), dist.shares.end(),
                                                      [](const auto& a, const auto& b) { return a.second < b.second; });
                    f.dominant_field = top->first;
                }
                for (const auto& [field, share] : dist.shares) pooled[field] += share * static_cast<double>(dist.matched);
                matched += dist.matched;
                total_pmids += dist.total;
            }
            ++report.behavior.participants;
            if (f.schedule.night_fraction >= config.analysis.night_owl_threshold) ++report.behavior.night_owls;
            night.push_back(f.schedule.night_fraction);
            weekend.push_back(f.schedule.weekend_fraction);
            days.push_back(static_cast<double>(f.schedule.active_days));
            sessions.push_back(static_cast<double>(f.sessions));
        }
        report.behavior.night_fraction = summarize(night);
        report.behavior.weekend_fraction = summarize(weekend);
        report.behavior.active_days = summarize(days);
        report.behavior.sessions = summarize(sessions);
        if (matched > 0) {
            for (const auto& [field, count] : pooled) report.behavior.field_shares[field] = count / static_cast<double>(matched);
        }
        report.behavior.field_coverage = total_pmids == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total_pmids);

        std::sort(all_times.begin(), all_times.end());
        const auto series = behavior::aggregate(all_times, config.bucket_width, snapshot.downtime);
        const auto imputed = behavior::impute_gaps(series);
        auto& h = report.behavior.hourly;
        h.buckets = series.size();
        for (std::size_t b = 0; b < series.size(); ++b) {
            if (series.state[b] == behavior::BucketState::Observed) ++h.observed;
            else if (series.state[b] == behavior::BucketState::Missing) ++h.missing;
            if (imputed.series.state[b] == behavior::BucketState::Imputed) {
                ++h.imputed;
                h.imputed_mass += imputed.series.values[b];
            }
        }
        h.unresolved = imputed.unresolved.size();
    });

    // psychometrics: first valid wave of each surveyed eligible participant
    std::vector<std::size_t> analyzed;  // indices into uids
    std::vector<psychometrics::SurveyWave> waves;
    in_stage("psychometrics", [&] {
        for (std::size_t i = 0; i < uids.size(); ++i) {
            if (!run.features[i].eligible) continue;
            const auto it = surveys.find(uids[i]);
            if (it == surveys.end()) continue;
            ++report.funnel.surveyed;
            std::optional<psychometrics::SurveyWave> chosen;
            for (const auto* rec : it->second) {
                auto result = psychometrics::validate_wave_text(rec->payload, rec->received);
                if (auto* wave = std::get_if<psychometrics::SurveyWave>(&result)) {
                    run.scored.push_back({*wave, psychometrics::score_wave(*wave, config.scoring)});
                    if (!chosen) chosen = std::move(*wave);
                    continue;
                }
                if (chosen) continue;
                const auto& rej = std::get<psychometrics::Rejection>(result);
                ++report.surveys.rejections[std::string(psychometrics::to_string(rej.reason)) + ":" + rej.field];
            }
            if (!chosen) {
                ++report.funnel.survey_rejected;
                continue;
            }
            run.features[i].scores = psychometrics::score_wave(*chosen, config.scoring);
            analyzed.push_back(i);
            waves.push_back(std::move(*chosen));
        }
        report.funnel.analyzed = analyzed.size();

        std::vector<double> pss, jss, rc, ra, fs;
        for (const auto i : analyzed) {
            const auto& s = *run.features[i].scores;
            pss.push_back(s.pss_total);
            jss.push_back(s.jss_total);
            rc.push_back(s.role_conflict_total);
            ra.push_back(s.role_ambiguity_total);
            fs.push_back(s.family_support_mean);
        }
        report.surveys.pss_total = summarize(pss);
        report.surveys.jss_total = summarize(jss);
        report.surveys.role_conflict_total = summarize(rc);
        report.surveys.role_ambiguity_total = summarize(ra);
        report.surveys.family_support_mean = summarize(fs);

        const auto n = static_cast<Eigen::Index>(waves.size());
        const std::set<int> reversed(config.scoring.pss_reverse.begin(), config.scoring.pss_reverse.end());
        const auto alpha_of = [&](const char* name, Eigen::Index k, auto item) {
            Eigen::MatrixXd m(n, k);
            for (Eigen::Index r = 0; r < n; ++r) {
                for (Eigen::Index c = 0; c < k; ++c) m(r, c) = item(waves[static_cast<std::size_t>(r)], c);
            }
            try {
                report.surveys.alpha[name] = psychometrics::cronbach_alpha(m);
            } catch (const std::exception&) {
                report.surveys.alpha[name] = std::nullopt;
            }
        };
        alpha_of("pss", psychometrics::kPssItems, [&](const auto& w, Eigen::Index c) {
            const int v = w.pss[static_cast<std::size_t>(c)];
            return double(reversed.contains(static_cast<int>(c) + 1) ? 4 - v : v);
        });
        alpha_of("jss", psychometrics::kJssItems,
                 [](const auto& w, Eigen::Index c) { return double(w.jss[static_cast<std::size_t>(c)]); });
        alpha_of("role_conflict", psychometrics::kRoleConflictItems,
                 [](const auto& w, Eigen::Index c) { return double(w.role_conflict[static_cast<std::size_t>(c)]); });
        alpha_of("role_ambiguity", psychometrics::kRoleAmbiguityItems, [&](const auto& w, Eigen::Index c) {
            const int v = w.role_ambiguity[static_cast<std::size_t>(c)];
            return double(config.scoring.reverse_role_ambiguity ? 6 - v : v);
        });
        alpha_of("family_support", psychometrics::kFamilySupportItems,
                 [](const auto& w, Eigen::Index c) { return double(w.family_support[static_cast<std::size_t>(c)]); });
    });

    // risk
    in_stage("risk", [&] {
        const auto model = risk::load_model_file(config.risk_model);
        report.risk.model = model.name;
        std::vector<double> risks;
        for (std::size_t a = 0; a < analyzed.size(); ++a) {
            try {
                const double r = risk::risk_score(risk::RiskProfile::from(waves[a].basic), model);
                run.features[analyzed[a]].risk = r;
                risks.push_back(r);
                ++report.risk.scored;
            } catch (const risk::RiskError&) {
                ++report.risk.failed;
            }
        }
        report.risk.risk = summarize(risks);
    });

    // analytics
    in_stage("analytics", [&] {
        const auto& opt = config.analysis;
        const auto n = static_cast<Eigen::Index>(analyzed.size());

        std::vector<double> pss_owl, pss_other;
        Eigen::Matrix2d smoker_table = Eigen::Matrix2d::Zero();
        for (std::size_t a = 0; a < analyzed.size(); ++a) {
            const auto& f = run.features[analyzed[a]];
            const bool owl = f.schedule.night_fraction >= opt.night_owl_threshold;
            (owl ? pss_owl : pss_other).push_back(f.scores->pss_total);
            smoker_table(owl ? 0 : 1, waves[a].basic.smoker ? 0 : 1) += 1;
        }
        const auto vec = [](const std::vector<double>& v) {
            return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        };
        const auto add_test = [&](const char* name, auto compute) {
            TestRow row{name, "ok", 0, 0, 0};
            try {
                const auto r = compute();
                row.statistic = r.statistic;
                row.df = r.df;
                row.p_value = r.p_value;
                if (!std::isfinite(row.statistic)) row = TestRow{name, "ZeroVariance", 0, 0, 0};
            } catch (const std::exception& e) {
                row.status = status_of(e);
            }
            report.tests.push_back(row);
        };
        add_test("pss_night_owl_vs_other_welch",
                 [&] { return analytics::t_test(vec(pss_owl), vec(pss_other), analytics::TTestKind::Welch); });
        add_test("pss_night_owl_vs_other_pooled",
                 [&] { return analytics::t_test(vec(pss_owl), vec(pss_other), analytics::TTestKind::Pooled); });
        add_test("smoker_by_night_owl_chi2", [&] { return analytics::chi_square(smoker_table, false); });
        add_test("smoker_by_night_owl_chi2_yates", [&] { return analytics::chi_square(smoker_table, true); });

        // schedule + survey features, standardized
        constexpr int kFeatures = 6;
        Eigen::MatrixXd X(n, kFeatures);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& f = run.features[analyzed[static_cast<std::size_t>(r)]];
            X(r, 0) = f.schedule.night_fraction;
            X(r, 1) = f.schedule.weekend_fraction;
            X(r, 2) = f.scores->jss_total;
            X(r, 3) = f.scores->role_conflict_total;
            X(r, 4) = f.scores->role_ambiguity_total;
            X(r, 5) = f.scores->family_support_mean;
        }
        if (n > 0) {
            const Eigen::RowVectorXd mean = X.colwise().mean();
            X.rowwise() -= mean;
            for (Eigen::Index c = 0; c < X.cols(); ++c) {
                const double sd = n > 1 ? std::sqrt(X.col(c).squaredNorm() / double(n - 1)) : 0.0;
                if (sd > 0) X.col(c) /= sd;
            }
        }

        // stress tertiles by rank, ties broken by uid order
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        for (Eigen::Index r = 0; r < n; ++r) order[static_cast<std::size_t>(r)] = r;
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return run.features[analyzed[static_cast<std::size_t>(a)]].scores->pss_total <
                   run.features[analyzed[static_cast<std::size_t>(b)]].scores->pss_total;
        });
        std::vector<int> tertile(static_cast<std::size_t>(n)), high(static_cast<std::size_t>(n));
        for (Eigen::Index rank = 0; rank < n; ++rank) {
            const auto r = static_cast<std::size_t>(order[static_cast<std::size_t>(rank)]);
            tertile[r] = static_cast<int>(3 * rank / n);
            high[r] = 2 * rank >= n ? 1 : -1;
        }

        const auto split = analytics::train_test_split(n, opt.test_fraction, opt.seed);
        const auto pick = [](const std::vector<int>& labels, const std::vector<Eigen::Index>& rows) {
            std::vector<int> out;
            for (const auto r : rows) out.push_back(labels[static_cast<std::size_t>(r)]);
            return out;
        };
        const Eigen::MatrixXd X_train = analytics::take_rows(X, split.train);
        const Eigen::MatrixXd X_test = analytics::take_rows(X, split.test);
        const auto accuracy = [](const std::vector<int>& truth, const std::vector<int>& predicted) {
            if (truth.empty()) return 0.0;
            std::size_t hits = 0;
            for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
            return static_cast<double>(hits) / static_cast<double>(truth.size());
        };
        const auto add_model = [&](const char* name, auto fit) {
            ModelRow row{name, "ok", split.train.size(), split.test.size(), 0, 0, 0, false};
            try {
                if (split.train.empty() || split.test.empty()) {
                    throw analytics::AnalyticsError(analytics::AnalyticsErrc::EmptyTrainingSet, "no data");
                }
                fit(row);
            } catch (const std::exception& e) {
                row = ModelRow{name, status_of(e), split.train.size(), split.test.size(), 0, 0, 0, false};
            }
            report.models.push_back(row);
        };

        add_model("logit_pss_tertile", [&](ModelRow& row) {
            const auto y_train = pick(tertile, split.train);
            analytics::LogitOptions lo;
            lo.l2 = opt.logit_l2;
            lo.seed = opt.seed;
            const auto model = analytics::fit_multinomial_logit(X_train, y_train, 3, lo);
            row.train_accuracy = accuracy(y_train, analytics::predict_class(model, X_train));
            row.test_accuracy = accuracy(pick(tertile, split.test), analytics::predict_class(model, X_test));
            row.iterations = model.iterations;
            row.converged = model.converged;
        });
        add_model("svm_high_pss", [&](ModelRow& row) {
            const auto y_train = pick(high, split.train);
            const auto model = analytics::svm_train(X_train, y_train, opt.svm_c);
            const auto predict = [&](const Eigen::MatrixXd& M) {
                std::vector<int> out;
                for (Eigen::Index r = 0; r < M.rows(); ++r) out.push_back(analytics::svm_predict(model, M.row(r).transpose()));
                return out;
            };
            row.train_accuracy = accuracy(y_train, predict(X_train));
            row.test_accuracy = accuracy(pick(high, split.test), predict(X_test));
            row.iterations = model.iterations;
            row.converged = model.converged;
        });
        add_model("knn_pss_tertile", [&](ModelRow& row) {
            const auto y_train = pick(tertile, split.train);
            const auto predict = [&](const Eigen::MatrixXd& M) {
                std::vector<int> out;
                for (Eigen::Index r = 0; r < M.rows(); ++r) {
                    out.push_back(analytics::knn_classify(X_train, y_train, opt.knn_k, M.row(r).transpose()));
                }
                return out;
            };
            row.train_accuracy = accuracy(y_train, predict(X_train));
            row.test_accuracy = accuracy(pick(tertile, split.test), predict(X_test));
            row.converged = true;
        });

        // behavioral clusters over every eligible participant
        auto& cs = report.clusters;
        cs.features = {"night_fraction", "weekend_fraction"};
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < uids.size(); ++i) {
            if (run.features[i].eligible) members.push_back(i);
        }
        Eigen::MatrixXd B(static_cast<Eigen::Index>(members.size()), 2);
        for (std::size_t m = 0; m < members.size(); ++m) {
            B(static_cast<Eigen::Index>(m), 0) = run.features[members[m]].schedule.night_fraction;
            B(static_cast<Eigen::Index>(m), 1) = run.features[members[m]].schedule.weekend_fraction;
        }
        try {
            analytics::FcmOptions fo;
            fo.seed = opt.seed;
            const auto result = analytics::fuzzy_cmeans(B, opt.fcm_clusters, fo);
            const auto c = result.centers.rows();
            std::vector<Eigen::Index> rank(static_cast<std::size_t>(c));
            for (Eigen::Index k = 0; k < c; ++k) rank[static_cast<std::size_t>(k)] = k;
            std::sort(rank.begin(), rank.end(), [&](Eigen::Index a, Eigen::Index b) {
                for (Eigen::Index d = 0; d < result.centers.cols(); ++d) {
                    if (result.centers(a, d) != result.centers(b, d)) return result.centers(a, d) < result.centers(b, d);
                }
                return a < b;
            });
            std::vector<int> position(static_cast<std::size_t>(c));
            for (Eigen::Index k = 0; k < c; ++k) position[static_cast<std::size_t>(rank[static_cast<std::size_t>(k)])] = static_cast<int>(k);
            cs.clusters.resize(static_cast<std::size_t>(c));
            for (Eigen::Index k = 0; k < c; ++k) {
                auto& row = cs.clusters[static_cast<std::size_t>(position[static_cast<std::size_t>(k)])];
                for (Eigen::Index d = 0; d < result.centers.cols(); ++d) row.center.push_back(result.centers(k, d));
            }
            for (std::size_t m = 0; m < members.size(); ++m) {
                Eigen::Index best;
                result.membership.row(static_cast<Eigen::Index>(m)).maxCoeff(&best);
                const int cluster = position[static_cast<std::size_t>(best)];
                run.features[members[m]].cluster = cluster;
                ++cs.clusters[static_cast<std::size_t>(cluster)].size;
            }
            cs.status = "ok";
            cs.iterations = result.iterations;
            cs.converged = result.converged;
            cs.objective = result.objective.empty() ? 0.0 : result.objective.back();
        } catch (const std::exception& e) {
            cs.status = status_of(e);
        }
    });

    return run;
}

PipelineRun run_pipeline_detailed(const PipelineLogs& logs, const PipelineConfig& config) {
    Timestamp clock{};
    ingest::EventStore store({}, [&clock] { return clock; });
    auto summary = replay_logs(logs, config.downtime, store, clock);
    return analyze_snapshot(store.snapshot(), config, std::move(summary));
}

PipelineReport run_pipeline(const PipelineLogs& logs, const PipelineConfig& config) {
    return run_pipeline_detailed(logs, config).report;
}

}  // namespace scholartrace::pipeline
