#include "scholartrace/pipeline/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "scholartrace/common/random.hpp"
#include "scholartrace/geo/geo_point.hpp"
#include "scholartrace/pipeline/pipeline.hpp"
#include "scholartrace/psychometrics/survey.hpp"

namespace scholartrace::pipeline {

namespace {

struct City {
    const char* country;
    const char* name;
    double lat;
    double lon;
};

constexpr std::array<City, 18> kHomeCities{{
    {"CN", "Shanghai", 31.2304, 121.4737},  {"CN", "Beijing", 39.9042, 116.4074},
    {"CN", "Guangzhou", 23.1291, 113.2644}, {"CN", "Shenzhen", 22.5431, 114.0579},
    {"CN", "Chengdu", 30.5728, 104.0668},   {"CN", "Wuhan", 30.5928, 114.3055},
    {"CN", "Hangzhou", 30.2741, 120.1551},  {"CN", "Nanjing", 32.0603, 118.7969},
    {"CN", "Xi'an", 34.3416, 108.9398},     {"CN", "Chongqing", 29.4316, 106.9123},
    {"CN", "Tianjin", 39.3434, 117.3616},   {"CN", "Shenyang", 41.8057, 123.4315},
    {"CN", "Harbin", 45.8038, 126.5349},    {"CN", "Changsha", 28.2282, 112.9388},
    {"CN", "Kunming", 24.8801, 102.8329},   {"CN", "Xiamen", 24.4798, 118.0894},
    {"CN", "Jinan", 36.6512, 117.1201},     {"CN", "Zhengzhou", 34.7466, 113.6254},
}};

// every exit is more than 1500 km from every home city
constexpr std::array<City, 10> kExitCities{{
    {"DE", "Frankfurt", 50.1109, 8.6821},     {"GB", "London", 51.5074, -0.1278},
    {"US", "Los Angeles", 34.0522, -118.2437}, {"US", "New York", 40.7128, -74.0060},
    {"JP", "Tokyo", 35.6762, 139.6503},       {"SG", "Singapore", 1.3521, 103.8198},
    {"AU", "Sydney", -33.8688, 151.2093},     {"NL", "Amsterdam", 52.3676, 4.9041},
    {"CA", "Toronto", 43.6532, -79.3832},     {"RU", "Moscow", 55.7558, 37.6173},
}};

constexpr int kVpnPool = 20;
constexpr double kGenuineSpeedCap = 900.0;

constexpr std::array<const char*, 8> kUserAgents{{
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/77.0.3865.90 Safari/537.36",
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64; rv:69.0) Gecko/20100101 Firefox/69.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_14_6) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/13.0 Safari/605.1.15",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_14_6) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/77.0.3865.90 Safari/537.36",
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/77.0.3865.90 Safari/537.36 Edg/77.0.235.27",
    "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:69.0) Gecko/20100101 Firefox/69.0",
    "Mozilla/5.0 (Linux; Android 9; MI 8) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/77.0.3865.92 Mobile Safari/537.36",
    "Mozilla/5.0 (iPhone; CPU iPhone OS 13_1 like Mac OS X) AppleWebKit/605.1.15 (KHTML, like Gecko) Version/13.0 Mobile/15E148 Safari/604.1",
}};

const std::map<std::string, std::vector<std::string>>& keywords() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"cardiology", {"heart failure", "atrial fibrillation", "hypertension management"}},
        {"endocrinology", {"type 2 diabetes", "insulin resistance", "thyroid nodules"}},
        {"infectious disease", {"sepsis", "antimicrobial resistance", "influenza vaccine"}},
        {"neurology", {"stroke thrombolysis", "parkinson disease", "migraine"}},
        {"oncology", {"immunotherapy", "breast cancer", "tumor microenvironment"}},
        {"psychiatry", {"depression", "burnout", "sleep deprivation"}},
        {"public health", {"cohort study", "air pollution", "health policy"}},
    };
    return table;
}

const std::vector<std::string> kFallbackKeywords{"systematic review", "meta-analysis", "randomized trial"};

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string ipv4(int first, std::size_t i, int last_bias = 0) {
    std::ostringstream s;
    s << first << '.' << ((i >> 16) & 255) << '.' << ((i >> 8) & 255) << '.' << ((i & 255) + last_bias) % 256;
    return s.str();
}

struct Place {
    std::string country;
    std::string city;
    geo::GeoPoint point;
};

struct Draft {
    Timestamp ts;
    std::string ip;
    const Place* place = nullptr;  // nullptr: IP has no geo entry
    bool vpn = false;
};

bool in_any(const std::vector<TimeWindow>& windows, Timestamp ts) {
    return std::any_of(windows.begin(), windows.end(), [&](const TimeWindow& w) { return w.contains(ts); });
}

int clamp_round(double x, int lo, int hi) {
    return std::clamp(static_cast<int>(std::lround(x)), lo, hi);
}

double round1(double x) { return std::round(x * 10.0) / 10.0; }

psychometrics::SurveyWave draw_wave(Rng& r, const ingest::Uid& uid, bool night_owl) {
    using namespace psychometrics;
    SurveyWave w;
    w.uid = uid;
    w.wave_index = 0;
    const double stress = r.normal() + (night_owl ? 0.8 : 0.0);
    const double satisfaction = -0.5 * stress + r.normal();
    const double conflict = 0.5 * stress + r.normal();
    const double ambiguity = 0.3 * stress + r.normal();
    const double support = r.normal();

    const std::set<int> reversed{4, 5, 7, 8};
    for (std::size_t i = 0; i < kPssItems; ++i) {
        const int v = clamp_round(2.0 + 0.9 * stress + r.normal(0, 0.7), 0, 4);
        w.pss[i] = reversed.contains(static_cast<int>(i) + 1) ? 4 - v : v;
    }
    for (auto& x : w.jss) x = clamp_round(3.0 + 0.8 * satisfaction + r.normal(0, 0.7), 1, 5);
    for (auto& x : w.role_conflict) x = clamp_round(3.0 + 0.8 * conflict + r.normal(0, 0.7), 1, 5);
    for (auto& x : w.role_ambiguity) x = clamp_round(2.5 + 0.8 * ambiguity + r.normal(0, 0.7), 1, 5);
    for (auto& x : w.family_support) x = clamp_round(5.0 + 0.9 * support + r.normal(0, 0.8), 1, 7);

    auto& b = w.basic;
    b.age = static_cast<int>(r.integer(24, 65));
    b.bmi = round1(std::clamp(r.normal(23.5, 3.2), 16.0, 45.0));
    const double e = r.uniform();
    b.education = e < 0.05 ? Education::Secondary
                : e < 0.35 ? Education::Bachelor
                : e < 0.70 ? Education::Master
                           : Education::Doctorate;
    b.sbp = round1(std::clamp(r.normal(118.0 + 0.4 * (b.age - 40), 14.0), 90.0, 200.0));
    b.on_antihypertensives = r.bernoulli(b.sbp > 140 ? 0.4 : 0.05);
    b.smoker = r.bernoulli(night_owl ? 0.35 : 0.18);
    b.diabetic = r.bernoulli(0.06);
    b.sex = r.bernoulli(0.55) ? Sex::Male : Sex::Female;
    return w;
}

}  // namespace

void CohortSpec::validate() const {
    const auto share = [](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw SpecError(std::string(name) + " must lie in [0, 1]");
    };
    share("night_owl_share", night_owl_share);
    share("weekend_share", weekend_share);
    share("vpn_share", vpn_share);
    share("short_user_share", short_user_share);
    share("travel_share", travel_share);
    share("survey_completion_rate", survey_completion_rate);
    share("survey_error_rate", survey_error_rate);
    share("unmapped_ip_share", unmapped_ip_share);
    if (n_participants < 0) throw SpecError("n_participants must be non-negative");
    if (days < 1) throw SpecError("days must be positive");
    if (!parse_iso8601(start_date + "T00:00:00Z")) throw SpecError("start_date must be YYYY-MM-DD");
    for (const auto& d : downtime) {
        if (d.offset_hours < 0 || d.duration_hours <= 0 || d.offset_hours + d.duration_hours > days * 24) {
            throw SpecError("downtime window outside the study period");
        }
    }
    for (std::size_t i = 0; i < downtime.size(); ++i) {
        for (std::size_t j = i + 1; j < downtime.size(); ++j) {
            const auto& a = downtime[i];
            const auto& b = downtime[j];
            if (a.offset_hours < b.offset_hours + b.duration_hours && b.offset_hours < a.offset_hours + a.duration_hours) {
                throw SpecError("downtime windows overlap");
            }
        }
    }
}

Timestamp CohortSpec::start() const {
    const auto midnight = parse_iso8601(start_date + "T00:00:00Z");
    if (!midnight) throw SpecError("start_date must be YYYY-MM-DD");
    return *midnight - UtcOffset::china().minutes;
}

std::vector<TimeWindow> CohortSpec::downtime_windows() const {
    std::vector<TimeWindow> out;
    const Timestamp t0 = start();
    for (const auto& d : downtime) {
        const auto begin = t0 + std::chrono::hours(d.offset_hours);
        out.push_back({begin, begin + std::chrono::hours(d.duration_hours)});
    }
    std::sort(out.begin(), out.end(), [](const TimeWindow& a, const TimeWindow& b) { return a.start < b.start; });
    return out;
}

CohortSpec spec_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SpecError("spec must be a JSON object");
    if (!doc.contains("seed")) throw SpecError("seed is mandatory");
    static const std::set<std::string> known{
        "seed", "n_participants", "days", "start_date", "night_owl_share", "weekend_share", "vpn_share",
        "short_user_share", "travel_share", "survey_completion_rate", "survey_error_rate", "unmapped_ip_share",
        "downtime"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.contains(key)) throw SpecError("unknown spec key " + key);
    }
    CohortSpec s;
    try {
        s.seed = doc.at("seed").get<std::uint64_t>();
        s.n_participants = doc.value("n_participants", s.n_participants);
        s.days = doc.value("days", s.days);
        s.start_date = doc.value("start_date", s.start_date);
        s.night_owl_share = doc.value("night_owl_share", s.night_owl_share);
        s.weekend_share = doc.value("weekend_share", s.weekend_share);
        s.vpn_share = doc.value("vpn_share", s.vpn_share);
        s.short_user_share = doc.value("short_user_share", s.short_user_share);
        s.travel_share = doc.value("travel_share", s.travel_share);
        s.survey_completion_rate = doc.value("survey_completion_rate", s.survey_completion_rate);
        s.survey_error_rate = doc.value("survey_error_rate", s.survey_error_rate);
        s.unmapped_ip_share = doc.value("unmapped_ip_share", s.unmapped_ip_share);
        if (doc.contains("downtime")) {
            s.downtime.clear();
            for (const auto& d : doc.at("downtime")) {
                s.downtime.push_back({d.at("offset_hours").get<int>(), d.at("duration_hours").get<int>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed spec: ") + e.what());
    }
    s.validate();
    return s;
}

nlohmann::ordered_json to_json(const CohortSpec& s) {
    nlohmann::ordered_json j;
    j["seed"] = s.seed;
    j["n_participants"] = s.n_participants;
    j["days"] = s.days;
    j["start_date"] = s.start_date;
    j["night_owl_share"] = s.night_owl_share;
    j["weekend_share"] = s.weekend_share;
    j["vpn_share"] = s.vpn_share;
    j["short_user_share"] = s.short_user_share;
    j["travel_share"] = s.travel_share;
    j["survey_completion_rate"] = s.survey_completion_rate;
    j["survey_error_rate"] = s.survey_error_rate;
    j["unmapped_ip_share"] = s.unmapped_ip_share;
    j["downtime"] = nlohmann::ordered_json::array();
    for (const auto& d : s.downtime) {
        j["downtime"].push_back({{"offset_hours", d.offset_hours}, {"duration_hours", d.duration_hours}});
    }
    return j;
}

std::vector<std::pair<std::uint32_t, std::string>> read_field_rows(const std::filesystem::path& csv) {
    std::ifstream in(csv);
    if (!in) throw std::runtime_error("cannot open field table " + csv.string());
    std::string line;
    std::getline(in, line);
    if (line != "pmid,field") throw std::runtime_error("field table header must be pmid,field");
    std::vector<std::pair<std::uint32_t, std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("malformed field table row");
        rows.emplace_back(static_cast<std::uint32_t>(std::stoul(line.substr(0, comma))), line.substr(comma + 1));
    }
    return rows;
}

Simulation simulate(const CohortSpec& spec, const std::vector<std::pair<std::uint32_t, std::string>>& field_rows) {
    spec.validate();
    Simulation sim;
    sim.spec = spec;

    const Timestamp t0 = spec.start();
    const Timestamp t_end = t0 + std::chrono::hours(24 * spec.days);
    const auto downtime = spec.downtime_windows();

    std::map<std::string, std::vector<std::uint32_t>> by_field;
    for (const auto& [pmid, field] : field_rows) by_field[field].push_back(pmid);
    std::vector<std::string> fields;
    for (const auto& [field, _] : by_field) fields.push_back(field);

    std::vector<Place> home_places, exit_places;
    for (const auto& c : kHomeCities) home_places.push_back({c.country, c.name, geo::GeoPoint(c.lat, c.lon)});
    for (const auto& c : kExitCities) exit_places.push_back({c.country, c.name, geo::GeoPoint(c.lat, c.lon)});

    std::map<std::string, const Place*> geo_table;
    std::vector<std::string> vpn_ips;
    for (int j = 0; j < kVpnPool; ++j) {
        vpn_ips.push_back("185.220.101." + std::to_string(j + 1));
        geo_table[vpn_ips.back()] = &exit_places[static_cast<std::size_t>(j) % exit_places.size()];
    }

    std::vector<std::pair<ingest::AccessEvent, int>> all_events;  // event, participant index
    std::set<VpnTruth> vpn_truth;

    for (int i = 0; i < spec.n_participants; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        Rng r(mix(spec.seed, idx));
        ParticipantTruth truth;
        truth.uid = ingest::derive_uid("participant-" + std::to_string(spec.seed) + "-" + std::to_string(i), t0,
                                       std::nullopt);
        truth.night_owl = r.bernoulli(spec.night_owl_share);
        truth.weekend_worker = r.bernoulli(spec.weekend_share);
        truth.short_user = r.bernoulli(spec.short_user_share);
        truth.vpn_user = r.bernoulli(spec.vpn_share);
        truth.traveler = r.bernoulli(spec.travel_share);

        const auto home = static_cast<std::size_t>(r.integer(0, kHomeCities.size() - 1));
        truth.home_city = kHomeCities[home].name;
        std::vector<std::string> home_ips;
        const auto n_home = r.integer(1, 3);
        for (int k = 0; k < n_home; ++k) {
            if (r.bernoulli(0.15)) {
                std::ostringstream s;
                s << "240e:" << std::hex << (idx & 0xffff) << ':' << ((idx >> 16) & 0xffff) << "::" << (k + 1);
                home_ips.push_back(s.str());
            } else {
                home_ips.push_back(ipv4(36 + k, idx));
            }
            geo_table[home_ips.back()] = &home_places[home];
        }
        const std::string trip_ip = ipv4(113, idx);
        const std::string unmapped_ip = ipv4(100, idx);

        std::size_t trip_city = home;
        int trip_first = -1, trip_last = -1;
        if (truth.traveler && spec.days >= 8) {
            trip_city = static_cast<std::size_t>(r.integer(0, kHomeCities.size() - 2));
            if (trip_city >= home) ++trip_city;
            trip_first = static_cast<int>(r.integer(2, spec.days - 5));
            trip_last = trip_first + static_cast<int>(r.integer(1, 3));
            geo_table[trip_ip] = &home_places[trip_city];
        }

        const std::string ua = kUserAgents[static_cast<std::size_t>(r.integer(0, kUserAgents.size() - 1))];
        const std::string primary = fields.empty() ? std::string{}
                                                   : fields[static_cast<std::size_t>(r.integer(0, fields.size() - 1))];

        std::vector<int> active;
        if (truth.short_user) {
            const int window = std::min(spec.days, 10);
            const int k = static_cast<int>(r.integer(1, std::min(6, window)));
            std::vector<int> pool(static_cast<std::size_t>(window));
            for (int d = 0; d < window; ++d) pool[static_cast<std::size_t>(d)] = d;
            for (int j = 0; j < k; ++j) {
                const auto pick = static_cast<std::size_t>(r.integer(j, window - 1));
                std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
            }
            active.assign(pool.begin(), pool.begin() + k);
            std::sort(active.begin(), active.end());
        } else {
            for (int d = 0; d < spec.days; ++d) {
                const bool weekend = is_local_weekend(t0 + std::chrono::hours(24 * d + 12), UtcOffset::china());
                const double p = weekend ? (truth.weekend_worker ? 0.8 : 0.2) : 0.85;
                if (r.bernoulli(p)) active.push_back(d);
            }
        }

        std::vector<Draft> drafts;
        for (const int d : active) {
            const bool on_trip = d >= trip_first && d <= trip_last;
            const auto n = r.integer(4, 16);
            for (int e = 0; e < n; ++e) {
                int hour;
                if (truth.night_owl && r.bernoulli(0.6)) {
                    constexpr int night_hours[] = {22, 23, 0, 1, 2};
                    hour = night_hours[r.integer(0, 4)];
                } else if (!truth.night_owl && r.bernoulli(0.03)) {
                    hour = static_cast<int>(r.integer(22, 23));
                } else {
                    hour = static_cast<int>(r.integer(8, 21));
                }
                const auto ts = t0 + std::chrono::hours(24 * d + hour) + std::chrono::minutes(r.integer(0, 59)) +
                                std::chrono::seconds(r.integer(0, 59));
                Draft draft{ts, {}, nullptr, false};
                if (on_trip) {
                    draft.ip = trip_ip;
                } else if (r.bernoulli(spec.unmapped_ip_share)) {
                    draft.ip = unmapped_ip;
                } else {
                    draft.ip = home_ips[static_cast<std::size_t>(r.integer(0, home_ips.size() - 1))];
                }
                const auto it = geo_table.find(draft.ip);
                draft.place = it == geo_table.end() ? nullptr : it->second;
                drafts.push_back(std::move(draft));
            }
        }
        std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) { return a.ts < b.ts; });

        // lost to downtime, then keep genuine movement below the speed cap
        std::vector<Draft> kept;
        std::optional<std::size_t> last_resolved;
        for (auto& d : drafts) {
            if (in_any(downtime, d.ts)) continue;
            if (d.place && last_resolved) {
                const Draft& prev = kept[*last_resolved];
                const double km = geo::haversine_km(prev.place->point, d.place->point);
                const double hours = std::chrono::duration<double>(d.ts - prev.ts).count() / 3600.0;
                const bool ok = hours == 0.0 ? km == 0.0 : km / hours < kGenuineSpeedCap;
                if (!ok) continue;
            }
            kept.push_back(d);
            if (d.place) last_resolved = kept.size() - 1;
        }
        // first event must be at home
        while (!kept.empty() && kept.front().place != &home_places[home]) kept.erase(kept.begin());

        std::vector<Draft> hops;
        if (truth.vpn_user && !kept.empty()) {
            std::vector<std::string> exits;
            const auto first_exit = r.integer(0, kVpnPool - 1);
            exits.push_back(vpn_ips[static_cast<std::size_t>(first_exit)]);
            if (r.bernoulli(0.5)) {
                const auto second = (first_exit + r.integer(1, kVpnPool - 1)) % kVpnPool;
                exits.push_back(vpn_ips[static_cast<std::size_t>(second)]);
            }
            const auto try_hop = [&](std::size_t k) {
                if (!kept[k].place) return false;
                const auto t = kept[k].ts + std::chrono::seconds(r.integer(60, 1200));
                if (k + 1 < kept.size() && !(t < kept[k + 1].ts)) return false;
                if (t >= t_end || in_any(downtime, t)) return false;
                const auto& ip = exits[static_cast<std::size_t>(r.integer(0, exits.size() - 1))];
                hops.push_back(Draft{t, ip, geo_table.at(ip), true});
                return true;
            };
            for (std::size_t k = 0; k < kept.size(); ++k) {
                if (r.bernoulli(0.06)) try_hop(k);
            }
            if (hops.empty()) {
                const auto offset = static_cast<std::size_t>(r.integer(0, kept.size() - 1));
                for (std::size_t step = 0; step < kept.size() && hops.empty(); ++step) {
                    try_hop((offset + step) % kept.size());
                }
            }
        }
        kept.insert(kept.end(), hops.begin(), hops.end());
        std::stable_sort(kept.begin(), kept.end(), [](const Draft& a, const Draft& b) { return a.ts < b.ts; });

        std::set<std::chrono::local_days> days;
        for (const auto& d : kept) {
            days.insert(local_day(d.ts, UtcOffset::china()));
            ingest::AccessEvent ev;
            ev.uid = truth.uid;
            ev.ts = d.ts;
            ev.ip = d.ip;
            ev.ua = ua;
            if (!fields.empty() && r.bernoulli(0.6)) {
                if (r.bernoulli(0.9)) {
                    const auto& field = r.bernoulli(0.8) ? primary : fields[static_cast<std::size_t>(r.integer(0, fields.size() - 1))];
                    const auto& pool = by_field.at(field);
                    ev.pmid = pool[static_cast<std::size_t>(r.integer(0, pool.size() - 1))];
                } else {
                    ev.pmid = static_cast<std::uint32_t>(40'000'000 + r.integer(0, 999'999));
                }
                if (r.bernoulli(0.3)) {
                    const auto it = keywords().find(primary);
                    const auto& words = it == keywords().end() ? kFallbackKeywords : it->second;
                    ev.keyword = words[static_cast<std::size_t>(r.integer(0, words.size() - 1))];
                }
            } else {
                const auto it = keywords().find(primary);
                const auto& words = it == keywords().end() ? kFallbackKeywords : it->second;
                ev.keyword = words[static_cast<std::size_t>(r.integer(0, words.size() - 1))];
            }
            if (d.vpn) vpn_truth.insert({truth.uid, d.ip});
            all_events.emplace_back(std::move(ev), i);
        }
        truth.active_days = static_cast<int>(days.size());
        truth.eligible = truth.active_days >= 7;

        if (!kept.empty() && r.bernoulli(spec.survey_completion_rate)) {
            const int day = std::min(14, spec.days - 1);
            auto received = t0 + std::chrono::hours(24 * day + 12) + std::chrono::seconds(r.integer(0, 7199));
            while (in_any(downtime, received)) received += std::chrono::hours(1);
            auto payload = psychometrics::serialize(draw_wave(r, truth.uid, truth.night_owl));
            truth.survey_submitted = true;
            truth.survey_valid = true;
            if (r.bernoulli(spec.survey_error_rate)) {
                truth.survey_valid = false;
                switch (r.integer(0, 2)) {
                    case 0: payload["pss"][3] = 5; break;
                    case 1: payload["basic"]["sbp"] = 400; break;
                    default: payload.erase("fs"); break;
                }
            }
            sim.surveys.push_back({received, payload.dump()});
        }
        sim.truth.push_back(std::move(truth));
    }

    std::sort(sim.truth.begin(), sim.truth.end(),
              [](const ParticipantTruth& a, const ParticipantTruth& b) { return a.uid < b.uid; });
    for (const auto& t : sim.truth) {
        sim.participants.push_back(t.uid);
        ++sim.funnel.recruited;
        if (!t.eligible) continue;
        ++sim.funnel.eligible;
        if (!t.survey_submitted) continue;
        ++sim.funnel.surveyed;
        if (t.survey_valid) ++sim.funnel.analyzed;
        else ++sim.funnel.survey_rejected;
    }
    sim.funnel.excluded_short = sim.funnel.recruited - sim.funnel.eligible;

    std::stable_sort(all_events.begin(), all_events.end(), [](const auto& a, const auto& b) {
        if (a.first.ts != b.first.ts) return a.first.ts < b.first.ts;
        return a.first.uid < b.first.uid;
    });
    sim.events.reserve(all_events.size());
    for (auto& [ev, _] : all_events) sim.events.push_back(std::move(ev));

    std::sort(sim.surveys.begin(), sim.surveys.end(), [](const SurveySubmission& a, const SurveySubmission& b) {
        return a.received != b.received ? a.received < b.received : a.payload < b.payload;
    });
    sim.vpn_ips.assign(vpn_truth.begin(), vpn_truth.end());
    for (const auto& [ip, place] : geo_table) {
        sim.geo.push_back({ip, place->country, place->city, place->point.lat(), place->point.lon()});
    }
    return sim;
}

nlohmann::ordered_json sidecar_json(const Simulation& sim) {
    nlohmann::ordered_json j;
    j["spec"] = to_json(sim.spec);
    j["events_total"] = sim.events.size();
    j["funnel"] = {{"recruited", sim.funnel.recruited},     {"excluded_short", sim.funnel.excluded_short},
                   {"eligible", sim.funnel.eligible},       {"surveyed", sim.funnel.surveyed},
                   {"survey_rejected", sim.funnel.survey_rejected}, {"analyzed", sim.funnel.analyzed}};
    j["participants"] = nlohmann::ordered_json::array();
    for (const auto& t : sim.truth) {
        j["participants"].push_back({{"uid", t.uid.str()},
                                     {"persona", t.persona()},
                                     {"night_owl", t.night_owl},
                                     {"weekend_worker", t.weekend_worker},
                                     {"short_user", t.short_user},
                                     {"vpn_user", t.vpn_user},
                                     {"traveler", t.traveler},
                                     {"home_city", t.home_city},
                                     {"active_days", t.active_days},
                                     {"eligible", t.eligible},
                                     {"survey_submitted", t.survey_submitted},
                                     {"survey_valid", t.survey_valid}});
    }
    j["vpn_ips"] = nlohmann::ordered_json::array();
    for (const auto& v : sim.vpn_ips) j["vpn_ips"].push_back({{"uid", v.uid.str()}, {"ip", v.ip}});
    return j;
}

std::string events_ndjson(const Simulation& sim) {
    std::string out;
    for (const auto& e : sim.events) out += ingest::event_to_wire(e).dump() + "\n";
    return out;
}

std::string surveys_ndjson(const Simulation& sim) {
    std::string out;
    for (const auto& s : sim.surveys) {
        nlohmann::ordered_json line;
        line["received"] = format_iso8601(s.received);
        line["payload"] = nlohmann::ordered_json::parse(s.payload);
        out += line.dump() + "\n";
    }
    return out;
}

std::string geo_csv(const Simulation& sim) {
    std::string out = "ip,country,city,lat,lon\n";
    for (const auto& g : sim.geo) {
        char coords[64];
        std::snprintf(coords, sizeof coords, "%.4f,%.4f", g.lat, g.lon);
        out += g.ip + "," + g.country + "," + g.city + "," + coords + "\n";
    }
    return out;
}

std::string participants_txt(const Simulation& sim) {
    std::string out;
    for (const auto& uid : sim.participants) out += uid.str() + "\n";
    return out;
}

void write_simulation(const Simulation& sim, const std::filesystem::path& out_dir,
                      const std::filesystem::path& field_table, const std::filesystem::path& risk_model) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto write = [&](const char* name, const std::string& content) {
        std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
        out << content;
    };
    write("events.ndjson", events_ndjson(sim));
    write("surveys.ndjson", surveys_ndjson(sim));
    write("participants.txt", participants_txt(sim));
    write("geo.csv", geo_csv(sim));
    write("sidecar.json", sidecar_json(sim).dump(2) + "\n");
    write("resolver.json", nlohmann::ordered_json{{"network_enabled", false}, {"fixture", "geo.csv"}}.dump(2) + "\n");
    fs::copy_file(field_table, out_dir / "fields.csv", fs::copy_options::overwrite_existing);
    fs::copy_file(risk_model, out_dir / "risk_model.json", fs::copy_options::overwrite_existing);

    PipelineConfig config;
    config.downtime = sim.spec.downtime_windows();
    write("pipeline.json", to_json(config).dump(2) + "\n");
}

}  // namespace scholartrace::pipeline
