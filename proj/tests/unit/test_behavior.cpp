#include <doctest.h>

#include <ctime>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "scholartrace/behavior/errors.hpp"
#include "scholartrace/behavior/fields.hpp"
#include "scholartrace/behavior/schedule.hpp"
#include "scholartrace/behavior/sessions.hpp"
#include "scholartrace/behavior/timeseries.hpp"
#include "scholartrace/common/random.hpp"
#include "support/fixtures.hpp"

using namespace scholartrace;
using namespace scholartrace::behavior;
using scholartrace::testing::at;
using std::chrono::hours;
using std::chrono::minutes;

namespace {

const ingest::Uid kUid = *ingest::Uid::parse("0123456789abcdef0123456789abcdef");

// Oracle for local calendar fields via the C library instead of <chrono>.
std::tm local_tm(Timestamp t, int offset_minutes) {
    const std::time_t shifted = std::chrono::system_clock::to_time_t(t) + offset_minutes * 60;
    std::tm tm{};
    gmtime_r(&shifted, &tm);
    return tm;
}

std::vector<Timestamp> random_times(Rng& rng, std::size_t n, Timestamp start, Seconds span) {
    std::vector<Timestamp> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + Seconds{rng.integer(0, span.count() - 1)});
    std::sort(out.begin(), out.end());
    return out;
}

TimeSeries make_series(std::vector<double> values, std::vector<BucketState> state, Seconds width = Seconds{86400}) {
    return TimeSeries{width, at("2019-10-07T00:00:00Z"), std::move(values), std::move(state)};
}

constexpr auto O = BucketState::Observed;
constexpr auto M = BucketState::Missing;
constexpr auto I = BucketState::Imputed;

}  // namespace

TEST_CASE("sessionize splits on gaps longer than the threshold") {
    const Timestamp t = at("2019-10-07T08:00:00Z");
    const std::vector<Timestamp> three{t, t + minutes{10}, t + minutes{70}};
    const auto s = sessionize(kUid, three);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Session{kUid, t, t + minutes{10}, 2});
    CHECK(s[1] == Session{kUid, t + minutes{70}, t + minutes{70}, 1});

    const std::vector<Timestamp> one{t};
    CHECK(sessionize(kUid, one) == std::vector<Session>{Session{kUid, t, t, 1}});

    std::vector<Timestamp> thousand;
    for (int i = 0; i < 1000; ++i) thousand.push_back(t + minutes{i});
    const auto long_run = sessionize(kUid, thousand);
    REQUIRE(long_run.size() == 1);
    CHECK(long_run[0].event_count == 1000);

    CHECK(sessionize(kUid, std::vector<Timestamp>{}).empty());
    const std::vector<Timestamp> exact{t, t + minutes{30}};
    CHECK(sessionize(kUid, exact).size() == 1);
    const std::vector<Timestamp> unsorted{t + minutes{1}, t};
    CHECK_THROWS_AS(sessionize(kUid, unsorted), std::invalid_argument);
}

TEST_CASE("property: sessions partition the events") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const auto times = random_times(rng, static_cast<std::size_t>(rng.integer(0, 200)), at("2019-10-07T00:00:00Z"),
                                        Seconds{86400 * 3});
        const Seconds gap{rng.integer(60, 7200)};
        const auto sessions = sessionize(kUid, times, gap);
        std::size_t covered = 0, cursor = 0;
        for (std::size_t k = 0; k < sessions.size(); ++k) {
            const auto& s = sessions[k];
            REQUIRE(s.event_count > 0);
            REQUIRE(s.start <= s.end);
            REQUIRE(times[cursor] == s.start);
            for (std::size_t j = cursor + 1; j < cursor + s.event_count; ++j) REQUIRE(times[j] - times[j - 1] <= gap);
            cursor += s.event_count;
            REQUIRE(times[cursor - 1] == s.end);
            if (k + 1 < sessions.size()) REQUIRE(sessions[k + 1].start - s.end > gap);
            covered += s.event_count;
        }
        REQUIRE(covered == times.size());
    }
}

TEST_CASE("schedule_features night and weekend shares") {
    SUBCASE("Tuesday afternoons") {
        const std::vector<Timestamp> t{at("2019-10-08T06:00:00Z"), at("2019-10-15T06:00:00Z")};  // 14:00 local
        const auto f = schedule_features(kUid, t);
        CHECK(f.night_fraction == 0.0);
        CHECK(f.weekend_fraction == 0.0);
        CHECK(f.active_days == 2);
    }
    SUBCASE("Sunday 23:30") {
        const std::vector<Timestamp> t{at("2019-10-13T15:30:00Z")};
        const auto f = schedule_features(kUid, t);
        CHECK(f.night_fraction == 1.0);
        CHECK(f.weekend_fraction == 1.0);
    }
    SUBCASE("mixed week") {
        const std::vector<Timestamp> t{at("2019-10-07T15:00:00Z"),   // Mon 23:00
                                       at("2019-10-08T02:00:00Z"),   // Tue 10:00
                                       at("2019-10-12T02:00:00Z"),   // Sat 10:00
                                       at("2019-10-12T18:00:00Z")};  // Sun 02:00
        int night = 0, weekend = 0;
        for (const auto ts : t) {
            const auto tm = local_tm(ts, 480);
            night += tm.tm_hour >= 22 || tm.tm_hour < 6;
            weekend += tm.tm_wday == 0 || tm.tm_wday == 6;
        }
        CHECK(night == 2);
        CHECK(weekend == 2);
        const auto f = schedule_features(kUid, t);
        CHECK(f.night_fraction == 0.5);
        CHECK(f.weekend_fraction == 0.5);
        CHECK(f.events_total == 4);
        CHECK(f.active_days == 4);
    }
    SUBCASE("no events") {
        const auto f = schedule_features(kUid, std::vector<Timestamp>{});
        CHECK(f == ScheduleFeatures{kUid, 0.0, 0.0, 0, 0});
    }
    CHECK(to_json(schedule_features(kUid, std::vector<Timestamp>{})).dump() ==
          R"({"uid":"0123456789abcdef0123456789abcdef","night_fraction":0.0,"weekend_fraction":0.0,"active_days":0,"events_total":0})");
}

TEST_CASE("property: schedule_features matches a libc calendar oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto times = random_times(rng, static_cast<std::size_t>(rng.integer(1, 300)), at("2019-01-01T00:00:00Z"),
                                        Seconds{86400 * 60});
        const int offset = static_cast<int>(rng.integer(-12, 14)) * 60;
        std::size_t night = 0, weekend = 0;
        std::set<std::tuple<int, int, int>> days;
        for (const auto t : times) {
            const auto tm = local_tm(t, offset);
            night += tm.tm_hour >= 22 || tm.tm_hour < 6;
            weekend += tm.tm_wday == 0 || tm.tm_wday == 6;
            days.emplace(tm.tm_year, tm.tm_mon, tm.tm_mday);
        }
        const auto f = schedule_features(kUid, times, UtcOffset{minutes{offset}});
        REQUIRE(f.night_fraction == static_cast<double>(night) / static_cast<double>(times.size()));
        REQUIRE(f.weekend_fraction == static_cast<double>(weekend) / static_cast<double>(times.size()));
        REQUIRE(f.active_days == days.size());
        REQUIRE(f.active_days <= static_cast<std::size_t>((times.back() - times.front()) / hours{24}) + 2);
    }
}

TEST_CASE("NightWindow is configurable") {
    CHECK(NightWindow{}.contains(22));
    CHECK(NightWindow{}.contains(5));
    CHECK_FALSE(NightWindow{}.contains(6));
    CHECK(NightWindow{0, 6}.contains(0));
    CHECK_FALSE(NightWindow{0, 6}.contains(23));
}

TEST_CASE("categorize_participant") {
    FieldTable table;
    table.add(1, "cardiology");
    table.add(2, "cardiology");
    table.add(3, "oncology");
    table.add(4, "oncology");

    const std::vector<std::uint32_t> cardio{1, 2, 1};
    CHECK(categorize_participant(cardio, table).shares == std::map<std::string, double>{{"cardiology", 1.0}});

    const std::vector<std::uint32_t> split{1, 2, 3, 4};
    CHECK(categorize_participant(split, table).shares ==
          std::map<std::string, double>{{"cardiology", 0.5}, {"oncology", 0.5}});

    const std::vector<std::uint32_t> partial{1, 2, 3, 999};
    const auto d = categorize_participant(partial, table);
    CHECK(d.coverage() == 0.75);
    CHECK(d.shares.at("cardiology") == doctest::Approx(2.0 / 3.0));
    CHECK(d.shares.at("oncology") == doctest::Approx(1.0 / 3.0));

    const std::vector<std::uint32_t> none{};
    CHECK_THROWS_AS(categorize_participant(none, table), BehaviorError);
    const std::vector<std::uint32_t> unmatched{77};
    CHECK(categorize_participant(unmatched, table).shares.empty());
}

TEST_CASE("bundled field table") {
    const auto table = FieldTable::from_file(std::string(ST_SOURCE_DIR) + "/data/pmid_fields.csv");
    CHECK(table.size() >= 1000);
    std::ifstream csv(std::string(ST_SOURCE_DIR) + "/data/pmid_fields.csv");
    std::string line;
    std::getline(csv, line);
    std::set<std::string> fields;
    while (std::getline(csv, line)) fields.insert(line.substr(line.find(',') + 1));
    CHECK(fields.size() >= 5);

    std::istringstream bad("pmid,area\n1,x\n");
    CHECK_THROWS(FieldTable::from_csv(bad));
    std::istringstream dup("pmid,field\n1,x\n1,y\n");
    CHECK_THROWS(FieldTable::from_csv(dup));
    std::istringstream zero("pmid,field\n0,x\n");
    CHECK_THROWS(FieldTable::from_csv(zero));
}

TEST_CASE("aggregate counts events per bucket") {
    const Timestamp day = at("2019-10-07T00:00:00Z");
    std::vector<Timestamp> ten;
    for (int i = 0; i < 10; ++i) ten.push_back(day + hours{3} + minutes{5 * i});
    const auto s = aggregate(ten, hours{1}, {}, TimeWindow{day, day + hours{24}});
    CHECK(s.size() == 24);
    CHECK(s.values[3] == 10.0);
    CHECK(std::accumulate(s.values.begin(), s.values.end(), 0.0) == 10.0);

    const std::vector<TimeWindow> downtime{{day + hours{5}, day + hours{7}}};
    const auto d = aggregate(ten, hours{1}, downtime, TimeWindow{day, day + hours{24}});
    CHECK(d.state[5] == BucketState::Missing);
    CHECK(d.state[6] == BucketState::Missing);
    CHECK(d.state[7] == BucketState::Observed);
    CHECK(d.state[4] == BucketState::Observed);

    // a window touching part of a bucket marks the whole bucket
    const std::vector<TimeWindow> partial{{day + hours{9} + minutes{30}, day + hours{10} + minutes{1}}};
    const auto p = aggregate(ten, hours{1}, partial, TimeWindow{day, day + hours{24}});
    CHECK(p.state[9] == BucketState::Missing);
    CHECK(p.state[10] == BucketState::Missing);
    CHECK(p.state[11] == BucketState::Observed);

    std::vector<Timestamp> week;
    for (int h = 0; h < 24 * 7; ++h) week.push_back(day + hours{h} + minutes{17});
    const auto flat = aggregate(week, hours{1}, {});
    CHECK(flat.origin == day);
    CHECK(flat.size() == 24 * 7);
    CHECK(std::all_of(flat.values.begin(), flat.values.end(), [](double v) { return v == 1.0; }));

    CHECK_THROWS_AS(aggregate(ten, Seconds{5 * 3600}, {}), BehaviorError);
    CHECK_THROWS_AS(aggregate(ten, Seconds{0}, {}), BehaviorError);
    CHECK_THROWS_AS(aggregate(ten, hours{1}, {}, TimeWindow{day + minutes{1}, day + hours{2}}), BehaviorError);
    CHECK(aggregate(std::vector<Timestamp>{}, hours{1}, {}).size() == 0);
}

TEST_CASE("property: Missing buckets lie inside downtime windows") {
    Rng rng(8);
    const Timestamp start = at("2019-10-07T00:00:00Z");
    for (int trial = 0; trial < 200; ++trial) {
        const auto times = random_times(rng, 500, start, Seconds{86400 * 21});
        std::vector<TimeWindow> downtime;
        for (int k = 0; k < 3; ++k) {
            const Timestamp s = start + Seconds{rng.integer(0, 86400 * 21)};
            downtime.push_back(TimeWindow{s, s + Seconds{rng.integer(1, 6 * 3600)}});
        }
        const auto series = aggregate(times, hours{1}, downtime);
        for (std::size_t i = 0; i < series.size(); ++i) {
            const TimeWindow bucket{series.bucket_start(i), series.bucket_start(i + 1)};
            const bool inside = std::any_of(downtime.begin(), downtime.end(),
                                            [&](const TimeWindow& w) { return w.overlaps(bucket); });
            REQUIRE((series.state[i] == BucketState::Missing) == inside);
        }
    }
}

TEST_CASE("impute_gaps uses the same slot one week apart") {
    // daily buckets, so one week is 7 buckets
    std::vector<double> v(21, 1.0);
    std::vector<BucketState> st(21, O);
    v[3] = 10.0;
    v[17] = 14.0;
    v[10] = 0.0;
    st[10] = M;
    auto r = impute_gaps(make_series(v, st));
    CHECK(r.series.values[10] == 12.0);
    CHECK(r.series.state[10] == I);
    CHECK(r.unresolved.empty());

    v[3] = 7.0;
    st[17] = M;
    r = impute_gaps(make_series(v, st));
    CHECK(r.series.values[10] == 7.0);
    CHECK(r.series.state[10] == I);
    // 17 has bucket 10 (Missing) before it and nothing after
    CHECK(r.series.state[17] == M);
    CHECK(r.unresolved == std::vector<std::size_t>{17});

    st[3] = M;
    r = impute_gaps(make_series(v, st));
    CHECK(r.series.state[10] == M);
    CHECK(r.unresolved == std::vector<std::size_t>{3, 10, 17});
}

namespace {

// Oracle: finds neighbours by timestamp arithmetic rather than index stride.
std::optional<double> oracle_fill(const TimeSeries& s, std::size_t i) {
    std::vector<double> found;
    for (const auto shift : {-kWeek, kWeek}) {
        const Timestamp target = s.bucket_start(i) + shift;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s.bucket_start(j) == target && s.state[j] == BucketState::Observed) found.push_back(s.values[j]);
        }
    }
    if (found.empty()) return std::nullopt;
    if (found.size() == 1) return found[0];
    return (found[0] + found[1]) / 2.0;
}

TimeSeries random_series(Rng& rng, Seconds width, double missing_rate) {
    const auto stride = static_cast<std::size_t>(kWeek / width);
    const auto n = stride * static_cast<std::size_t>(rng.integer(1, 5)) + static_cast<std::size_t>(rng.integer(0, stride));
    TimeSeries s{width, at("2019-10-07T00:00:00Z"), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const bool missing = rng.bernoulli(missing_rate);
        s.values.push_back(missing ? 0.0 : static_cast<double>(rng.integer(0, 1000)));
        s.state.push_back(missing ? M : O);
    }
    return s;
}

}  // namespace

TEST_CASE("property: impute_gaps matches the oracle, keeps observed buckets, and is idempotent") {
    Rng rng(21);
    const Seconds widths[] = {hours{1}, hours{6}, hours{24}, minutes{30}};
    for (int trial = 0; trial < 400; ++trial) {
        const auto series = random_series(rng, widths[trial % 4], rng.uniform(0.0, 0.6));
        const auto r = impute_gaps(series);
        double imputed_mass = 0.0, expected_mass = 0.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (series.state[i] == O) {
                REQUIRE(r.series.state[i] == O);
                REQUIRE(r.series.values[i] == series.values[i]);
                continue;
            }
            const auto expected = oracle_fill(series, i);
            if (expected) {
                REQUIRE(r.series.state[i] == I);
                // integer inputs: the mean is exact in binary floating point
                REQUIRE(r.series.values[i] == *expected);
                imputed_mass += r.series.values[i];
                expected_mass += *expected;
            } else {
                REQUIRE(r.series.state[i] == M);
                REQUIRE(std::find(r.unresolved.begin(), r.unresolved.end(), i) != r.unresolved.end());
            }
        }
        REQUIRE(imputed_mass == expected_mass);
        const auto again = impute_gaps(r.series);
        REQUIRE(again.series == r.series);
        REQUIRE(again.unresolved == r.unresolved);
    }
}

TEST_CASE("property: imputation of real-valued neighbours is within 1e-12 relative") {
    Rng rng(22);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = rng.uniform(0.0, 1e6), b = rng.uniform(0.0, 1e6);
        std::vector<double> v{a, 0.0, b};
        std::vector<BucketState> st{O, M, O};
        const auto r = impute_gaps(TimeSeries{Seconds{kWeek}, at("2019-10-07T00:00:00Z"), v, st});
        const double mean = a / 2.0 + b / 2.0;
        REQUIRE(std::abs(r.series.values[1] - mean) <= 1e-12 * std::max(1.0, mean));
    }
}
