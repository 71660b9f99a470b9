#include <doctest.h>

#include <sstream>

#include "scholartrace/common/random.hpp"
#include "scholartrace/psychometrics/reliability.hpp"
#include "scholartrace/psychometrics/scoring.hpp"
#include "scholartrace/psychometrics/survey.hpp"
#include "support/fixtures.hpp"

using namespace scholartrace;
using namespace scholartrace::psychometrics;
using nlohmann::json;

namespace {

const std::string kUid = "0123456789abcdef0123456789abcdef";

Rejection rejection(const json& payload) {
    const auto r = validate_wave(payload);
    REQUIRE(std::holds_alternative<Rejection>(r));
    return std::get<Rejection>(r);
}

SurveyWave accepted(const json& payload) {
    const auto r = validate_wave(payload);
    REQUIRE(std::holds_alternative<SurveyWave>(r));
    return std::get<SurveyWave>(r);
}

template <std::size_t N>
std::array<int, N> random_items(Rng& rng, int lo, int hi) {
    std::array<int, N> a{};
    for (auto& x : a) x = static_cast<int>(rng.integer(lo, hi));
    return a;
}

SurveyWave random_wave(Rng& rng) {
    SurveyWave w;
    w.uid = *ingest::Uid::parse(kUid);
    w.wave_index = static_cast<int>(rng.integer(0, 3));
    w.basic = BasicInfo{static_cast<int>(rng.integer(18, 100)), rng.uniform(10, 60),
                        static_cast<Education>(rng.integer(0, 5)), rng.uniform(70, 250), rng.bernoulli(0.5),
                        rng.bernoulli(0.5), rng.bernoulli(0.5), rng.bernoulli(0.5) ? Sex::Male : Sex::Female};
    w.pss = random_items<kPssItems>(rng, 0, 4);
    w.jss = random_items<kJssItems>(rng, 1, 5);
    w.role_conflict = random_items<kRoleConflictItems>(rng, 1, 5);
    w.role_ambiguity = random_items<kRoleAmbiguityItems>(rng, 1, 5);
    w.family_support = random_items<kFamilySupportItems>(rng, 1, 7);
    return w;
}

}  // namespace

TEST_CASE("validate_wave accepts a complete in-range payload") {
    const auto w = accepted(testing::survey_payload(kUid, 1));
    CHECK(w.uid.str() == kUid);
    CHECK(w.wave_index == 1);
    CHECK(w.basic.age == 35);
    CHECK(w.basic.education == Education::Doctorate);
    CHECK(w.pss == std::array<int, 10>{2, 3, 1, 2, 2, 1, 3, 2, 2, 1});
    CHECK(w.family_support == std::array<int, 4>{1, 3, 5, 7});
}

TEST_CASE("validate_wave names the first offending field") {
    auto p = testing::survey_payload(kUid);
    SUBCASE("pss item out of range") {
        p["pss"][4] = 5;
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "pss[4]"});
    }
    SUBCASE("sbp out of range") {
        p["basic"]["sbp"] = 400;
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "sbp"});
    }
    SUBCASE("earlier field wins") {
        p["basic"]["age"] = 12;
        p["pss"][0] = -1;
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "age"});
    }
    SUBCASE("missing items") {
        p["jss"].erase(14);
        CHECK(rejection(p) == Rejection{RejectReason::MissingItem, "jss[14]"});
    }
    SUBCASE("null item") {
        p["fs"][2] = nullptr;
        CHECK(rejection(p) == Rejection{RejectReason::MissingItem, "fs[2]"});
    }
    SUBCASE("missing section") {
        p.erase("ra");
        CHECK(rejection(p) == Rejection{RejectReason::MissingItem, "ra"});
    }
    SUBCASE("missing basic field") {
        p["basic"].erase("smoker");
        CHECK(rejection(p) == Rejection{RejectReason::MissingItem, "smoker"});
    }
    SUBCASE("extra item") {
        p["rc"].push_back(3);
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "rc[8]"});
    }
    SUBCASE("non-integer item") {
        p["pss"][1] = 2.5;
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "pss[1]"});
        p["pss"][1] = "2";
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "pss[1]"});
    }
    SUBCASE("bad enum and boolean") {
        p["basic"]["education"] = "phd";
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "education"});
        p["basic"]["education"] = "master";
        p["basic"]["diabetic"] = 0;
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "diabetic"});
    }
    SUBCASE("bad uid") {
        p["uid"] = "ABC";
        CHECK(rejection(p) == Rejection{RejectReason::OutOfRange, "uid"});
    }
    SUBCASE("basic range gates") {
        for (const auto& [key, value] : std::vector<std::pair<std::string, json>>{
                 {"age", 17}, {"age", 101}, {"bmi", 9.9}, {"bmi", 60.1}, {"sbp", 69}, {"sbp", 250.5}}) {
            auto q = testing::survey_payload(kUid);
            q["basic"][key] = value;
            CHECK(rejection(q) == Rejection{RejectReason::OutOfRange, key});
        }
    }
    CHECK(std::get<Rejection>(validate_wave_text("{not json")) ==
          Rejection{RejectReason::MissingItem, "payload"});
}

TEST_CASE("scorer reference values") {
    const std::array<int, 10> zeros{}, twos{2, 2, 2, 2, 2, 2, 2, 2, 2, 2}, fours{4, 4, 4, 4, 4, 4, 4, 4, 4, 4};
    CHECK(score_pss(zeros) == 16);
    CHECK(score_pss(twos) == 20);
    CHECK(score_pss(twos, std::vector<int>{}) == 20);
    CHECK(score_pss(twos, std::vector<int>{1, 2, 3}) == 20);
    CHECK(score_pss(fours) == 24);
    CHECK_THROWS_AS(score_pss(zeros, std::vector<int>{11}), std::invalid_argument);

    std::array<int, 15> jss{};
    jss.fill(1);
    CHECK(score_jss(jss) == 15);
    jss.fill(5);
    CHECK(score_jss(jss) == 75);
    for (std::size_t i = 0; i < 15; ++i) jss[i] = i % 2 == 0 ? 1 : 5;
    CHECK(score_jss(jss) == 8 * 1 + 7 * 5);
    CHECK(score_jss(jss) == 43);

    const std::array<int, 8> rc_ones{1, 1, 1, 1, 1, 1, 1, 1}, rc{1, 2, 3, 4, 5, 1, 2, 3};
    const std::array<int, 6> ra_fives{5, 5, 5, 5, 5, 5};
    CHECK(score_rizzo(rc_ones, ra_fives).conflict == 8);
    CHECK(score_rizzo(rc_ones, ra_fives).ambiguity == 30);
    CHECK(score_rizzo(rc, ra_fives).conflict == 21);
    CHECK(score_rizzo(rc, ra_fives, true).ambiguity == 6);

    CHECK(score_family_support(std::array<int, 4>{7, 7, 7, 7}).sum == 28);
    CHECK(score_family_support(std::array<int, 4>{7, 7, 7, 7}).mean == 7.0);
    CHECK(score_family_support(std::array<int, 4>{1, 1, 1, 1}).sum == 4);
    CHECK(score_family_support(std::array<int, 4>{1, 1, 1, 1}).mean == 1.0);
    CHECK(score_family_support(std::array<int, 4>{1, 3, 5, 7}).sum == 16);
    CHECK(score_family_support(std::array<int, 4>{1, 3, 5, 7}).mean == 4.0);
}

TEST_CASE("property: scores stay in range and scorers are monotone") {
    Rng rng(404);
    const ScoringConfig config;
    for (int trial = 0; trial < 100000; ++trial) {
        SurveyWave w = random_wave(rng);
        const auto s = score_wave(w, config);
        REQUIRE((s.pss_total >= 0 && s.pss_total <= 40));
        REQUIRE((s.jss_total >= 15 && s.jss_total <= 75));
        REQUIRE((s.role_conflict_total >= 8 && s.role_conflict_total <= 40));
        REQUIRE((s.role_ambiguity_total >= 6 && s.role_ambiguity_total <= 30));
        REQUIRE((s.family_support_total >= 4 && s.family_support_total <= 28));
        REQUIRE((s.family_support_mean >= 1.0 && s.family_support_mean <= 7.0));

        // bump one item of each instrument where there is headroom
        const auto i = static_cast<std::size_t>(rng.integer(0, 9));
        if (w.pss[i] < 4) {
            SurveyWave up = w;
            ++up.pss[i];
            const bool reversed = i == 3 || i == 4 || i == 6 || i == 7;
            const int delta = score_wave(up, config).pss_total - s.pss_total;
            REQUIRE(delta == (reversed ? -1 : 1));
        }
        const auto j = static_cast<std::size_t>(rng.integer(0, 14));
        if (w.jss[j] < 5) {
            SurveyWave up = w;
            ++up.jss[j];
            REQUIRE(score_wave(up, config).jss_total > s.jss_total);
        }
        const auto f = static_cast<std::size_t>(rng.integer(0, 3));
        if (w.family_support[f] < 7) {
            SurveyWave up = w;
            ++up.family_support[f];
            REQUIRE(score_wave(up, config).family_support_mean > s.family_support_mean);
        }
    }
}

TEST_CASE("property: validate, serialize, validate is a fixed point") {
    Rng rng(505);
    for (int trial = 0; trial < 5000; ++trial) {
        const SurveyWave w = random_wave(rng);
        const auto first = validate_wave(json(serialize(w)));
        REQUIRE(std::holds_alternative<SurveyWave>(first));
        REQUIRE(std::get<SurveyWave>(first) == w);
        const auto second = validate_wave_text(json(serialize(std::get<SurveyWave>(first))).dump());
        REQUIRE(std::get<SurveyWave>(second) == w);
    }
}

TEST_CASE("scored CSV layout") {
    const auto w = accepted(testing::survey_payload(kUid, 2));
    std::ostringstream out;
    write_scored_header(out);
    write_scored_row(out, w, score_wave(w));
    // pss {2,3,1,2,2,1,3,2,2,1} with items 4,5,7,8 reversed: 2+3+1+2+2+1+1+2+2+1
    CHECK(out.str() ==
          "uid,wave,pss_total,jss_total,role_conflict_total,role_ambiguity_total,family_support_total,"
          "family_support_mean\n" +
              kUid + ",2,17,60,21,12,16,4.00\n");
}

TEST_CASE("cronbach_alpha reference cases") {
    Rng rng(6);
    Eigen::MatrixXd identical(50, 6);
    for (Eigen::Index r = 0; r < 50; ++r) identical.row(r).setConstant(rng.uniform(0, 10));
    CHECK(cronbach_alpha(identical) == 1.0);

    Eigen::MatrixXd likert(200, 4);
    for (Eigen::Index r = 0; r < 200; ++r) likert.row(r).setConstant(static_cast<double>(rng.integer(1, 5)));
    CHECK(cronbach_alpha(likert) == 1.0);

    Eigen::MatrixXd noise(10000, 10);
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = rng.uniform();
    CHECK(std::abs(cronbach_alpha(noise)) <= 0.05);

    CHECK_THROWS_AS(cronbach_alpha(Eigen::MatrixXd::Constant(5, 3, 2.0)), DegenerateVariance);
    CHECK_THROWS_AS(cronbach_alpha(Eigen::MatrixXd::Ones(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(cronbach_alpha(Eigen::MatrixXd::Ones(3, 1)), std::invalid_argument);

    // hand-computed: items {1,2,3},{1,3,2} → var 1 and 1, totals {2,5,5} var 3 → α = 2·(1 − 2/3)
    Eigen::Matrix<double, 3, 2> small;
    small << 1, 1, 2, 3, 3, 2;
    CHECK(cronbach_alpha(small) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(cronbach_alpha(small.cast<float>()) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("property: cronbach_alpha is shift and scale invariant") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = rng.integer(5, 200), k = rng.integer(2, 12);
        Eigen::MatrixXd x(n, k);
        for (Eigen::Index r = 0; r < n; ++r) {
            const double trait = rng.normal();
            for (Eigen::Index c = 0; c < k; ++c) x(r, c) = trait + rng.normal(0, 1.5);
        }
        const double alpha = cronbach_alpha(x);
        const double shift = rng.uniform(-100, 100), scale = rng.uniform(0.01, 100);
        const Eigen::MatrixXd shifted = (x.array() + shift).matrix();
        REQUIRE(std::abs(cronbach_alpha(shifted) - alpha) <= 1e-12 * std::max(1.0, std::abs(alpha)));
        REQUIRE(std::abs(cronbach_alpha(x * scale) - alpha) <= 1e-12 * std::max(1.0, std::abs(alpha)));
    }
}
