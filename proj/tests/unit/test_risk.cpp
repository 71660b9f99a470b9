#include <doctest.h>

#include <cmath>

#include "scholartrace/common/random.hpp"
#include "scholartrace/risk/risk_model.hpp"

using namespace scholartrace;
using namespace scholartrace::risk;
using nlohmann::json;

namespace {

json minimal() {
    return json{{"name", "m"}, {"coefficients", {{"sbp", 0.02}}}, {"transforms", {{"sbp", "identity"}}},
                {"s0", 0.9}, {"mean_lp", 2.4}};
}

RiskErrc load_error(const json& doc) {
    try {
        load_model(doc);
    } catch (const RiskError& e) {
        return e.code();
    }
    FAIL("load_model accepted an invalid document");
    return RiskErrc::SchemaError;
}

RiskProfile random_profile(Rng& rng) {
    return RiskProfile{static_cast<double>(rng.integer(18, 100)), rng.uniform(10, 60), rng.uniform(70, 250),
                       static_cast<double>(rng.bernoulli(0.5)), static_cast<double>(rng.bernoulli(0.5)),
                       static_cast<double>(rng.bernoulli(0.5)), static_cast<double>(rng.bernoulli(0.5))};
}

// Coefficients scaled by each predictor's range and mean_lp centred on a
// reference profile, so |L - mean_lp| stays below about 7 and s0^exp(.) never
// saturates in double precision.
RiskModel random_model(Rng& rng) {
    RiskModel m;
    m.name = "random";
    const RiskProfile reference{50, 25, 130, 0.5, 0.5, 0.5, 0.5};
    for (const char* p : kPredictors) {
        const std::string name{p};
        const bool continuous = name == "age" || name == "bmi" || name == "sbp";
        const double range = name == "age" ? 82 : name == "bmi" ? 50 : name == "sbp" ? 180 : 1;
        const bool log = continuous && rng.bernoulli(0.5);
        m.transforms[p] = log ? Transform::Log : Transform::Identity;
        m.coefficients.emplace_back(p, rng.uniform(-1, 1) / (log ? 2.0 : range));
    }
    m.s0 = rng.uniform(0.8, 0.99);
    m.mean_lp = 0;
    m.mean_lp = linear_predictor(reference, m) + rng.uniform(-1, 1);
    return m;
}

}  // namespace

TEST_CASE("load_model validates the document") {
    const auto m = load_model(minimal());
    CHECK(m.name == "m");
    CHECK(m.coefficients == std::vector<std::pair<std::string, double>>{{"sbp", 0.02}});
    CHECK(m.s0 == 0.9);
    CHECK(load_model(json(to_json(m))).coefficients == m.coefficients);

    auto doc = minimal();
    doc["s0"] = 1.2;
    CHECK(load_error(doc) == RiskErrc::SchemaError);
    doc["s0"] = 1.0;
    CHECK(load_error(doc) == RiskErrc::SchemaError);
    doc["s0"] = 0.0;
    CHECK(load_error(doc) == RiskErrc::SchemaError);

    doc = minimal();
    doc["coefficients"]["cholesterol"] = 0.1;
    doc["transforms"]["cholesterol"] = "identity";
    CHECK(load_error(doc) == RiskErrc::UnknownPredictor);

    doc = minimal();
    doc["coefficients"]["age"] = 0.1;
    CHECK(load_error(doc) == RiskErrc::SchemaError);  // no transform for age

    doc = minimal();
    doc["transforms"]["sbp"] = "sqrt";
    CHECK(load_error(doc) == RiskErrc::SchemaError);

    doc = minimal();
    doc.erase("mean_lp");
    CHECK(load_error(doc) == RiskErrc::SchemaError);

    doc = minimal();
    doc["extra"] = 1;
    CHECK(load_error(doc) == RiskErrc::SchemaError);
}

TEST_CASE("risk_score reference values") {
    auto m = load_model(minimal());
    RiskProfile p;
    p.sbp = 120;
    CHECK(linear_predictor(p, m) == 2.4);
    CHECK(risk_score(p, m) == 1.0 - 0.9);
    CHECK(risk_score(p, m) == doctest::Approx(0.1).epsilon(1e-15));

    m.coefficients = {{"sbp", 0.0}};
    m.mean_lp = 0.0;
    CHECK(risk_score(p, m) == 1.0 - m.s0);

    // independent evaluation of the closed form
    m = load_model(minimal());
    p.sbp = 150;
    CHECK(risk_score(p, m) == doctest::Approx(1.0 - std::pow(0.9, std::exp(0.02 * 150 - 2.4))).epsilon(1e-14));
    CHECK(risk_score(p, m) > risk_score(RiskProfile{0, 0, 120, 0, 0, 0, 0}, m));
}

TEST_CASE("risk_score rejects log of non-positive values") {
    auto doc = minimal();
    doc["coefficients"]["smoker"] = 0.3;
    doc["transforms"]["smoker"] = "log";
    const auto m = load_model(doc);
    RiskProfile p;
    p.sbp = 120;
    try {
        risk_score(p, m);
        FAIL("expected TransformDomain");
    } catch (const RiskError& e) {
        CHECK(e.code() == RiskErrc::TransformDomain);
    }
}

TEST_CASE("synthetic example config loads and scores the fixture profile") {
    const auto m = load_model_file(std::string(ST_SOURCE_DIR) + "/config/risk_synthetic_example.json");
    psychometrics::BasicInfo b{35, 23.5, psychometrics::Education::Doctorate, 120, false, false, false,
                               psychometrics::Sex::Male};
    const double lp = 0.045 * 35 + 0.6 * std::log(23.5) + 1.2 * std::log(120.0) + 0.35;
    CHECK(risk_score(RiskProfile::from(b), m) == doctest::Approx(1.0 - std::pow(0.88, std::exp(lp - 10.0))));
}

TEST_CASE("property: risk is monotone in positively weighted predictors and stays in (0,1)") {
    Rng rng(31);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto m = random_model(rng);
        const auto p = random_profile(rng);
        const double r = risk_score(p, m);
        REQUIRE(r > 0.0);
        REQUIRE(r < 1.0);
        for (const auto& [name, beta] : m.coefficients) {
            RiskProfile q = p;
            const double step = rng.uniform(0.0, 10.0);
            if (name == "age") q.age += step;
            else if (name == "bmi") q.bmi += step;
            else if (name == "sbp") q.sbp += step;
            else if (name == "on_antihypertensives") q.on_antihypertensives = 1;
            else if (name == "smoker") q.smoker = 1;
            else if (name == "diabetic") q.diabetic = 1;
            else q.sex = 1;
            const double rq = risk_score(q, m);
            if (beta > 0) REQUIRE(rq >= r);
            if (beta < 0) REQUIRE(rq <= r);
        }
    }
}

TEST_CASE("property: shifting the linear predictor and its mean together leaves risk unchanged") {
    Rng rng(32);
    for (int trial = 0; trial < 2000; ++trial) {
        auto m = random_model(rng);
        const auto p = random_profile(rng);
        const double r = risk_score(p, m);
        const double lp = linear_predictor(p, m);
        auto doubled = m;
        for (auto& [name, beta] : doubled.coefficients) beta *= 2;
        doubled.mean_lp = m.mean_lp + lp;  // keeps L − mean fixed: 2L − (mean + L) = L − mean
        REQUIRE(risk_score(p, doubled) == doctest::Approx(r).epsilon(1e-12));
    }
}
