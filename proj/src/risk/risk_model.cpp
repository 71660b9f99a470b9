#include "scholartrace/risk/risk_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace scholartrace::risk {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) { throw RiskError(RiskErrc::SchemaError, what); }

bool known_predictor(const std::string& name) {
    return std::any_of(std::begin(kPredictors), std::end(kPredictors), [&](const char* p) { return name == p; });
}

double finite_number(const json& v, const std::string& what) {
    if (!v.is_number()) schema(what + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema(what + " must be finite");
    return d;
}

}  // namespace

const char* to_string(RiskErrc code) {
    switch (code) {
        case RiskErrc::SchemaError: return "SchemaError";
        case RiskErrc::UnknownPredictor: return "UnknownPredictor";
        case RiskErrc::TransformDomain: return "TransformDomain";
    }
    return "Unknown";
}

RiskError::RiskError(RiskErrc code, const std::string& detail)
    : std::runtime_error(std::string{to_string(code)} + ": " + detail), code_(code) {}

RiskProfile RiskProfile::from(const psychometrics::BasicInfo& b) {
    return RiskProfile{static_cast<double>(b.age), b.bmi, b.sbp,
                       b.on_antihypertensives ? 1.0 : 0.0, b.smoker ? 1.0 : 0.0, b.diabetic ? 1.0 : 0.0,
                       b.sex == psychometrics::Sex::Male ? 1.0 : 0.0};
}

double RiskProfile::value(const std::string& predictor) const {
    if (predictor == "age") return age;
    if (predictor == "bmi") return bmi;
    if (predictor == "sbp") return sbp;
    if (predictor == "on_antihypertensives") return on_antihypertensives;
    if (predictor == "smoker") return smoker;
    if (predictor == "diabetic") return diabetic;
    if (predictor == "sex") return sex;
    throw RiskError(RiskErrc::UnknownPredictor, predictor);
}

RiskModel load_model(const json& doc) {
    if (!doc.is_object()) schema("model must be an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "name" && key != "coefficients" && key != "transforms" && key != "s0" && key != "mean_lp") {
            schema("unknown key " + key);
        }
    }
    for (const char* key : {"name", "coefficients", "transforms", "s0", "mean_lp"}) {
        if (!doc.contains(key)) schema(std::string{"missing key "} + key);
    }
    RiskModel m;
    if (!doc["name"].is_string()) schema("name must be a string");
    m.name = doc["name"].get<std::string>();

    if (!doc["transforms"].is_object()) schema("transforms must be an object");
    for (const auto& [predictor, t] : doc["transforms"].items()) {
        if (!known_predictor(predictor)) throw RiskError(RiskErrc::UnknownPredictor, predictor);
        if (t == "identity") m.transforms[predictor] = Transform::Identity;
        else if (t == "log") m.transforms[predictor] = Transform::Log;
        else schema("transform for " + predictor + " must be \"identity\" or \"log\"");
    }

    if (!doc["coefficients"].is_object()) schema("coefficients must be an object");
    for (const auto& [predictor, beta] : doc["coefficients"].items()) {
        if (!known_predictor(predictor)) throw RiskError(RiskErrc::UnknownPredictor, predictor);
        if (!m.transforms.contains(predictor)) schema("no transform for " + predictor);
        m.coefficients.emplace_back(predictor, finite_number(beta, "coefficient " + predictor));
    }

    m.s0 = finite_number(doc["s0"], "s0");
    if (!(m.s0 > 0.0 && m.s0 < 1.0)) schema("s0 must lie strictly between 0 and 1");
    m.mean_lp = finite_number(doc["mean_lp"], "mean_lp");
    return m;
}

RiskModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) schema("cannot open " + path.string());
    const auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) schema(path.string() + " is not valid JSON");
    return load_model(doc);
}

nlohmann::ordered_json to_json(const RiskModel& m) {
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["coefficients"] = nlohmann::ordered_json::object();
    for (const auto& [p, beta] : m.coefficients) j["coefficients"][p] = beta;
    j["transforms"] = nlohmann::ordered_json::object();
    for (const auto& [p, t] : m.transforms) j["transforms"][p] = t == Transform::Log ? "log" : "identity";
    j["s0"] = m.s0;
    j["mean_lp"] = m.mean_lp;
    return j;
}

double linear_predictor(const RiskProfile& p, const RiskModel& m) {
    double lp = 0.0;
    for (const auto& [predictor, beta] : m.coefficients) {
        double x = p.value(predictor);
        if (m.transforms.at(predictor) == Transform::Log) {
            if (!(x > 0.0)) throw RiskError(RiskErrc::TransformDomain, "log of non-positive " + predictor);
            x = std::log(x);
        }
        lp += beta * x;
    }
    return lp;
}

double risk_score(const RiskProfile& p, const RiskModel& m) {
    // pow(s0, 1) is exact, so L == mean_lp gives exactly 1 - s0
    return 1.0 - std::pow(m.s0, std::exp(linear_predictor(p, m) - m.mean_lp));
}

}  // namespace scholartrace::risk
