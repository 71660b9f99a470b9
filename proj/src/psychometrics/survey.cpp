#include "scholartrace/psychometrics/survey.hpp"

#include <cmath>

namespace scholartrace::psychometrics {

namespace {

using nlohmann::json;

constexpr std::pair<Education, const char*> kEducation[] = {
    {Education::None, "none"},         {Education::Primary, "primary"}, {Education::Secondary, "secondary"},
    {Education::Bachelor, "bachelor"}, {Education::Master, "master"},   {Education::Doctorate, "doctorate"},
};

struct Reject {
    Rejection r;
};

[[noreturn]] void missing(std::string field) { throw Reject{{RejectReason::MissingItem, std::move(field)}}; }
[[noreturn]] void out_of_range(std::string field) { throw Reject{{RejectReason::OutOfRange, std::move(field)}}; }

const json& require(const json& obj, const char* key, const std::string& name) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) missing(name);
    return *it;
}

// Integers only; 3.0 is accepted, 3.5 and "3" are not.
int integer_in(const json& v, int lo, int hi, const std::string& name) {
    long long x = 0;
    if (v.is_number_integer()) {
        x = v.get<long long>();
    } else if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 1e9) out_of_range(name);
        x = static_cast<long long>(d);
    } else {
        out_of_range(name);
    }
    if (x < lo || x > hi) out_of_range(name);
    return static_cast<int>(x);
}

double real_in(const json& v, double lo, double hi, const std::string& name) {
    if (!v.is_number()) out_of_range(name);
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < lo || d > hi) out_of_range(name);
    return d;
}

bool boolean(const json& v, const std::string& name) {
    if (!v.is_boolean()) out_of_range(name);
    return v.get<bool>();
}

template <std::size_t N>
std::array<int, N> items(const json& payload, const char* key, int lo, int hi) {
    const json& arr = require(payload, key, key);
    if (!arr.is_array()) out_of_range(key);
    std::array<int, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        const std::string name = std::string{key} + "[" + std::to_string(i) + "]";
        if (i >= arr.size() || arr[i].is_null()) missing(name);
        out[i] = integer_in(arr[i], lo, hi, name);
    }
    if (arr.size() > N) out_of_range(std::string{key} + "[" + std::to_string(N) + "]");
    return out;
}

BasicInfo basic_info(const json& payload) {
    const json& b = require(payload, "basic", "basic");
    if (!b.is_object()) out_of_range("basic");
    BasicInfo info;
    info.age = integer_in(require(b, "age", "age"), 18, 100, "age");
    info.bmi = real_in(require(b, "bmi", "bmi"), 10.0, 60.0, "bmi");
    const json& edu = require(b, "education", "education");
    const auto e = edu.is_string() ? parse_education(edu.get<std::string>()) : std::nullopt;
    if (!e) out_of_range("education");
    info.education = *e;
    info.sbp = real_in(require(b, "sbp", "sbp"), 70.0, 250.0, "sbp");
    info.on_antihypertensives = boolean(require(b, "antihypertensive", "antihypertensive"), "antihypertensive");
    info.smoker = boolean(require(b, "smoker", "smoker"), "smoker");
    info.diabetic = boolean(require(b, "diabetic", "diabetic"), "diabetic");
    const json& sx = require(b, "sex", "sex");
    const auto s = sx.is_string() ? parse_sex(sx.get<std::string>()) : std::nullopt;
    if (!s) out_of_range("sex");
    info.sex = *s;
    return info;
}

}  // namespace

const char* to_string(Education e) {
    for (const auto& [value, name] : kEducation) {
        if (value == e) return name;
    }
    return "none";
}

const char* to_string(Sex s) { return s == Sex::Male ? "male" : "female"; }

std::optional<Education> parse_education(std::string_view s) {
    for (const auto& [value, name] : kEducation) {
        if (s == name) return value;
    }
    return std::nullopt;
}

std::optional<Sex> parse_sex(std::string_view s) {
    if (s == "male") return Sex::Male;
    if (s == "female") return Sex::Female;
    return std::nullopt;
}

const char* to_string(RejectReason r) { return r == RejectReason::MissingItem ? "MissingItem" : "OutOfRange"; }

ValidationResult validate_wave(const json& payload, Timestamp submitted) {
    try {
        if (!payload.is_object()) missing("payload");
        SurveyWave w;
        const json& uid = require(payload, "uid", "uid");
        const auto parsed = uid.is_string() ? ingest::Uid::parse(uid.get<std::string>()) : std::nullopt;
        if (!parsed) out_of_range("uid");
        w.uid = *parsed;
        w.wave_index = integer_in(require(payload, "wave", "wave"), 0, 1'000'000, "wave");
        w.submitted = submitted;
        w.basic = basic_info(payload);
        w.pss = items<kPssItems>(payload, "pss", 0, 4);
        w.jss = items<kJssItems>(payload, "jss", 1, 5);
        w.role_conflict = items<kRoleConflictItems>(payload, "rc", 1, 5);
        w.role_ambiguity = items<kRoleAmbiguityItems>(payload, "ra", 1, 5);
        w.family_support = items<kFamilySupportItems>(payload, "fs", 1, 7);
        return w;
    } catch (const Reject& r) {
        return r.r;
    }
}

ValidationResult validate_wave_text(std::string_view payload_text, Timestamp submitted) {
    const auto parsed = json::parse(payload_text, nullptr, false);
    if (parsed.is_discarded()) return Rejection{RejectReason::MissingItem, "payload"};
    return validate_wave(parsed, submitted);
}

nlohmann::ordered_json serialize(const SurveyWave& w) {
    nlohmann::ordered_json j;
    j["uid"] = w.uid.str();
    j["wave"] = w.wave_index;
    j["basic"] = {{"age", w.basic.age},
                  {"bmi", w.basic.bmi},
                  {"education", to_string(w.basic.education)},
                  {"sbp", w.basic.sbp},
                  {"antihypertensive", w.basic.on_antihypertensives},
                  {"smoker", w.basic.smoker},
                  {"diabetic", w.basic.diabetic},
                  {"sex", to_string(w.basic.sex)}};
    j["pss"] = w.pss;
    j["jss"] = w.jss;
    j["rc"] = w.role_conflict;
    j["ra"] = w.role_ambiguity;
    j["fs"] = w.family_support;
    return j;
}

}  // namespace scholartrace::psychometrics
