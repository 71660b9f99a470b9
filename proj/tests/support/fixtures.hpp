#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "scholartrace/common/time.hpp"

namespace scholartrace::testing {

inline Timestamp at(const char* iso) { return *parse_iso8601(iso); }

/// A complete, in-range 43-item survey payload.
inline nlohmann::ordered_json survey_payload(const std::string& uid, int wave = 0) {
    nlohmann::ordered_json p;
    p["uid"] = uid;
    p["wave"] = wave;
    p["basic"] = {{"age", 35},       {"bmi", 23.5},         {"education", "doctorate"},
                  {"sbp", 120},      {"antihypertensive", false}, {"smoker", false},
                  {"diabetic", false}, {"sex", "male"}};
    p["pss"] = std::vector<int>{2, 3, 1, 2, 2, 1, 3, 2, 2, 1};
    p["jss"] = std::vector<int>(15, 4);
    p["rc"] = std::vector<int>{1, 2, 3, 4, 5, 1, 2, 3};
    p["ra"] = std::vector<int>(6, 2);
    p["fs"] = std::vector<int>{1, 3, 5, 7};
    return p;
}

}  // namespace scholartrace::testing
