#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::psychometrics {

enum class Education { None, Primary, Secondary, Bachelor, Master, Doctorate };
enum class Sex { Male, Female };

const char* to_string(Education e);
const char* to_string(Sex s);
std::optional<Education> parse_education(std::string_view s);
std::optional<Sex> parse_sex(std::string_view s);

struct BasicInfo {
    int age = 0;       ///< years, 18..100
    double bmi = 0;    ///< kg/m², 10..60
    Education education = Education::None;
    double sbp = 0;    ///< mmHg, 70..250
    bool on_antihypertensives = false;
    bool smoker = false;
    bool diabetic = false;
    Sex sex = Sex::Male;

    friend bool operator==(const BasicInfo&, const BasicInfo&) = default;
};

inline constexpr std::size_t kPssItems = 10;
inline constexpr std::size_t kJssItems = 15;
inline constexpr std::size_t kRoleConflictItems = 8;
inline constexpr std::size_t kRoleAmbiguityItems = 6;
inline constexpr std::size_t kFamilySupportItems = 4;

struct SurveyWave {
    ingest::Uid uid;
    int wave_index = 0;
    Timestamp submitted{};
    BasicInfo basic;
    std::array<int, kPssItems> pss{};                        ///< 0..4
    std::array<int, kJssItems> jss{};                        ///< 1..5
    std::array<int, kRoleConflictItems> role_conflict{};     ///< 1..5
    std::array<int, kRoleAmbiguityItems> role_ambiguity{};   ///< 1..5
    std::array<int, kFamilySupportItems> family_support{};   ///< 1..7

    friend bool operator==(const SurveyWave&, const SurveyWave&) = default;
};

enum class RejectReason { MissingItem, OutOfRange };
const char* to_string(RejectReason r);

/// `field` names the first offending wire field, e.g. "sbp" or "pss[4]" (0-based index).
struct Rejection {
    RejectReason reason;
    std::string field;

    friend bool operator==(const Rejection&, const Rejection&) = default;
};

using ValidationResult = std::variant<SurveyWave, Rejection>;

/// Checks a survey payload with keys uid, wave, basic, pss, jss, rc, ra, fs.
/// Fields are checked in that order, basic members in declaration order, and
/// items in array order; the first problem wins. Unknown keys are ignored.
ValidationResult validate_wave(const nlohmann::json& payload, Timestamp submitted = {});
/// Raw text form; text that is not JSON is rejected as MissingItem("payload").
ValidationResult validate_wave_text(std::string_view payload_text, Timestamp submitted = {});

/// Wire form accepted by validate_wave.
nlohmann::ordered_json serialize(const SurveyWave& wave);

}  // namespace scholartrace::psychometrics
