#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scholartrace/psychometrics/survey.hpp"

namespace scholartrace::risk {

enum class RiskErrc { SchemaError, UnknownPredictor, TransformDomain };
const char* to_string(RiskErrc code);

class RiskError : public std::runtime_error {
public:
    RiskError(RiskErrc code, const std::string& detail);
    RiskErrc code() const noexcept { return code_; }

private:
    RiskErrc code_;
};

enum class Transform { Identity, Log };

/// Predictor names a model may reference.
inline constexpr const char* kPredictors[] = {"age", "bmi", "sbp", "on_antihypertensives", "smoker", "diabetic", "sex"};

struct RiskModel {
    std::string name;
    std::vector<std::pair<std::string, double>> coefficients;  ///< sorted by predictor name
    std::map<std::string, Transform> transforms;
    double s0 = 0.9;       ///< baseline survival, strictly inside (0, 1)
    double mean_lp = 0.0;  ///< mean linear predictor
};

/// Booleans are 0/1; sex is 1 for male, 0 for female.
struct RiskProfile {
    double age = 0;
    double bmi = 0;
    double sbp = 0;
    double on_antihypertensives = 0;
    double smoker = 0;
    double diabetic = 0;
    double sex = 0;

    static RiskProfile from(const psychometrics::BasicInfo& info);
    /// Throws RiskError(UnknownPredictor).
    double value(const std::string& predictor) const;
};

/// Document keys: "name", "coefficients" (object name → β), "transforms"
/// (object name → "identity" | "log"), "s0", "mean_lp". Unknown keys are a SchemaError.
RiskModel load_model(const nlohmann::json& doc);
RiskModel load_model_file(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const RiskModel& m);

double linear_predictor(const RiskProfile& p, const RiskModel& m);

/// 1 − s0^exp(L − mean_lp). Throws RiskError(TransformDomain) when a log
/// transform meets a non-positive value.
double risk_score(const RiskProfile& p, const RiskModel& m);

}  // namespace scholartrace::risk
