#include "scholartrace/analytics/errors.hpp"

namespace scholartrace::analytics {

const char* to_string(AnalyticsErrc code) {
    switch (code) {
        case AnalyticsErrc::TooFewObservations: return "TooFewObservations";
        case AnalyticsErrc::ZeroExpectedCount: return "ZeroExpectedCount";
        case AnalyticsErrc::SingleClass: return "SingleClass";
        case AnalyticsErrc::EmptyTrainingSet: return "EmptyTrainingSet";
        case AnalyticsErrc::KTooLarge: return "KTooLarge";
        case AnalyticsErrc::InvalidArgument: return "InvalidArgument";
        case AnalyticsErrc::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

AnalyticsError::AnalyticsError(AnalyticsErrc code, const std::string& detail)
    : std::runtime_error(std::string{to_string(code)} + ": " + detail), code_(code) {}

}  // namespace scholartrace::analytics
