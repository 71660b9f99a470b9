#pragma once

#include <stdexcept>
#include <string>

namespace scholartrace::analytics {

enum class AnalyticsErrc {
    TooFewObservations,
    ZeroExpectedCount,
    SingleClass,
    EmptyTrainingSet,
    KTooLarge,
    InvalidArgument,
    NoConvergence,
};

const char* to_string(AnalyticsErrc code);

class AnalyticsError : public std::runtime_error {
public:
    AnalyticsError(AnalyticsErrc code, const std::string& detail);
    AnalyticsErrc code() const noexcept { return code_; }

private:
    AnalyticsErrc code_;
};

}  // namespace scholartrace::analytics
