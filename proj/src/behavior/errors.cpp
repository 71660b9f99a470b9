#include "scholartrace/behavior/errors.hpp"

namespace scholartrace::behavior {

const char* to_string(BehaviorErrc code) {
    switch (code) {
        case BehaviorErrc::EmptyInput: return "EmptyInput";
        case BehaviorErrc::MisalignedBucket: return "MisalignedBucket";
    }
    return "Unknown";
}

BehaviorError::BehaviorError(BehaviorErrc code, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string{to_string(code)}
                                        : std::string{to_string(code)} + ": " + detail),
      code_(code) {}

}  // namespace scholartrace::behavior
