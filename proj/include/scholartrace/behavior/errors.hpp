#pragma once

#include <stdexcept>
#include <string>

namespace scholartrace::behavior {

enum class BehaviorErrc {
    EmptyInput,
    MisalignedBucket,
};

const char* to_string(BehaviorErrc code);

class BehaviorError : public std::runtime_error {
public:
    explicit BehaviorError(BehaviorErrc code, const std::string& detail = {});
    BehaviorErrc code() const noexcept { return code_; }

private:
    BehaviorErrc code_;
};

}  // namespace scholartrace::behavior
