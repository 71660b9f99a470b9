#pragma once

#include <stdexcept>
#include <string>

namespace scholartrace::ingest {

enum class IngestErrc {
    StoreUnavailable,
    CollisionRetryExhausted,
    UnknownUid,
    MalformedEvent,
    MalformedSurvey,
    DowntimeRejected,
    OverlapsExisting,
    ConflictsWithEvents,
    InvalidArgument,
};

const char* to_string(IngestErrc code);

/// Raised by every intake operation. `field()` names the offending wire field
/// for MalformedEvent and MalformedSurvey, and is empty otherwise.
class IngestError : public std::runtime_error {
public:
    IngestError(IngestErrc code, std::string field = {});

    IngestErrc code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    IngestErrc code_;
    std::string field_;
};

}  // namespace scholartrace::ingest
