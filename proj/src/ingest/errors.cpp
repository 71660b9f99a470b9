#include "scholartrace/ingest/errors.hpp"

namespace scholartrace::ingest {

const char* to_string(IngestErrc code) {
    switch (code) {
        case IngestErrc::StoreUnavailable: return "StoreUnavailable";
        case IngestErrc::CollisionRetryExhausted: return "CollisionRetryExhausted";
        case IngestErrc::UnknownUid: return "UnknownUid";
        case IngestErrc::MalformedEvent: return "MalformedEvent";
        case IngestErrc::MalformedSurvey: return "MalformedSurvey";
        case IngestErrc::DowntimeRejected: return "DowntimeRejected";
        case IngestErrc::OverlapsExisting: return "OverlapsExisting";
        case IngestErrc::ConflictsWithEvents: return "ConflictsWithEvents";
        case IngestErrc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

std::string describe(IngestErrc code, const std::string& field) {
    std::string msg = to_string(code);
    if (!field.empty()) msg += "(" + field + ")";
    return msg;
}

}  // namespace

IngestError::IngestError(IngestErrc code, std::string field)
    : std::runtime_error(describe(code, field)), code_(code), field_(std::move(field)) {}

}  // namespace scholartrace::ingest
