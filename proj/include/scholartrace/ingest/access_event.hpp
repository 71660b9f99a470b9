#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scholartrace/common/time.hpp"
#include "scholartrace/ingest/uid.hpp"

namespace scholartrace::ingest {

inline constexpr std::size_t kMaxKeywordChars = 512;
inline constexpr std::size_t kMaxUaChars = 1024;
inline constexpr std::uint32_t kMaxPmid = 999'999'999;
inline constexpr Seconds kClockSkewAllowance{300};

/// One PubMed access: who, when, what was searched or opened, and from where.
struct AccessEvent {
    Uid uid;
    Timestamp ts;
    std::optional<std::string> keyword;
    std::optional<std::uint32_t> pmid;
    std::string ip;
    std::string ua;

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

bool is_valid_ip(std::string_view ip);

/// Checks every field-level invariant. Throws IngestError(MalformedEvent, field).
void validate_event(const AccessEvent& event, Timestamp server_now);

/// Values the server attaches when the client omits them (request peer address, User-Agent header).
struct RequestContext {
    std::optional<std::string> remote_ip;
    std::optional<std::string> user_agent;
};

/// Decodes one wire object with keys exactly "uid","ts","keyword","pmid","ip","ua".
/// Structural problems throw IngestError(MalformedEvent, field); range checks are
/// left to validate_event.
AccessEvent event_from_wire(const nlohmann::json& object, const RequestContext& ctx = {});
AccessEvent event_from_line(std::string_view line, const RequestContext& ctx = {});

nlohmann::ordered_json event_to_wire(const AccessEvent& event);

}  // namespace scholartrace::ingest
