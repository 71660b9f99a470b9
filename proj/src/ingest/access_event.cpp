#include "scholartrace/ingest/access_event.hpp"

#include <arpa/inet.h>

#include <array>

#include "scholartrace/common/text.hpp"
#include "scholartrace/ingest/errors.hpp"

namespace scholartrace::ingest {

namespace {

[[noreturn]] void malformed(const std::string& field) {
    throw IngestError(IngestErrc::MalformedEvent, field);
}

}  // namespace

bool is_valid_ip(std::string_view ip) {
    if (ip.empty() || ip.size() > 45) return false;
    const std::string text{ip};
    std::array<unsigned char, 16> buf{};
    return inet_pton(AF_INET, text.c_str(), buf.data()) == 1 ||
           inet_pton(AF_INET6, text.c_str(), buf.data()) == 1;
}

void validate_event(const AccessEvent& event, Timestamp server_now) {
    if (!event.keyword && !event.pmid) malformed("keyword");
    if (event.keyword) {
        if (!is_valid_utf8(*event.keyword) || utf8_length(*event.keyword) > kMaxKeywordChars) {
            malformed("keyword");
        }
    }
    if (event.pmid && (*event.pmid == 0 || *event.pmid > kMaxPmid)) malformed("pmid");
    if (!is_valid_ip(event.ip)) malformed("ip");
    if (!is_valid_utf8(event.ua) || utf8_length(event.ua) > kMaxUaChars) malformed("ua");
    if (event.ts > server_now + kClockSkewAllowance) malformed("ts");
}

AccessEvent event_from_wire(const nlohmann::json& object, const RequestContext& ctx) {
    if (!object.is_object()) malformed("event");
    for (const auto& [key, value] : object.items()) {
        if (key != "uid" && key != "ts" && key != "keyword" && key != "pmid" && key != "ip" &&
            key != "ua") {
            malformed(key);
        }
    }

    const auto uid_it = object.find("uid");
    if (uid_it == object.end() || !uid_it->is_string()) malformed("uid");
    auto uid = Uid::parse(uid_it->get_ref<const std::string&>());
    if (!uid) malformed("uid");

    const auto ts_it = object.find("ts");
    if (ts_it == object.end() || !ts_it->is_string()) malformed("ts");
    auto ts = parse_iso8601(ts_it->get_ref<const std::string&>());
    if (!ts) malformed("ts");

    AccessEvent event{*uid, *ts, std::nullopt, std::nullopt, {}, {}};

    if (auto it = object.find("keyword"); it != object.end() && !it->is_null()) {
        if (!it->is_string()) malformed("keyword");
        event.keyword = it->get<std::string>();
    }
    if (auto it = object.find("pmid"); it != object.end() && !it->is_null()) {
        if (!it->is_number_integer()) malformed("pmid");
        const auto value = it->get<std::int64_t>();
        if (value <= 0 || value > kMaxPmid) malformed("pmid");
        event.pmid = static_cast<std::uint32_t>(value);
    }

    if (auto it = object.find("ip"); it != object.end()) {
        if (!it->is_string()) malformed("ip");
        event.ip = it->get<std::string>();
    } else if (ctx.remote_ip) {
        event.ip = *ctx.remote_ip;
    } else {
        malformed("ip");
    }

    if (auto it = object.find("ua"); it != object.end()) {
        if (!it->is_string()) malformed("ua");
        event.ua = it->get<std::string>();
    } else if (ctx.user_agent) {
        event.ua = *ctx.user_agent;
    } else {
        malformed("ua");
    }
    return event;
}

AccessEvent event_from_line(std::string_view line, const RequestContext& ctx) {
    auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded()) malformed("event");
    return event_from_wire(parsed, ctx);
}

nlohmann::ordered_json event_to_wire(const AccessEvent& event) {
    nlohmann::ordered_json out;
    out["uid"] = event.uid.str();
    out["ts"] = format_iso8601(event.ts);
    out["keyword"] = event.keyword ? nlohmann::ordered_json(*event.keyword) : nullptr;
    out["pmid"] = event.pmid ? nlohmann::ordered_json(*event.pmid) : nullptr;
    out["ip"] = event.ip;
    out["ua"] = event.ua;
    return out;
}

}  // namespace scholartrace::ingest
