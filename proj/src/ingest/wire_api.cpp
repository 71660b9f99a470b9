#include "scholartrace/ingest/wire_api.hpp"

#include <json.hpp>

#include "scholartrace/ingest/errors.hpp"

namespace scholartrace::ingest {

namespace {

using nlohmann::ordered_json;

std::string error_line(const IngestError& err) {
    ordered_json out;
    out["error"] = to_string(err.code());
    if (!err.field().empty()) out["field"] = err.field();
    return out.dump();
}

std::string seq_line(const Ack& ack) {
    ordered_json out;
    out["seq"] = ack.seq;
    return out.dump();
}

WireResponse single(int status, std::string line) {
    return WireResponse{status, std::move(line) + "\n", "application/json"};
}

WireResponse error_response(const IngestError& err) {
    return single(http_status_for(err.code()), error_line(err));
}

}  // namespace

int http_status_for(IngestErrc code) {
    switch (code) {
        case IngestErrc::StoreUnavailable: return 503;
        case IngestErrc::UnknownUid: return 404;
        case IngestErrc::DowntimeRejected:
        case IngestErrc::OverlapsExisting:
        case IngestErrc::ConflictsWithEvents:
        case IngestErrc::CollisionRetryExhausted: return 409;
        case IngestErrc::MalformedEvent:
        case IngestErrc::MalformedSurvey:
        case IngestErrc::InvalidArgument: return 400;
    }
    return 500;
}

WireResponse WireApi::handle(std::string_view method, std::string_view path, std::string_view body,
                             const RequestContext& ctx) {
    if (method != "POST") return single(405, R"({"error":"MethodNotAllowed"})");
    try {
        if (path == "/uid") return post_uid(body);
        if (path == "/events") return post_events(body, ctx);
        if (path == "/survey") return post_survey(body);
        if (path == "/downtime") return post_downtime(body);
    } catch (const IngestError& err) {
        return error_response(err);
    }
    return single(404, R"({"error":"NotFound"})");
}

WireResponse WireApi::post_uid(std::string_view body) {
    const auto req = nlohmann::json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) throw IngestError(IngestErrc::InvalidArgument, "body");

    const auto entropy = req.find("entropy");
    if (entropy == req.end() || !entropy->is_string()) {
        throw IngestError(IngestErrc::InvalidArgument, "entropy");
    }
    std::optional<Timestamp> ts;
    if (auto it = req.find("ts"); it != req.end()) {
        if (!it->is_string() || !(ts = parse_iso8601(it->get<std::string>()))) {
            throw IngestError(IngestErrc::InvalidArgument, "ts");
        }
    } else {
        ts = EventStore::system_now();
    }
    std::optional<std::string> presented;
    if (auto it = req.find("uid"); it != req.end() && it->is_string()) presented = it->get<std::string>();

    const Uid uid = store_.allocate_uid(entropy->get_ref<const std::string&>(), ts,
                                        presented ? std::optional<std::string_view>(*presented)
                                                  : std::nullopt);
    ordered_json out;
    out["uid"] = uid.str();
    return single(200, out.dump());
}

WireResponse WireApi::post_events(std::string_view body, const RequestContext& ctx) {
    WireResponse response;
    std::size_t pos = 0;
    bool any_line = false;
    while (pos < body.size()) {
        std::size_t end = body.find('\n', pos);
        if (end == std::string_view::npos) end = body.size();
        std::string_view line = body.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        any_line = true;
        try {
            const Ack ack = store_.submit_event(event_from_line(line, ctx));
            response.body += seq_line(ack) + "\n";
        } catch (const IngestError& err) {
            if (response.status == 200) response.status = http_status_for(err.code());
            response.body += error_line(err) + "\n";
        }
    }
    if (!any_line) throw IngestError(IngestErrc::MalformedEvent, "event");
    return response;
}

WireResponse WireApi::post_survey(std::string_view body) {
    return single(200, seq_line(store_.submit_survey(body)));
}

WireResponse WireApi::post_downtime(std::string_view body) {
    const auto req = nlohmann::json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) throw IngestError(IngestErrc::InvalidArgument, "body");
    const auto read = [&](const char* key) {
        auto it = req.find(key);
        std::optional<Timestamp> ts;
        if (it == req.end() || !it->is_string() || !(ts = parse_iso8601(it->get<std::string>()))) {
            throw IngestError(IngestErrc::InvalidArgument, key);
        }
        return *ts;
    };
    return single(200, seq_line(store_.register_downtime(TimeWindow{read("start"), read("end")})));
}

}  // namespace scholartrace::ingest
