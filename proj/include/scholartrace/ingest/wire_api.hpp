#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "scholartrace/ingest/access_event.hpp"
#include "scholartrace/ingest/errors.hpp"
#include "scholartrace/ingest/event_store.hpp"

namespace scholartrace::ingest {

struct WireResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/x-ndjson";
};

/// Transport-independent request handling for the intake endpoints:
///
///   POST /uid       {"entropy": str, "ts"?: iso8601, "uid"?: presented uid} -> {"uid": str}
///   POST /events    newline-delimited event objects -> one result line per input line
///   POST /survey    survey payload object -> {"seq": n}
///   POST /downtime  {"start": iso8601, "end": iso8601} -> {"seq": n}
///
/// Errors come back as {"error": code, "field"?: name}.
class WireApi {
public:
    explicit WireApi(EventStore& store) : store_(store) {}

    WireResponse handle(std::string_view method, std::string_view path, std::string_view body,
                        const RequestContext& ctx = {});

private:
    WireResponse post_uid(std::string_view body);
    WireResponse post_events(std::string_view body, const RequestContext& ctx);
    WireResponse post_survey(std::string_view body);
    WireResponse post_downtime(std::string_view body);

    EventStore& store_;
};

int http_status_for(IngestErrc code);

/// HTTP front end for WireApi. The peer address and User-Agent header fill in
/// "ip"/"ua" when an event omits them.
class HttpFrontend {
public:
    explicit HttpFrontend(WireApi& api);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds the socket; port 0 picks a free one. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called from another thread.
    bool run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace scholartrace::ingest
