#include <httplib.h>

#include "scholartrace/ingest/wire_api.hpp"

namespace scholartrace::ingest {

struct HttpFrontend::Impl {
    explicit Impl(WireApi& a) : api(a) {}
    WireApi& api;
    httplib::Server server;
};

HttpFrontend::HttpFrontend(WireApi& api) : impl_(std::make_unique<Impl>(api)) {
    const auto route = [this](const httplib::Request& req, httplib::Response& res) {
        RequestContext ctx;
        ctx.remote_ip = req.remote_addr;
        if (req.has_header("User-Agent")) ctx.user_agent = req.get_header_value("User-Agent");
        const WireResponse out = impl_->api.handle(req.method, req.path, req.body, ctx);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    for (const char* path : {"/uid", "/events", "/survey", "/downtime"}) impl_->server.Post(path, route);
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::run() { return impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

}  // namespace scholartrace::ingest
