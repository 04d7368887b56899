#include "pai/review_server.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/serialization.hpp"

namespace pai {

using nlohmann::json;

struct ReviewServer::Impl {
    std::shared_ptr<ReviewStore> store;
    ReviewServerOptions options;
    httplib::Server server;
    std::thread worker;

    void reply(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    bool authorized(const httplib::Request& req) const {
        if (!options.bearer_token) return true;
        return req.get_header_value("Authorization") == "Bearer " + *options.bearer_token;
    }

    bool need_store(httplib::Response& res) {
        if (store) return true;
        reply(res, 409, {{"error", "no dataset loaded"}});
        return false;
    }

    void routes() {
        server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", options.cors_origin);
            res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization");
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            if (req.method == "OPTIONS") {
                res.status = 204;
                return httplib::Server::HandlerResponse::Handled;
            }
            const bool api = req.path == "/queue" || req.path == "/item" || req.path == "/decisions" ||
                             req.path == "/progress";
            if (api && !authorized(req)) {
                reply(res, 401, {{"error", "missing or wrong bearer token"}});
                return httplib::Server::HandlerResponse::Handled;
            }
            return httplib::Server::HandlerResponse::Unhandled;
        });

        server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            reply(res, 200, {{"status", "ok"}, {"dataset", store != nullptr}});
        });

        server.Get("/queue", [this](const httplib::Request& req, httplib::Response& res) {
            if (!need_store(res)) return;
            std::size_t limit = 20;
            if (req.has_param("limit")) {
                try {
                    const auto v = std::stol(req.get_param_value("limit"));
                    if (v < 1 || v > 1000) throw std::out_of_range("limit");
                    limit = static_cast<std::size_t>(v);
                } catch (const std::exception&) {
                    reply(res, 400, {{"error", "limit must be an integer in [1, 1000]"}});
                    return;
                }
            }
            const auto filter = parse_status_filter(req.get_param_value("status"));
            if (!filter) {
                reply(res, 400, {{"error", "status must be pending, done or all"}});
                return;
            }
            try {
                const auto page =
                    store->queue(limit, *filter, req.get_param_value("cursor"), req.get_param_value("reasoning") == "1");
                json items = json::array();
                for (const auto& item : page.items) items.push_back(to_json(item));
                reply(res, 200,
                      {{"items", items}, {"next_cursor", page.next_cursor ? json(*page.next_cursor) : json(nullptr)}});
            } catch (const LookupError& e) {
                reply(res, 400, {{"error", e.what()}});
            }
        });

        server.Get("/item", [this](const httplib::Request& req, httplib::Response& res) {
            if (!need_store(res)) return;
            const auto item = store->item(req.get_param_value("id"), req.get_param_value("reasoning") == "1");
            if (!item) {
                reply(res, 404, {{"error", "unknown comment " + req.get_param_value("id")}});
                return;
            }
            reply(res, 200, to_json(*item));
        });

        server.Post("/decisions", [this](const httplib::Request& req, httplib::Response& res) {
            if (!need_store(res)) return;
            const auto body = json::parse(req.body, nullptr, false);
            if (body.is_discarded()) {
                reply(res, 400, {{"error", "body is not JSON"}});
                return;
            }
            const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count();
            TaggingDecision decision;
            auto errors = decision_from_client_json(body, now, decision);
            if (!errors.empty()) {
                reply(res, 422, {{"errors", errors}});
                return;
            }
            const auto result = store->submit(decision);
            if (result.status != 200) {
                reply(res, result.status, {{"errors", result.errors}});
                return;
            }
            reply(res, 200, {{"item", to_json(*result.item)}, {"duplicate", result.duplicate}});
        });

        server.Get("/decisions", [this](const httplib::Request&, httplib::Response& res) {
            if (!need_store(res)) return;
            reply(res, 200, {{"decisions", store->decisions()}});
        });

        server.Get("/progress", [this](const httplib::Request&, httplib::Response& res) {
            if (!need_store(res)) return;
            reply(res, 200, to_json(store->progress()));
        });

        if (options.static_dir && !server.set_mount_point("/", options.static_dir->string())) {
            spdlog::warn("UI directory {} not found; serving the API only", options.static_dir->string());
        }
    }
};

ReviewServer::ReviewServer(std::shared_ptr<ReviewStore> store, ReviewServerOptions options)
    : impl_(std::make_unique<Impl>()) {
    impl_->store = std::move(store);
    impl_->options = std::move(options);
    impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ReviewServer::listen() { return impl_->server.listen_after_bind(); }

int ReviewServer::start(const std::string& host, int port) {
    const int bound = bind(host, port);
    if (bound < 0) return bound;
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

void ReviewServer::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace pai
