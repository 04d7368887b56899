#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "pai/review.hpp"

namespace pai {

struct ReviewServerOptions {
    std::string cors_origin = "http://localhost:5173";
    /// When set, every route except /health and preflight requests needs
    /// "Authorization: Bearer <token>".
    std::optional<std::string> bearer_token;
    /// Static UI bundle served under "/".
    std::optional<std::filesystem::path> static_dir;
};

/// HTTP front of a ReviewStore:
///   GET  /health
///   GET  /queue?limit=N&status=pending|done|all&cursor=C&reasoning=1
///   GET  /item?id=thread/ordinal
///   POST /decisions
///   GET  /decisions
///   GET  /progress
/// Without a store every dataset route answers 409.
class ReviewServer {
public:
    ReviewServer(std::shared_ptr<ReviewStore> store, ReviewServerOptions options = {});
    ~ReviewServer();
    ReviewServer(const ReviewServer&) = delete;
    ReviewServer& operator=(const ReviewServer&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port, or
    /// -1 on failure.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    /// bind() + listen() on a background thread; returns the bound port.
    int start(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pai
