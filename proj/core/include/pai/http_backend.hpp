#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pai/gateway.hpp"

namespace pai {

/// Client for OpenAI-compatible `/chat/completions` endpoints.
struct HttpBackendConfig {
    std::string base_url = "https://api.openai.com/v1";
    /// Name of the environment variable holding the bearer token. The token
    /// itself is read at send time and never stored or logged.
    std::string api_key_env = "OPENAI_API_KEY";
    std::chrono::seconds timeout{120};
};

nlohmann::json build_chat_body(const ChatRequest& request);

/// Maps an HTTP exchange onto the backend error contract: 429/5xx ->
/// TransientBackendError, refusals and content filtering -> RefusalError,
/// other failures -> BackendError.
std::string parse_chat_response(int status, std::string_view body);

class HttpChatBackend final : public ChatBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);

    std::string send(const ChatRequest& request) override;
    std::string describe() const override;

private:
    HttpBackendConfig config_;
    std::string origin_;  // scheme://host[:port]
    std::string prefix_;  // path before /chat/completions
};

/// Splits "scheme://host[:port][/path]" into origin and path (no trailing
/// slash). Throws BackendError when the scheme is missing.
std::pair<std::string, std::string> split_url(std::string_view url);

}  // namespace pai
