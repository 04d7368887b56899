#include "pai/http_backend.hpp"

#include <cstdlib>

#include <httplib.h>

#include "pai/errors.hpp"

namespace pai {

std::pair<std::string, std::string> split_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw BackendError("backend url needs a scheme: " + std::string(url));
    const auto path_start = url.find('/', scheme_end + 3);
    std::string origin(url.substr(0, path_start));
    std::string path = path_start == std::string_view::npos ? "" : std::string(url.substr(path_start));
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {origin, path};
}

nlohmann::json build_chat_body(const ChatRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    for (const auto& t : request.turns) {
        messages.push_back({{"role", t.role == Role::user ? "user" : "assistant"}, {"content", t.text}});
    }
    nlohmann::json body = {
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    if (!request.model_id.empty()) body["model"] = request.model_id;
    if (request.frequency_penalty != 0.0) body["frequency_penalty"] = request.frequency_penalty;
    return body;
}

std::string parse_chat_response(int status, std::string_view body) {
    auto snippet = [&] { return std::string(body.substr(0, 300)); };
    if (status == 429 || status >= 500) {
        throw TransientBackendError("HTTP " + std::to_string(status) + ": " + snippet());
    }
    if (status < 200 || status >= 300) throw BackendError("HTTP " + std::to_string(status) + ": " + snippet());

    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw BackendError("response is not a JSON object: " + snippet());
    const auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array() || choices->empty()) {
        throw BackendError("response has no choices: " + snippet());
    }
    const auto& choice = choices->front();
    const auto& message = choice.contains("message") ? choice["message"] : nlohmann::json::object();
    if (message.contains("refusal") && message["refusal"].is_string()) {
        throw RefusalError("provider refused the request", message["refusal"].get<std::string>());
    }
    const std::string content =
        message.contains("content") && message["content"].is_string() ? message["content"].get<std::string>() : "";
    if (choice.value("finish_reason", "") == "content_filter") {
        throw RefusalError("provider content filter triggered", content);
    }
    if (!message.contains("content") || !message["content"].is_string()) {
        throw BackendError("response message has no text content: " + snippet());
    }
    return content;
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
    std::tie(origin_, prefix_) = split_url(config_.base_url);
}

std::string HttpChatBackend::describe() const { return "http " + origin_ + prefix_; }

std::string HttpChatBackend::send(const ChatRequest& request) {
    httplib::Client client(origin_);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    const auto res = client.Post(prefix_ + "/chat/completions", headers, build_chat_body(request).dump(),
                                 "application/json");
    if (!res) throw TransientBackendError("connection to " + origin_ + " failed: " + httplib::to_string(res.error()));
    return parse_chat_response(res->status, res->body);
}

}  // namespace pai
