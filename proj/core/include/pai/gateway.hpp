#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "pai/templates.hpp"

namespace pai {

enum class Role { user, assistant };

struct ChatTurn {
    Role role = Role::user;
    std::string text;

    bool operator==(const ChatTurn&) const = default;
};

struct ChatRequest {
    std::string system_prompt;
    std::vector<ChatTurn> turns;
    double temperature = 1.0;
    int max_tokens = 1000;
    double frequency_penalty = 0.0;
    std::string model_id;
    // Routing metadata: the mock backend answers by (template_name, seed).
    std::string template_name;
    std::uint64_t seed = 0;

    std::string_view last_user_turn() const;
};

/// Invariant violations (temperature >= 0, max_tokens > 0, >= 1 turn).
std::vector<std::string> validate_request(const ChatRequest& r);

/// One chat-completion provider. Implementations throw
/// TransientBackendError (retryable), BackendError (permanent) or
/// RefusalError (safety decline, never retried).
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string send(const ChatRequest& request) = 0;
    virtual std::string describe() const = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_delay{2000};
    double multiplier = 2.0;

    std::chrono::milliseconds delay_before_retry(int failed_attempts) const;
};

/// Append-only JSONL transcript of every backend exchange. Thread-safe,
/// single writer. Never records credentials (requests carry none).
class RunLog {
public:
    explicit RunLog(const std::filesystem::path& path);

    void record(const ChatRequest& request, std::string_view status, int attempt, std::string_view response);

private:
    std::mutex mutex_;
    std::ofstream out_;
    std::uint64_t seq_ = 0;
};

/// Token bucket refilled continuously at `rate` tokens per second.
class TokenBucket {
public:
    TokenBucket(double rate_per_second, double burst);

    /// Blocks until a token is available.
    void acquire();

private:
    std::mutex mutex_;
    double rate_;
    double burst_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
};

/// Uniform completion entry point: retry with exponential backoff,
/// parallelism cap, optional rate limit and transcript logging.
class Gateway {
public:
    struct Options {
        RetryPolicy retry;
        int max_in_flight = 8;
        std::optional<double> requests_per_second;
        std::string model_id;
        std::map<std::string, GenerationSettings> settings_overrides;
        std::shared_ptr<RunLog> run_log;
        // Injectable for tests; defaults to std::this_thread::sleep_for.
        std::function<void(std::chrono::milliseconds)> sleep;
        // Character budget for inference prompts (0 = unlimited).
        std::size_t max_context_chars = 0;
    };

    Gateway(std::shared_ptr<ChatBackend> backend, Options options);
    explicit Gateway(std::shared_ptr<ChatBackend> backend);

    /// Builds a request with the template's generation settings (plus any
    /// configured override) and the gateway's model id.
    ChatRequest prepare(std::string_view template_name, std::string system_prompt, std::string user_prompt,
                        std::uint64_t seed) const;

    /// Throws BackendUnavailable once retries are exhausted and RefusalError
    /// on a provider refusal.
    std::string complete(const ChatRequest& request);

    const Options& options() const noexcept { return options_; }
    int max_in_flight() const noexcept { return options_.max_in_flight; }
    ChatBackend& backend() noexcept { return *backend_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    Options options_;
    std::counting_semaphore<> slots_;
    std::unique_ptr<TokenBucket> bucket_;
};

}  // namespace pai
