#include "pai/gateway.hpp"

#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pai/errors.hpp"

namespace pai {

std::string_view ChatRequest::last_user_turn() const {
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
        if (it->role == Role::user) return it->text;
    }
    return {};
}

std::vector<std::string> validate_request(const ChatRequest& r) {
    std::vector<std::string> errors;
    if (!(r.temperature >= 0.0)) errors.emplace_back("temperature must be >= 0");
    if (r.max_tokens <= 0) errors.emplace_back("max_tokens must be > 0");
    if (r.turns.empty()) errors.emplace_back("request has no turns");
    return errors;
}

std::chrono::milliseconds RetryPolicy::delay_before_retry(int failed_attempts) const {
    const double factor = std::pow(multiplier, std::max(0, failed_attempts - 1));
    return std::chrono::milliseconds(static_cast<std::int64_t>(static_cast<double>(base_delay.count()) * factor));
}

RunLog::RunLog(const std::filesystem::path& path) : out_(path, std::ios::app) {
    if (!out_) throw BackendError("cannot open run log " + path.string());
}

void RunLog::record(const ChatRequest& request, std::string_view status, int attempt, std::string_view response) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& t : request.turns) {
        turns.push_back({{"role", t.role == Role::user ? "user" : "assistant"}, {"text", t.text}});
    }
    nlohmann::json entry = {
        {"attempt", attempt},
        {"model", request.model_id},
        {"response", response},
        {"seed", request.seed},
        {"status", status},
        {"system", request.system_prompt},
        {"template", request.template_name},
        {"turns", std::move(turns)},
    };
    std::lock_guard lock(mutex_);
    entry["seq"] = seq_++;
    out_ << entry.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    out_.flush();
}

TokenBucket::TokenBucket(double rate_per_second, double burst)
    : rate_(rate_per_second), burst_(std::max(1.0, burst)), tokens_(burst_), last_(std::chrono::steady_clock::now()) {}

void TokenBucket::acquire() {
    while (true) {
        std::chrono::duration<double> wait{};
        {
            std::lock_guard lock(mutex_);
            const auto now = std::chrono::steady_clock::now();
            tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
            last_ = now;
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
        }
        std::this_thread::sleep_for(wait);
    }
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, Options options)
    : backend_(std::move(backend)), options_(std::move(options)), slots_(std::max(1, options_.max_in_flight)) {
    if (!backend_) throw BackendUnavailable("no backend configured");
    if (!options_.sleep) {
        options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
    if (options_.requests_per_second && *options_.requests_per_second > 0) {
        bucket_ = std::make_unique<TokenBucket>(*options_.requests_per_second, options_.max_in_flight);
    }
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend) : Gateway(std::move(backend), Options{}) {}

ChatRequest Gateway::prepare(std::string_view template_name, std::string system_prompt, std::string user_prompt,
                             std::uint64_t seed) const {
    GenerationSettings settings = templates::default_settings(template_name);
    if (auto it = options_.settings_overrides.find(std::string(template_name)); it != options_.settings_overrides.end()) {
        settings = it->second;
    }
    ChatRequest r;
    r.system_prompt = std::move(system_prompt);
    r.turns.push_back({Role::user, std::move(user_prompt)});
    r.temperature = settings.temperature;
    r.max_tokens = settings.max_tokens;
    r.frequency_penalty = settings.frequency_penalty;
    r.model_id = options_.model_id;
    r.template_name = std::string(template_name);
    r.seed = seed;
    return r;
}

std::string Gateway::complete(const ChatRequest& request) {
    if (auto errors = validate_request(request); !errors.empty()) {
        throw BackendError("invalid chat request: " + errors.front());
    }
    const int attempts = std::max(1, options_.retry.max_attempts);
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        if (bucket_) bucket_->acquire();
        {
            slots_.acquire();
            struct Release {
                std::counting_semaphore<>& s;
                ~Release() { s.release(); }
            } release{slots_};
            try {
                std::string response = backend_->send(request);
                if (options_.run_log) options_.run_log->record(request, "ok", attempt, response);
                return response;
            } catch (const RefusalError& e) {
                if (options_.run_log) options_.run_log->record(request, "refusal", attempt, e.raw_text());
                throw;
            } catch (const TransientBackendError& e) {
                last_error = e.what();
                if (options_.run_log) options_.run_log->record(request, "transient_error", attempt, last_error);
                spdlog::warn("{} request failed (attempt {}/{}): {}", request.template_name, attempt, attempts,
                             last_error);
            } catch (const BackendError& e) {
                if (options_.run_log) options_.run_log->record(request, "error", attempt, e.what());
                throw BackendUnavailable(backend_->describe() + ": " + e.what());
            }
        }
        // The slot is released while backing off.
        if (attempt < attempts) options_.sleep(options_.retry.delay_before_retry(attempt));
    }
    throw BackendUnavailable(backend_->describe() + ": retries exhausted (" + last_error + ")");
}

}  // namespace pai
