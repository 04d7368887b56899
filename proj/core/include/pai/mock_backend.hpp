#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pai/gateway.hpp"

namespace pai {

/// Canned responses keyed by template name. A response starting with one of
/// the control prefixes simulates a provider failure instead of answering:
///   "!refusal:<text>"   -> RefusalError
///   "!transient:<text>" -> TransientBackendError
///   "!error:<text>"     -> BackendError
struct MockScript {
    std::map<std::string, std::vector<std::string>, std::less<>> responses;

    /// JSON object: template name -> list of strings. Throws BackendError.
    static MockScript load(const std::filesystem::path& path);
    static MockScript parse(std::string_view json_text);
};

/// Deterministic answer for (template, seed). Scripted templates pick one of
/// their responses by a stable hash of the key; templates without a script
/// entry use the built-in generator for that template; unknown templates
/// echo `last_user_turn`. `prompt` lets generators read request parameters
/// (the requested batch size, the number of pairs to judge).
std::string mock_respond(const MockScript& script, std::string_view template_name, std::uint64_t seed,
                         std::string_view prompt);

class MockBackend final : public ChatBackend {
public:
    MockBackend() = default;
    explicit MockBackend(MockScript script) : script_(std::move(script)) {}

    std::string send(const ChatRequest& request) override;
    std::string describe() const override { return "mock"; }

private:
    MockScript script_;
};

}  // namespace pai
