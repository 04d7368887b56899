#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pai {

/// Detected entity; offset and length count Unicode code points.
struct EntitySpan {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::string category;
    std::string subcategory;
    double confidence = 0.0;
};

/// Entity categories that are masked, optionally restricted to
/// subcategories (Quantity -> Age, Currency, Number).
bool is_masked_category(std::string_view category, std::string_view subcategory);

inline constexpr double kMaskThreshold = 0.4;

/// Replaces every code point inside a maskable span at or above the
/// threshold with '*'.
std::string apply_mask(std::string_view text, const std::vector<EntitySpan>& spans,
                       double threshold = kMaskThreshold);

class Anonymizer {
public:
    virtual ~Anonymizer() = default;
    virtual std::vector<EntitySpan> detect(std::string_view text) = 0;
    virtual std::string describe() const = 0;
};

/// Offline fallback: gazetteer place names plus e-mail, URL, IP, phone,
/// date, currency, age and number patterns. Masking with it is idempotent.
class RuleBasedAnonymizer final : public Anonymizer {
public:
    std::vector<EntitySpan> detect(std::string_view text) override;
    std::string describe() const override { return "rule-based"; }
};

/// Client for a hosted PII-recognition endpoint speaking the
/// documents / entities JSON shape (offsets in code points).
class ServiceAnonymizer final : public Anonymizer {
public:
    struct Config {
        std::string endpoint;  // full URL of the recognition route
        std::string api_key_env = "PAI_ANONYMIZER_KEY";
        std::string key_header = "Ocp-Apim-Subscription-Key";
        std::chrono::seconds timeout{30};
    };

    explicit ServiceAnonymizer(Config config);
    std::vector<EntitySpan> detect(std::string_view text) override;
    std::string describe() const override { return "service " + config_.endpoint; }

private:
    Config config_;
};

struct AnonymizedComment {
    std::string text;
    bool fallback = false;  // primary anonymizer failed, rule-based used
};

/// Masks each comment with `primary` (rule-based when null); a failing
/// primary falls back per comment and flags the result.
std::vector<AnonymizedComment> anonymize_comments(const std::vector<std::string>& comments, Anonymizer* primary);

}  // namespace pai
