#include "pai/anonymize.hpp"

#include <cctype>
#include <cstdlib>
#include <regex>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/gazetteer.hpp"
#include "pai/http_backend.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

bool word_like(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '*' || c == '_'; }

/// Masked text counts as a word character so that masking never opens a
/// new boundary; this keeps the rule-based pass idempotent.
bool bounded(std::string_view s, std::size_t begin, std::size_t end) {
    if (begin > 0 && word_like(s[begin - 1]) && word_like(s[begin])) return false;
    if (end < s.size() && word_like(s[end]) && word_like(s[end - 1])) return false;
    return true;
}

struct Pattern {
    std::regex re;
    const char* category;
    const char* subcategory;
    double confidence;
};

const std::vector<Pattern>& patterns() {
    using std::regex_constants::icase;
    using std::regex_constants::ECMAScript;
    static const std::vector<Pattern> p = {
        {std::regex(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})"), "Email", "", 0.95},
        {std::regex(R"((?:https?://|www\.)[^\s]+)", ECMAScript | icase), "URL", "", 0.9},
        {std::regex(R"(\d{1,3}(?:\.\d{1,3}){3})"), "IP", "", 0.9},
        {std::regex(R"(\+?\d[\d ().-]{7,}\d)"), "PhoneNumber", "", 0.8},
        {std::regex(R"(\d{1,3} ?(?:yo|y/o|years? old|yrs? old|year-old))", ECMAScript | icase), "Quantity", "Age",
         0.85},
        {std::regex(R"((?:[$€£¥] ?\d[\d,.]*k?|\d[\d,.]*k? ?(?:usd|eur|gbp|dollars|euros|bucks|pounds|francs)))",
                    ECMAScript | icase),
         "Quantity", "Currency", 0.8},
        {std::regex(R"((?:jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?|aug(?:ust)?|sep(?:tember)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?) \d{1,2}(?:st|nd|rd|th)?)",
                    ECMAScript | icase),
         "DateTime", "", 0.7},
        {std::regex(R"((?:19|20)\d\d)"), "DateTime", "", 0.6},
        {std::regex(R"(\d+(?:[.,]\d+)*)"), "Quantity", "Number", 0.6},
    };
    return p;
}

}  // namespace

bool is_masked_category(std::string_view category, std::string_view subcategory) {
    static const std::vector<std::string_view> whole = {"Person", "PersonType", "Location", "Organization", "Event",
                                                        "Address", "PhoneNumber", "Email", "URL", "IP", "DateTime"};
    for (auto c : whole) {
        if (text::iequals(category, c)) return true;
    }
    if (text::iequals(category, "Quantity")) {
        return text::iequals(subcategory, "Age") || text::iequals(subcategory, "Currency") ||
               text::iequals(subcategory, "Number");
    }
    return false;
}

std::string apply_mask(std::string_view input, const std::vector<EntitySpan>& spans, double threshold) {
    const std::size_t n = text::utf8_length(input);
    std::vector<char> masked(n, 0);
    for (const auto& s : spans) {
        if (s.confidence < threshold || !is_masked_category(s.category, s.subcategory)) continue;
        for (std::size_t i = s.offset; i < std::min(n, s.offset + s.length); ++i) masked[i] = 1;
    }
    std::string out;
    out.reserve(input.size());
    for (std::size_t cp = 0; cp < n; ++cp) {
        const auto b = text::utf8_offset(input, cp), e = text::utf8_offset(input, cp + 1);
        if (masked[cp]) out.push_back('*');
        else out.append(input.substr(b, e - b));
    }
    return out;
}

std::vector<EntitySpan> RuleBasedAnonymizer::detect(std::string_view input) {
    std::vector<EntitySpan> out;
    auto add = [&](std::size_t begin, std::size_t end, const char* cat, const char* sub, double conf) {
        const auto cp_begin = text::utf8_length(input.substr(0, begin));
        const auto cp_len = text::utf8_length(input.substr(begin, end - begin));
        out.push_back({cp_begin, cp_len, cat, sub, conf});
    };

    const std::string lower = text::to_lower(input);
    for (const auto& name : gazetteer::all_place_names()) {
        for (auto pos = lower.find(name); pos != std::string::npos; pos = lower.find(name, pos + 1)) {
            if (bounded(lower, pos, pos + name.size())) add(pos, pos + name.size(), "Location", "", 0.9);
        }
    }
    const std::string s(input);
    for (const auto& p : patterns()) {
        for (std::sregex_iterator it(s.begin(), s.end(), p.re), end; it != end; ++it) {
            const auto begin = static_cast<std::size_t>(it->position());
            const auto stop = begin + static_cast<std::size_t>(it->length());
            if (stop > begin && bounded(s, begin, stop)) add(begin, stop, p.category, p.subcategory, p.confidence);
        }
    }
    return out;
}

ServiceAnonymizer::ServiceAnonymizer(Config config) : config_(std::move(config)) {}

std::vector<EntitySpan> ServiceAnonymizer::detect(std::string_view input) {
    auto [origin, path] = split_url(config_.endpoint);
    if (path.find("stringIndexType") == std::string::npos) {
        path += (path.find('?') == std::string::npos ? "?" : "&");
        path += "stringIndexType=UnicodeCodePoint";
    }
    httplib::Client client(origin);
    client.set_read_timeout(config_.timeout);
    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) headers.emplace(config_.key_header, key);
    nlohmann::json body = {{"documents", {{{"id", "1"}, {"language", "en"}, {"text", std::string(input)}}}}};
    const auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) throw BackendError("anonymizer unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw BackendError("anonymizer returned HTTP " + std::to_string(res->status));
    const auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("documents") || !j["documents"].is_array() || j["documents"].empty()) {
        throw BackendError("anonymizer response has no documents");
    }
    std::vector<EntitySpan> spans;
    for (const auto& e : j["documents"][0].value("entities", nlohmann::json::array())) {
        spans.push_back({e.value("offset", std::size_t{0}), e.value("length", std::size_t{0}), e.value("category", ""),
                         e.value("subcategory", ""), e.value("confidenceScore", 0.0)});
    }
    return spans;
}

std::vector<AnonymizedComment> anonymize_comments(const std::vector<std::string>& comments, Anonymizer* primary) {
    RuleBasedAnonymizer fallback;
    std::vector<AnonymizedComment> out;
    out.reserve(comments.size());
    for (const auto& c : comments) {
        if (!primary) {
            out.push_back({apply_mask(c, fallback.detect(c)), false});
            continue;
        }
        try {
            out.push_back({apply_mask(c, primary->detect(c)), false});
        } catch (const std::exception& e) {
            spdlog::warn("{} failed ({}), using rule-based masking", primary->describe(), e.what());
            out.push_back({apply_mask(c, fallback.detect(c)), true});
        }
    }
    return out;
}

}  // namespace pai
