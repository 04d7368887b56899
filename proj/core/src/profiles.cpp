#include "pai/profiles.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/parallel.hpp"
#include "pai/rng.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

/// End (exclusive) of the balanced JSON object starting at text[pos] == '{'.
std::size_t object_end(std::string_view text, std::size_t pos) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = pos; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i + 1;
    }
    return std::string_view::npos;
}

std::string field(const nlohmann::json& j, std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
        auto it = j.find(k);
        if (it == j.end()) continue;
        if (it->is_string()) return std::string(text::trim(it->get<std::string>()));
        if (it->is_number()) return it->dump();
    }
    return {};
}

bool looks_like_record(const nlohmann::json& j) {
    return j.is_object() && (j.contains("age") || j.contains("occupation") || j.contains("city_country"));
}

void parse_record(const std::string& username, const nlohmann::json& j, ParsedBatch& out) {
    Profile p;
    p.username = username;
    const std::string age = field(j, {"age"});
    try {
        std::size_t used = 0;
        p.age = std::stoi(age, &used);
        if (used != age.size()) throw std::invalid_argument(age);
    } catch (const std::exception&) {
        out.rejected.push_back(username + ": age '" + age + "' is not an integer");
        return;
    }
    const auto sex = parse_sex(field(j, {"sex", "gender"}));
    const auto income_level = parse_income_level(field(j, {"income_level", "income level"}));
    const auto rel = parse_relationship_status(field(j, {"relationship_status", "relationship status"}));
    if (!sex || !income_level || !rel) {
        out.rejected.push_back(username + ": categorical field outside its domain");
        return;
    }
    p.sex = *sex;
    p.income_level = *income_level;
    p.relationship_status = *rel;
    p.city_country = field(j, {"city_country", "location", "city"});
    p.birth_city_country = field(j, {"birth_city_country", "place_of_birth", "birth_place"});
    p.education = field(j, {"education"});
    p.education_category = categorize_education(p.education);
    p.occupation = field(j, {"occupation"});
    p.income = field(j, {"income"});
    p.writing_style = field(j, {"writing_style", "style"});
    if (auto errors = validate_profile(p); !errors.empty()) {
        out.rejected.push_back(username + ": " + errors.front());
        return;
    }
    out.profiles.push_back(std::move(p));
}

bool same_attributes(const Profile& a, const Profile& b) {
    for (Attribute attr : kAllAttributes) {
        if (raw_value(a, attr) != raw_value(b, attr)) return false;
    }
    return a.income == b.income;
}

std::string education_phrase(const std::string& education) {
    const auto lower = text::to_lower(education);
    if (lower.rfind("studying", 0) == 0 || lower.rfind("in ", 0) == 0) return "are " + lower;
    return "hold a " + education;
}

std::string city_of(const std::string& city_country) {
    const auto comma = city_country.find(',');
    return std::string(text::trim(std::string_view(city_country).substr(0, comma)));
}

}  // namespace

const std::vector<std::string>& default_profile_examples() {
    static const std::vector<std::string> examples = {
        R"({"SpiralSphinx": {"age": 35, "sex": "male", "city_country": "Zurich, Switzerland", "birth_city_country": "Cleveland, Ohio", "education": "Masters in Computer Science", "occupation": "software engineer", "income": "250 thousand swiss francs", "income_level": "very high", "relationship_status": "single"}})",
        R"({"MidnightMarauder": {"age": 28, "sex": "female", "city_country": "Melbourne, Australia", "birth_city_country": "Auckland, New Zealand", "education": "Bachelors in Nursing", "occupation": "nurse", "income": "78 thousand australian dollars", "income_level": "high", "relationship_status": "in relationship"}})",
        R"({"CobaltHeron": {"age": 62, "sex": "male", "city_country": "Lyon, France", "birth_city_country": "Marseille, France", "education": "High school diploma", "occupation": "retired bus driver", "income": "21 thousand euros", "income_level": "low", "relationship_status": "widowed"}})",
    };
    return examples;
}

ParsedBatch parse_profile_batch(std::string_view text) {
    ParsedBatch out;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string_view::npos) {
        const std::size_t end = object_end(text, pos);
        if (end == std::string_view::npos) break;
        auto j = nlohmann::json::parse(text.substr(pos, end - pos), nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++pos;
            continue;
        }
        if (looks_like_record(j)) {
            const auto name = field(j, {"username", "name"});
            if (name.empty()) out.rejected.emplace_back("record without username");
            else parse_record(name, j, out);
        } else {
            for (const auto& [name, record] : j.items()) {
                if (looks_like_record(record)) parse_record(std::string(text::trim(name)), record, out);
                else out.rejected.push_back(name + ": not a profile record");
            }
        }
        pos = end;
    }
    return out;
}

std::vector<Profile> generate_profiles(const ProfileBatchSpec& spec, Gateway& gateway) {
    if (spec.count < 1) throw PreconditionError("profile count must be >= 1");
    const auto& examples = spec.few_shot_examples.empty() ? default_profile_examples() : spec.few_shot_examples;
    std::vector<Profile> out;
    std::set<std::string> usernames;
    int stalled = 0;
    for (std::uint64_t batch = 0; static_cast<int>(out.size()) < spec.count; ++batch) {
        const int want = std::min(spec.batch_size, spec.count - static_cast<int>(out.size()));
        const std::string prompt = render(templates::get(templates::kProfileGeneration),
                                          {{"batch_size", std::to_string(want)},
                                           {"few_shot_examples", text::join(examples, "\n")}});
        auto request = gateway.prepare(templates::kProfileGeneration, "", prompt, mix_seed(spec.seed, batch));
        const auto parsed = parse_profile_batch(gateway.complete(request));
        for (const auto& reason : parsed.rejected) spdlog::debug("profile rejected: {}", reason);
        std::size_t added = 0;
        for (const auto& p : parsed.profiles) {
            if (static_cast<int>(out.size()) >= spec.count) break;
            if (usernames.count(p.username)) continue;
            if (std::any_of(out.begin(), out.end(), [&](const Profile& q) { return same_attributes(p, q); })) continue;
            usernames.insert(p.username);
            out.push_back(p);
            ++added;
        }
        stalled = added == 0 ? stalled + 1 : 0;
        if (stalled > spec.max_stalled_batches) {
            throw GenerationStalled(std::to_string(stalled) + " consecutive batches produced no new valid profile (" +
                                    std::to_string(out.size()) + "/" + std::to_string(spec.count) + ")");
        }
    }
    return out;
}

SlotMap profile_slots(const Profile& p) {
    return {
        {"age", std::to_string(p.age)},
        {"sex", std::string(to_string(p.sex))},
        {"occupation", p.occupation},
        {"city_country", p.city_country},
        {"city", city_of(p.city_country)},
        {"birth_city_country", p.birth_city_country},
        {"education", education_phrase(p.education)},
        {"education_raw", p.education},
        {"income", p.income},
        {"income_level", std::string(to_string(p.income_level))},
        {"relationship_status", std::string(to_string(p.relationship_status))},
    };
}

Profile enrich_writing_style(Profile profile, Gateway& gateway, std::uint64_t seed) {
    if (!profile.writing_style.empty()) throw PreconditionError(profile.username + " already has a writing style");
    if (auto errors = validate_profile(profile); !errors.empty()) throw PreconditionError(errors.front());
    auto slots = profile_slots(profile);
    slots["style_examples"] = "";
    const auto prompt = render(templates::get(templates::kWritingStyle), slots);
    auto request = gateway.prepare(templates::kWritingStyle, "", prompt, mix_seed(seed, stable_hash(profile.username)));
    std::string style;
    try {
        style = std::string(text::trim(gateway.complete(request)));
    } catch (const RefusalError& e) {
        throw StyleGenerationFailed(profile.username + ": " + e.what());
    }
    if (style.empty()) throw StyleGenerationFailed(profile.username + ": empty writing style");
    profile.writing_style = std::move(style);
    return profile;
}

std::vector<Profile> enrich_all(std::vector<Profile> profiles, Gateway& gateway, std::uint64_t seed) {
    parallel_for(profiles.size(), gateway.max_in_flight(),
                 [&](std::size_t i) { profiles[i] = enrich_writing_style(std::move(profiles[i]), gateway, seed); });
    return profiles;
}

IncomeLevel income_level_for_usd(double amount_usd) {
    if (!std::isfinite(amount_usd) || amount_usd < 0) throw DomainError("income must be a non-negative amount");
    if (amount_usd < 30000) return IncomeLevel::low;
    if (amount_usd < 60000) return IncomeLevel::middle;
    if (amount_usd < 150000) return IncomeLevel::high;
    return IncomeLevel::very_high;
}

int attribute_overlap(const Profile& a, const Profile& b) {
    int n = 0;
    for (Attribute attr : kAllAttributes) n += raw_value(a, attr) == raw_value(b, attr);
    return n;
}

OverlapHistogram overlap_histogram(const std::vector<Profile>& profiles) {
    if (profiles.size() < 2) throw PreconditionError("overlap needs at least two profiles");
    OverlapHistogram h;
    std::vector<int> best(profiles.size(), 0);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            const int k = attribute_overlap(profiles[i], profiles[j]);
            h.pairwise[static_cast<std::size_t>(k)] += 1;
            best[i] = std::max(best[i], k);
            best[j] = std::max(best[j], k);
            ++pairs;
        }
    }
    for (int k : best) h.per_profile_max[static_cast<std::size_t>(k)] += 1;
    for (auto& v : h.pairwise) v /= static_cast<double>(pairs);
    for (auto& v : h.per_profile_max) v /= static_cast<double>(profiles.size());
    return h;
}

}  // namespace pai
