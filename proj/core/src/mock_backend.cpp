#include "pai/mock_backend.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pai/errors.hpp"
#include "pai/model.hpp"
#include "pai/rng.hpp"
#include "pai/templates.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

using Pool = std::vector<std::string_view>;

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
    return pool[rng.uniform_below(pool.size())];
}

const Pool kNameHeads = {"Spiral", "Silver", "Quiet", "Velvet", "Crimson", "Lunar", "Cobalt", "Amber",
                         "Frost", "Ember", "Hollow", "Swift", "Gentle", "Rusty", "Misty", "Golden",
                         "Stormy", "Pixel", "Cosmic", "Wander", "Maple", "Copper", "Jade", "Nimble"};
const Pool kNameTails = {"Sphinx", "Falcon", "Otter", "Lantern", "Harbor", "Willow", "Badger", "Comet",
                         "Meadow", "Raven", "Pebble", "Tiger", "Voyager", "Sparrow", "Canyon", "Beacon",
                         "Panda", "Fox", "Nomad", "Cedar", "Walrus", "Dune", "Kestrel", "Heron"};

const std::vector<std::pair<std::string_view, std::string_view>> kPlaces = {
    {"Dublin", "Ireland"},        {"Cork", "Ireland"},          {"London", "United Kingdom"},
    {"Manchester", "United Kingdom"}, {"Paris", "France"},      {"Lyon", "France"},
    {"Berlin", "Germany"},        {"Munich", "Germany"},        {"Madrid", "Spain"},
    {"Barcelona", "Spain"},       {"Rome", "Italy"},            {"Milan", "Italy"},
    {"Amsterdam", "Netherlands"}, {"Zurich", "Switzerland"},    {"Stockholm", "Sweden"},
    {"Oslo", "Norway"},           {"Warsaw", "Poland"},         {"Lisbon", "Portugal"},
    {"New York", "United States"}, {"Chicago", "United States"}, {"Austin", "United States"},
    {"Seattle", "United States"}, {"Toronto", "Canada"},        {"Vancouver", "Canada"},
    {"Mexico City", "Mexico"},    {"Rio de Janeiro", "Brazil"}, {"Sao Paulo", "Brazil"},
    {"Buenos Aires", "Argentina"}, {"Sydney", "Australia"},     {"Melbourne", "Australia"},
    {"Auckland", "New Zealand"},  {"Tokyo", "Japan"},           {"Seoul", "South Korea"},
    {"Mumbai", "India"},          {"Bangalore", "India"},       {"Cairo", "Egypt"},
    {"Cape Town", "South Africa"}, {"Nairobi", "Kenya"},        {"Istanbul", "Turkey"},
};

const Pool kEducations = {"High school diploma",
                          "Studying towards a Bachelor's in Psychology",
                          "Bachelor's in Computer Science",
                          "Bachelor's in Nursing",
                          "Bachelor's in Business Administration",
                          "Master's in Mechanical Engineering",
                          "Master's in Economics",
                          "Master's in Fine Arts",
                          "PhD in Biology",
                          "PhD in History",
                          "Vocational training in carpentry",
                          "Associate degree in Graphic Design"};
const Pool kOccupations = {"software engineer", "nurse",        "teacher",         "barista",
                           "accountant",        "electrician",  "graphic designer", "chef",
                           "civil engineer",    "librarian",    "retail manager",  "university professor",
                           "data analyst",      "bus driver",   "architect",       "personal trainer",
                           "journalist",        "pharmacist",   "student",         "retired postal worker"};
const Pool kRelationships = {"single", "in relationship", "married", "divorced", "widowed", "engaged"};

const Pool kStyleTraits = {"short, punchy sentences", "long rambling sentences with lots of commas",
                           "mostly lowercase letters", "frequent use of 'lol' and 'tbh'",
                           "dry sarcasm", "a warm and encouraging tone", "technical vocabulary from work",
                           "regional slang from where you grew up", "rhetorical questions",
                           "occasional typos you never fix", "ellipses to trail off...",
                           "blunt honesty", "references to pop culture from your teenage years"};

const Pool kQuestions = {"what's something you changed your mind about after moving out?",
                         "what small habit do you keep from where you grew up?",
                         "how do you actually spend your weekends these days?",
                         "what job did you think you'd have as a kid vs now?",
                         "what's the most underrated thing about your daily commute?",
                         "when did you first feel like a real adult?",
                         "what's a money lesson you learned the hard way?",
                         "how has your social life changed in the last few years?"};
const Pool kDescriptions = {"so last week i caught myself doing the same thing my parents used to do and it got me thinking",
                            "been mulling this over on the bus home, curious how others see it",
                            "honestly it surprised me how much things shifted once life got busier",
                            "had a long chat with a friend about this and we totally disagreed lol",
                            "not sure if it's just me or if everyone goes through this at some point"};

const Pool kWords = {"honestly", "the",    "weather", "here",   "makes", "everything", "slower", "but",
                     "i",        "kinda",  "like",    "it",     "my",    "job",        "keeps",  "me",
                     "busy",     "most",   "days",    "anyway", "rent",  "is",         "wild",   "and",
                     "weekends", "are",    "for",     "long",   "walks", "coffee",     "tbh",    "never",
                     "thought",  "about",  "that",    "way",    "before", "same",      "thing",  "happened",
                     "to",       "friend", "last",    "year",   "still", "figuring",   "out",    "lol"};

const Pool kSubreddits = {"/r/casualconversation", "/r/personalfinance", "/r/careerguidance", "/r/travel",
                          "/r/relationships",      "/r/jobs",            "/r/askmen",         "/r/askwomen",
                          "/r/nostalgia",          "/r/urbanplanning",   "/r/expats",         "/r/frugal",
                          "/r/psychology",         "/r/dating_advice",   "/r/gradschool",     "/r/cityporn"};

std::string place(Rng& rng) {
    const auto& [city, country] = pick(rng, kPlaces);
    return std::string(city) + ", " + std::string(country);
}

std::string guess_value(Rng& rng, Attribute a) {
    switch (a) {
        case Attribute::age: return std::to_string(18 + rng.uniform_below(50));
        case Attribute::sex: return rng.bernoulli(0.5) ? "Male" : "Female";
        case Attribute::city_country:
        case Attribute::birth_city_country: return place(rng);
        case Attribute::education: {
            static const Pool v = {"HS Diploma", "In College", "College Degree", "Master's Degree in Economics",
                                   "PhD in Biology"};
            return std::string(pick(rng, v));
        }
        case Attribute::occupation: return std::string(pick(rng, kOccupations));
        case Attribute::relationship_status: {
            static const Pool v = {"Single", "In Relationship", "Married", "Divorced", "Widowed", "Engaged"};
            return std::string(pick(rng, v));
        }
        case Attribute::income_level: {
            static const Pool v = {"Low", "Middle", "High", "Very High"};
            return std::string(pick(rng, v));
        }
    }
    return {};
}

std::string sentence(Rng& rng, std::size_t min_words, std::size_t max_words) {
    const std::size_t n = min_words + rng.uniform_below(max_words - min_words + 1);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += pick(rng, kWords);
    }
    return out;
}

int requested_count(std::string_view prompt, const char* pattern, int fallback) {
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(prompt.begin(), prompt.end(), m, std::regex(pattern))) return std::stoi(m[1].str());
    return fallback;
}

std::string gen_profiles(Rng& rng, std::string_view prompt) {
    const int n = std::clamp(requested_count(prompt, R"(Generate (\d+) people)", 5), 1, 200);
    nlohmann::ordered_json batch = nlohmann::ordered_json::object();
    for (int i = 0; i < n; ++i) {
        const std::string name = std::string(pick(rng, kNameHeads)) + std::string(pick(rng, kNameTails));
        // Roughly one record in twelve is a minor; the validator must drop it.
        const int age = rng.uniform_below(12) == 0 ? 15 : 18 + static_cast<int>(rng.uniform_below(60));
        const auto usd = 12000 + rng.uniform_below(190) * 1000;
        const char* level = usd < 30000 ? "low" : usd < 60000 ? "middle" : usd < 150000 ? "high" : "very high";
        batch[name] = {
            {"age", age},
            {"sex", rng.bernoulli(0.5) ? "male" : "female"},
            {"city_country", place(rng)},
            {"birth_city_country", place(rng)},
            {"education", pick(rng, kEducations)},
            {"occupation", pick(rng, kOccupations)},
            {"income", std::to_string(usd / 1000) + " thousand US dollars"},
            {"income_level", level},
            {"relationship_status", pick(rng, kRelationships)},
        };
    }
    return batch.dump(2);
}

std::string gen_style(Rng& rng) {
    std::string a(pick(rng, kStyleTraits)), b(pick(rng, kStyleTraits));
    return "Your writing style is casual and direct. You lean on " + a + " and " + b +
           ". You rarely bother with perfect grammar and keep things conversational.";
}

std::string gen_topic(Rng& rng) {
    return "Question: " + std::string(pick(rng, kQuestions)) + "\nQuestion description: " +
           std::string(pick(rng, kDescriptions)) + ". what about you guys?";
}

std::string gen_comment(Rng& rng) {
    return "Here is what I know about this subthread: people are swapping stories about the topic.\n"
           "Here is what I know about myself: I have not posted here before.\n"
           "Reasoning: I can add a bit of my own experience without giving too much away.\n"
           "Style check: casual, short, within the word limits.\n"
           "My comment: " +
           sentence(rng, 5, 20);
}

std::string gen_tagging(Rng& rng) {
    const int n = static_cast<int>(rng.uniform_below(4));  // 0..3 features
    if (n == 0) return "Reasoning: Nothing personal can be inferred.\nGuess: None\nCertainty: None\nHardness: None";
    std::vector<Attribute> attrs(kAllAttributes.begin(), kAllAttributes.end());
    rng.shuffle(attrs);
    attrs.resize(static_cast<std::size_t>(n));
    static const Pool levels = {"direct", "indirect", "complicated"};
    std::string guess = "Guess: ", cert = "Certainty: ", hard = "Hardness: ";
    for (int i = 0; i < n; ++i) {
        const auto name = std::string(to_string(attrs[static_cast<std::size_t>(i)]));
        const std::string sep = i ? "\n" : "";
        guess += sep + name + " - " + guess_value(rng, attrs[static_cast<std::size_t>(i)]) + "; " +
                 guess_value(rng, attrs[static_cast<std::size_t>(i)]) + "; " +
                 guess_value(rng, attrs[static_cast<std::size_t>(i)]);
        cert += sep + name + " - " + std::to_string(1 + rng.uniform_below(5));
        hard += sep + name + " - " + std::string(pick(rng, levels));
    }
    return "Reasoning: The comment hints at a few personal details.\n" + guess + "\n" + cert + "\n" + hard;
}

std::string gen_inference(Rng& rng, std::string_view prompt) {
    std::string out;
    const auto start = prompt.find("guess the authors ");
    const auto stop = prompt.find("?\n", start);
    if (start == std::string_view::npos || stop == std::string_view::npos) return "I cannot tell.";
    const auto list = prompt.substr(start + 18, stop - start - 18);
    for (const auto& f : text::split(list, ',')) {
        const auto name = std::string(text::trim(f));
        auto attr = parse_attribute(name);
        if (!attr) continue;
        out += "Type: " + name + "\nInference: The writing style and details point in this direction.\nGuess: " +
               guess_value(rng, *attr) + "; " + guess_value(rng, *attr) + "; " + guess_value(rng, *attr) + "\n\n";
    }
    return out;
}

std::string gen_equivalence(Rng& rng, std::string_view prompt) {
    const int pairs = std::max(1, requested_count(prompt, R"(pairs: (\d+))", 1));
    static const Pool answers = {"yes", "no", "no", "less precise"};
    std::string out;
    for (int i = 0; i < pairs; ++i) {
        if (i) out += "; ";
        out += pick(rng, answers);
    }
    return out;
}

std::string gen_subreddits(Rng& rng) {
    auto idx = rng.sample_indices(kSubreddits.size(), 3);
    rng.shuffle(idx);
    return std::string(kSubreddits[idx[0]]) + ", " + std::string(kSubreddits[idx[1]]) + ", " +
           std::string(kSubreddits[idx[2]]);
}

std::string builtin(std::string_view name, Rng& rng, std::string_view prompt, bool& known) {
    known = true;
    if (name == templates::kProfileGeneration) return gen_profiles(rng, prompt);
    if (name == templates::kWritingStyle) return gen_style(rng);
    if (name == templates::kTopicGeneration) return gen_topic(rng);
    if (name == templates::kInterestCheck) return rng.uniform_below(4) == 0 ? "No" : "Yes";
    if (name == templates::kCommentGeneration) return gen_comment(rng);
    if (name == templates::kTagging) return gen_tagging(rng);
    if (name == templates::kInference) return gen_inference(rng, prompt);
    if (name == templates::kEquivalence) return gen_equivalence(rng, prompt);
    if (name == templates::kSubredditClassification) return gen_subreddits(rng);
    if (name == templates::kGuessExtraction) return "Guess: None";
    known = false;
    return {};
}

}  // namespace

MockScript MockScript::parse(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw BackendError(std::string("mock script is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw BackendError("mock script must be a JSON object");
    MockScript s;
    for (const auto& [name, list] : j.items()) {
        if (!list.is_array() || list.empty()) throw BackendError("mock script entry '" + name + "' must be a non-empty list");
        auto& out = s.responses[name];
        for (const auto& r : list) {
            if (!r.is_string()) throw BackendError("mock script entry '" + name + "' holds a non-string");
            out.push_back(r.get<std::string>());
        }
    }
    return s;
}

MockScript MockScript::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BackendError("cannot read mock script " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string mock_respond(const MockScript& script, std::string_view template_name, std::uint64_t seed,
                         std::string_view prompt) {
    const std::uint64_t key = mix_seed(stable_hash(template_name), seed);
    if (auto it = script.responses.find(template_name); it != script.responses.end()) {
        return it->second[key % it->second.size()];
    }
    Rng rng(key);
    bool known = false;
    std::string out = builtin(template_name, rng, prompt, known);
    return known ? out : std::string(prompt);
}

std::string MockBackend::send(const ChatRequest& request) {
    std::string out = mock_respond(script_, request.template_name, request.seed, request.last_user_turn());
    auto strip = [&](std::string_view prefix) { return out.substr(prefix.size()); };
    if (out.rfind("!refusal:", 0) == 0) throw RefusalError("mock refusal", strip("!refusal:"));
    if (out.rfind("!transient:", 0) == 0) throw TransientBackendError(strip("!transient:"));
    if (out.rfind("!error:", 0) == 0) throw BackendError(strip("!error:"));
    return out;
}

}  // namespace pai
