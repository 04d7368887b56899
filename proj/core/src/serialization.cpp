#include "pai/serialization.hpp"

#include <algorithm>
#include <set>

#include "pai/errors.hpp"

namespace pai {

using nlohmann::json;

namespace {

template <typename T>
T require(std::optional<T> v, std::string_view field, const json& raw) {
    if (!v) throw DomainError("invalid " + std::string(field) + ": " + raw.dump());
    return *v;
}

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, Attribute a) { j = std::string(to_string(a)); }

void from_json(const json& j, Attribute& a) { a = require(parse_attribute(j.get<std::string>()), "attribute", j); }

void to_json(json& j, const Profile& p) {
    j = json{{"username", p.username},
             {"age", p.age},
             {"sex", to_string(p.sex)},
             {"city_country", p.city_country},
             {"birth_city_country", p.birth_city_country},
             {"education", p.education},
             {"education_category", to_string(p.education_category)},
             {"occupation", p.occupation},
             {"income", p.income},
             {"income_level", to_string(p.income_level)},
             {"relationship_status", to_string(p.relationship_status)},
             {"writing_style", p.writing_style}};
}

void from_json(const json& j, Profile& p) {
    p.username = j.at("username").get<std::string>();
    p.age = j.at("age").get<int>();
    p.sex = require(parse_sex(j.at("sex").get<std::string>()), "sex", j.at("sex"));
    p.city_country = j.at("city_country").get<std::string>();
    p.birth_city_country = j.at("birth_city_country").get<std::string>();
    p.education = j.at("education").get<std::string>();
    p.education_category = j.contains("education_category")
                               ? require(parse_education_category(j.at("education_category").get<std::string>()),
                                         "education_category", j.at("education_category"))
                               : categorize_education(p.education);
    p.occupation = j.at("occupation").get<std::string>();
    p.income = j.value("income", std::string{});
    p.income_level =
        require(parse_income_level(j.at("income_level").get<std::string>()), "income_level", j.at("income_level"));
    p.relationship_status = require(parse_relationship_status(j.at("relationship_status").get<std::string>()),
                                    "relationship_status", j.at("relationship_status"));
    p.writing_style = j.value("writing_style", std::string{});
}

void to_json(json& j, const AttributeTag& t) {
    j = json{{"attribute", t.attribute},
             {"guesses", t.guesses},
             {"certainty", t.certainty},
             {"hardness_coarse", t.hardness_coarse ? json(std::string(to_string(*t.hardness_coarse))) : json(nullptr)},
             {"hardness_fine", opt(t.hardness_fine)},
             {"source", to_string(t.source)},
             {"verdict", t.verdict ? json(std::string(to_string(*t.verdict))) : json(nullptr)}};
}

void from_json(const json& j, AttributeTag& t) {
    t.attribute = j.at("attribute").get<Attribute>();
    t.guesses = j.at("guesses").get<std::vector<std::string>>();
    t.certainty = j.at("certainty").get<int>();
    t.hardness_coarse.reset();
    if (auto h = get_opt<std::string>(j, "hardness_coarse")) {
        t.hardness_coarse = require(parse_hardness_coarse(*h), "hardness_coarse", j.at("hardness_coarse"));
    }
    t.hardness_fine = get_opt<int>(j, "hardness_fine");
    t.source = require(parse_tag_source(j.at("source").get<std::string>()), "source", j.at("source"));
    t.verdict.reset();
    if (auto v = get_opt<std::string>(j, "verdict")) {
        t.verdict = require(parse_review_verdict(*v), "verdict", j.at("verdict"));
    }
}

void to_json(json& j, const CommentNode& n) {
    j = json{{"id", n.id},
             {"author", n.author},
             {"text", n.text},
             {"parent", opt(n.parent)},
             {"children", n.children},
             {"round", n.round},
             {"reasoning_trace", opt(n.reasoning_trace)},
             {"tags", n.tags}};
}

void from_json(const json& j, CommentNode& n) {
    n.id = j.at("id").get<CommentId>();
    n.author = j.at("author").get<std::string>();
    n.text = j.at("text").get<std::string>();
    n.parent = get_opt<CommentId>(j, "parent");
    n.children = j.at("children").get<std::vector<CommentId>>();
    n.round = j.at("round").get<int>();
    n.reasoning_trace = get_opt<std::string>(j, "reasoning_trace");
    n.tags = j.at("tags").get<std::vector<AttributeTag>>();
}

json thread_to_json(const ThreadTree& tree) {
    return json{{"id", tree.id()},
                {"target_attribute", tree.target_attribute()},
                {"topic_question", tree.topic_question()},
                {"topic_description", tree.topic_description()},
                {"participants", tree.participants()},
                {"nodes", tree.nodes()}};
}

ThreadTree thread_from_json(const json& j) {
    return ThreadTree::from_parts(j.at("id").get<std::string>(), j.at("target_attribute").get<Attribute>(),
                                  j.at("topic_question").get<std::string>(),
                                  j.at("topic_description").get<std::string>(),
                                  j.at("nodes").get<std::vector<CommentNode>>(),
                                  j.at("participants").get<std::vector<std::string>>());
}

void to_json(json& j, const TaggingDecision& d) {
    j = json{{"comment_id", d.comment_id},
             {"attribute", d.attribute},
             {"action", to_string(d.action)},
             {"edited_guesses", d.edited_guesses},
             {"hardness_fine", opt(d.hardness_fine)},
             {"certainty", opt(d.certainty)},
             {"labeler", d.labeler},
             {"timestamp", d.timestamp}};
}

void from_json(const json& j, TaggingDecision& d) {
    d.comment_id = j.at("comment_id").get<std::string>();
    d.attribute = j.at("attribute").get<Attribute>();
    d.action = require(parse_decision_action(j.at("action").get<std::string>()), "action", j.at("action"));
    d.edited_guesses = j.value("edited_guesses", std::vector<std::string>{});
    d.hardness_fine = get_opt<int>(j, "hardness_fine");
    d.certainty = get_opt<int>(j, "certainty");
    d.labeler = j.at("labeler").get<std::string>();
    d.timestamp = j.at("timestamp").get<std::int64_t>();
}

void to_json(json& j, const ProfileLabel& l) {
    j = json{{"value", l.value},
             {"hardness", l.hardness},
             {"certainty", l.certainty},
             {"supporting_comments", l.supporting_comments}};
}

void from_json(const json& j, ProfileLabel& l) {
    l.value = j.at("value").get<std::string>();
    l.hardness = j.at("hardness").get<int>();
    l.certainty = j.at("certainty").get<int>();
    l.supporting_comments = j.at("supporting_comments").get<std::vector<std::string>>();
}

void to_json(json& j, const ProfileLabelSet& s) {
    json labels = json::object();
    for (const auto& [attr, label] : s.labels) labels[std::string(to_string(attr))] = label;
    j = json{{"username", s.username}, {"labels", labels}};
}

void from_json(const json& j, ProfileLabelSet& s) {
    s.username = j.at("username").get<std::string>();
    s.labels.clear();
    for (const auto& [key, value] : j.at("labels").items()) {
        s.labels[require(parse_attribute(key), "attribute", json(key))] = value.get<ProfileLabel>();
    }
}

void to_json(json& j, const SimulationParams& p) {
    j = json{{"no_threads", p.no_threads},
             {"no_rounds", p.no_rounds},
             {"no_actions", p.no_actions},
             {"no_max_comments", p.no_max_comments},
             {"max_depth", p.max_depth},
             {"no_profiles", p.no_profiles},
             {"p_critic", p.p_critic},
             {"p_short", p.p_short},
             {"min_comment_len", p.min_comment_len},
             {"max_comment_len", p.max_comment_len},
             {"no_sampled_comments", p.no_sampled_comments},
             {"default_comment_prob", p.default_comment_prob},
             {"comment_prob_decay", p.comment_prob_decay},
             {"comment_prob_floor", p.comment_prob_floor},
             {"seed", p.seed}};
}

void from_json(const json& j, SimulationParams& p) {
    const json defaults = p;
    std::set<std::string> known;
    for (const auto& [key, value] : defaults.items()) known.insert(key);
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw DomainError("unknown simulation parameter '" + key + "'");
    }
    auto merged = defaults;
    merged.update(j);
    p.no_threads = merged.at("no_threads").get<int>();
    p.no_rounds = merged.at("no_rounds").get<int>();
    p.no_actions = merged.at("no_actions").get<int>();
    p.no_max_comments = merged.at("no_max_comments").get<int>();
    p.max_depth = merged.at("max_depth").get<int>();
    p.no_profiles = merged.at("no_profiles").get<int>();
    p.p_critic = merged.at("p_critic").get<double>();
    p.p_short = merged.at("p_short").get<double>();
    p.min_comment_len = merged.at("min_comment_len").get<int>();
    p.max_comment_len = merged.at("max_comment_len").get<int>();
    p.no_sampled_comments = merged.at("no_sampled_comments").get<int>();
    p.default_comment_prob = merged.at("default_comment_prob").get<double>();
    p.comment_prob_decay = merged.at("comment_prob_decay").get<double>();
    p.comment_prob_floor = merged.at("comment_prob_floor").get<double>();
    p.seed = merged.at("seed").get<std::uint64_t>();
}

void to_json(json& j, const JudgmentRecord& r) {
    j = json{{"comment_id", r.comment_id},
             {"source_truth", to_string(r.source_truth)},
             {"judged_as", to_string(r.judged_as)},
             {"rater_id", r.rater_id}};
}

void from_json(const json& j, JudgmentRecord& r) {
    r.comment_id = j.at("comment_id").is_string() ? j.at("comment_id").get<std::string>() : j.at("comment_id").dump();
    r.source_truth = require(parse_authorship(j.at("source_truth").get<std::string>()), "source_truth",
                             j.at("source_truth"));
    r.judged_as = require(parse_authorship(j.at("judged_as").get<std::string>()), "judged_as", j.at("judged_as"));
    r.rater_id = j.at("rater_id").is_string() ? j.at("rater_id").get<std::string>() : j.at("rater_id").dump();
}

void to_json(json& j, const FieldError& e) { j = json{{"field", e.field}, {"message", e.message}}; }

std::vector<FieldError> decision_from_client_json(const json& j, std::int64_t now_ms, TaggingDecision& out) {
    std::vector<FieldError> errors;
    if (!j.is_object()) return {{"body", "expected a JSON object"}};
    auto text_field = [&](const char* key, bool required) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) {
            if (required) errors.push_back({key, "required"});
            return std::nullopt;
        }
        if (!j.at(key).is_string()) {
            errors.push_back({key, "must be a string"});
            return std::nullopt;
        }
        return j.at(key).get<std::string>();
    };
    auto int_field = [&](const char* key) -> std::optional<std::int64_t> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        if (!j.at(key).is_number_integer()) {
            errors.push_back({key, "must be an integer"});
            return std::nullopt;
        }
        return j.at(key).get<std::int64_t>();
    };

    if (auto v = text_field("comment_id", true)) out.comment_id = *v;
    if (auto v = text_field("attribute", true)) {
        if (auto a = parse_attribute(*v)) out.attribute = *a;
        else errors.push_back({"attribute", "unknown attribute '" + *v + "'"});
    }
    if (auto v = text_field("action", true)) {
        if (auto a = parse_decision_action(*v)) out.action = *a;
        else errors.push_back({"action", "expected accept, edit, reject or add"});
    }
    if (auto v = text_field("labeler", true)) out.labeler = *v;
    out.edited_guesses.clear();
    if (j.contains("edited_guesses") && !j.at("edited_guesses").is_null()) {
        const auto& g = j.at("edited_guesses");
        if (!g.is_array() || std::any_of(g.begin(), g.end(), [](const json& x) { return !x.is_string(); })) {
            errors.push_back({"edited_guesses", "must be a list of strings"});
        } else {
            out.edited_guesses = g.get<std::vector<std::string>>();
        }
    }
    auto small = [](std::optional<std::int64_t> v) -> std::optional<int> {
        if (!v) return std::nullopt;
        return static_cast<int>(std::clamp<std::int64_t>(*v, -1, 1000));
    };
    out.hardness_fine = small(int_field("hardness_fine"));
    out.certainty = small(int_field("certainty"));
    out.timestamp = int_field("timestamp").value_or(now_ms);
    if (!errors.empty()) return errors;
    return validate_decision(out);
}

}  // namespace pai
