#include "pai/model.hpp"

#include <algorithm>
#include <regex>

#include "pai/errors.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

std::string key_form(std::string_view s) {
    std::string out;
    for (char c : text::normalize(s)) {
        out.push_back(c == ' ' || c == '-' ? '_' : c);
    }
    return out;
}

/// Strips a trailing parenthetical such as "Low (<30k USD)".
std::string_view strip_parenthetical(std::string_view s) {
    auto pos = s.find('(');
    return text::trim(pos == std::string_view::npos ? s : s.substr(0, pos));
}

bool has_city_and_country(std::string_view v) {
    auto comma = v.find(',');
    return comma != std::string_view::npos && !text::trim(v.substr(0, comma)).empty() &&
           !text::trim(v.substr(comma + 1)).empty();
}

}  // namespace

std::string_view to_string(Attribute a) {
    switch (a) {
        case Attribute::age: return "age";
        case Attribute::sex: return "sex";
        case Attribute::city_country: return "city_country";
        case Attribute::birth_city_country: return "birth_city_country";
        case Attribute::education: return "education";
        case Attribute::occupation: return "occupation";
        case Attribute::relationship_status: return "relationship_status";
        case Attribute::income_level: return "income_level";
    }
    return "unknown";
}

std::optional<Attribute> parse_attribute(std::string_view name) {
    // The one attribute-name normalization table.
    static const std::map<std::string, Attribute> aliases = {
        {"age", Attribute::age},
        {"sex", Attribute::sex},
        {"gender", Attribute::sex},
        {"city_country", Attribute::city_country},
        {"location", Attribute::city_country},
        {"current_location", Attribute::city_country},
        {"place_of_living", Attribute::city_country},
        {"loc", Attribute::city_country},
        {"birth_city_country", Attribute::birth_city_country},
        {"birthplace", Attribute::birth_city_country},
        {"birth_place", Attribute::birth_city_country},
        {"place_of_birth", Attribute::birth_city_country},
        {"pobp", Attribute::birth_city_country},
        {"education", Attribute::education},
        {"education_level", Attribute::education},
        {"edu", Attribute::education},
        {"occupation", Attribute::occupation},
        {"occ", Attribute::occupation},
        {"profession", Attribute::occupation},
        {"relationship_status", Attribute::relationship_status},
        {"relationship", Attribute::relationship_status},
        {"mar", Attribute::relationship_status},
        {"income_level", Attribute::income_level},
        {"income", Attribute::income_level},
        {"inc", Attribute::income_level},
    };
    auto it = aliases.find(key_form(name));
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

std::string_view display_name(Attribute a) {
    switch (a) {
        case Attribute::age: return "Age";
        case Attribute::sex: return "Sex";
        case Attribute::city_country: return "Location";
        case Attribute::birth_city_country: return "Place of Birth";
        case Attribute::education: return "Education";
        case Attribute::occupation: return "Occupation";
        case Attribute::relationship_status: return "Relationship Status";
        case Attribute::income_level: return "Income Level";
    }
    return "Unknown";
}

bool is_categorical(Attribute a) {
    return a == Attribute::sex || a == Attribute::relationship_status || a == Attribute::income_level ||
           a == Attribute::education;
}

std::string_view to_string(Sex v) { return v == Sex::male ? "male" : "female"; }

std::string_view to_string(EducationCategory v) {
    switch (v) {
        case EducationCategory::high_school: return "high school";
        case EducationCategory::college_degree: return "college degree";
        case EducationCategory::masters_degree: return "master's degree";
        case EducationCategory::phd: return "PhD";
    }
    return "high school";
}

std::string_view to_string(IncomeLevel v) {
    switch (v) {
        case IncomeLevel::low: return "low";
        case IncomeLevel::middle: return "middle";
        case IncomeLevel::high: return "high";
        case IncomeLevel::very_high: return "very high";
    }
    return "low";
}

std::string_view to_string(RelationshipStatus v) {
    switch (v) {
        case RelationshipStatus::single: return "single";
        case RelationshipStatus::in_relationship: return "in relationship";
        case RelationshipStatus::married: return "married";
        case RelationshipStatus::divorced: return "divorced";
        case RelationshipStatus::widowed: return "widowed";
        case RelationshipStatus::engaged: return "engaged";
    }
    return "single";
}

std::optional<Sex> parse_sex(std::string_view s) {
    auto k = key_form(s);
    if (k == "male" || k == "m" || k == "man") return Sex::male;
    if (k == "female" || k == "f" || k == "woman") return Sex::female;
    return std::nullopt;
}

std::optional<EducationCategory> parse_education_category(std::string_view s) {
    auto k = key_form(strip_parenthetical(s));
    if (k == "high_school" || k == "hs_diploma" || k == "highschool") return EducationCategory::high_school;
    if (k == "college_degree" || k == "college" || k == "bachelor" || k == "bachelors" || k == "bachelor's_degree")
        return EducationCategory::college_degree;
    if (k == "master's_degree" || k == "masters_degree" || k == "master's" || k == "masters" || k == "master")
        return EducationCategory::masters_degree;
    if (k == "phd" || k == "doctorate") return EducationCategory::phd;
    return std::nullopt;
}

std::optional<IncomeLevel> parse_income_level(std::string_view s) {
    auto k = key_form(strip_parenthetical(s));
    if (k == "low") return IncomeLevel::low;
    if (k == "middle" || k == "medium") return IncomeLevel::middle;
    if (k == "high") return IncomeLevel::high;
    if (k == "very_high" || k == "veryhigh") return IncomeLevel::very_high;
    return std::nullopt;
}

std::optional<RelationshipStatus> parse_relationship_status(std::string_view s) {
    auto k = key_form(s);
    if (k == "single") return RelationshipStatus::single;
    if (k == "in_relationship" || k == "in_a_relationship" || k == "relationship")
        return RelationshipStatus::in_relationship;
    if (k == "married") return RelationshipStatus::married;
    if (k == "divorced") return RelationshipStatus::divorced;
    if (k == "widowed" || k == "widow" || k == "widower") return RelationshipStatus::widowed;
    if (k == "engaged") return RelationshipStatus::engaged;
    return std::nullopt;
}

EducationCategory categorize_education(std::string_view education) {
    const auto s = text::normalize(education);
    auto has = [&](std::string_view w) { return s.find(w) != std::string::npos; };
    static const std::regex masters_abbrev(R"(\b(msc|m\.sc|mba|ma|ms|m\.a\.)\b)");
    static const std::regex bachelors_abbrev(R"(\b(bsc|b\.sc|ba|bs|b\.a\.|beng)\b)");

    if (has("phd") || has("ph.d") || has("doctor")) return EducationCategory::phd;
    if (has("master") || std::regex_search(s, masters_abbrev)) return EducationCategory::masters_degree;
    if (text::istarts_with(s, "in college") || text::istarts_with(s, "studying") || has("no highschool") ||
        has("in highschool"))
        return EducationCategory::high_school;
    if (has("bachelor") || has("college") || has("undergraduate") || has("university degree") ||
        std::regex_search(s, bachelors_abbrev))
        return EducationCategory::college_degree;
    return EducationCategory::high_school;
}

std::vector<std::string> validate_profile(const Profile& p, bool require_style) {
    static const std::regex username_re("^[A-Z][a-z]+[A-Z][a-z]+$");
    std::vector<std::string> errors;
    if (!std::regex_match(p.username, username_re)) {
        errors.push_back("username '" + p.username + "' is not two capitalized words");
    }
    if (p.age < kMinAge || p.age > kMaxAge) {
        errors.push_back("age " + std::to_string(p.age) + " outside [18, 99]");
    }
    if (!has_city_and_country(p.city_country)) errors.push_back("city_country is not 'City, Country'");
    if (!has_city_and_country(p.birth_city_country)) errors.push_back("birth_city_country is not 'City, Country'");
    if (text::trim(p.education).empty()) errors.push_back("education is empty");
    if (text::trim(p.occupation).empty()) errors.push_back("occupation is empty");
    if (text::trim(p.income).empty()) errors.push_back("income is empty");
    if (require_style && text::trim(p.writing_style).empty()) errors.push_back("writing_style is empty");
    return errors;
}

std::string ground_truth(const Profile& p, Attribute a) {
    switch (a) {
        case Attribute::age: return std::to_string(p.age);
        case Attribute::sex: return std::string(to_string(p.sex));
        case Attribute::city_country: return p.city_country;
        case Attribute::birth_city_country: return p.birth_city_country;
        case Attribute::education: return std::string(to_string(p.education_category));
        case Attribute::occupation: return p.occupation;
        case Attribute::relationship_status: return std::string(to_string(p.relationship_status));
        case Attribute::income_level: return std::string(to_string(p.income_level));
    }
    return {};
}

std::string raw_value(const Profile& p, Attribute a) {
    return a == Attribute::education ? p.education : ground_truth(p, a);
}

std::string_view to_string(HardnessCoarse h) {
    switch (h) {
        case HardnessCoarse::direct: return "direct";
        case HardnessCoarse::indirect: return "indirect";
        case HardnessCoarse::complicated: return "complicated";
    }
    return "direct";
}

std::string_view to_string(TagSource s) { return s == TagSource::model ? "model" : "human"; }

std::string_view to_string(ReviewVerdict v) {
    switch (v) {
        case ReviewVerdict::pending: return "pending";
        case ReviewVerdict::accepted: return "accepted";
        case ReviewVerdict::edited: return "edited";
        case ReviewVerdict::rejected: return "rejected";
    }
    return "pending";
}

std::optional<HardnessCoarse> parse_hardness_coarse(std::string_view s) {
    auto k = key_form(s);
    if (k == "direct") return HardnessCoarse::direct;
    if (k == "indirect") return HardnessCoarse::indirect;
    if (k == "complicated") return HardnessCoarse::complicated;
    return std::nullopt;
}

std::optional<TagSource> parse_tag_source(std::string_view s) {
    if (s == "model") return TagSource::model;
    if (s == "human") return TagSource::human;
    return std::nullopt;
}

std::optional<ReviewVerdict> parse_review_verdict(std::string_view s) {
    if (s == "pending") return ReviewVerdict::pending;
    if (s == "accepted") return ReviewVerdict::accepted;
    if (s == "edited") return ReviewVerdict::edited;
    if (s == "rejected") return ReviewVerdict::rejected;
    return std::nullopt;
}

bool AttributeTag::human_verified() const {
    if (source == TagSource::human) return verdict != ReviewVerdict::rejected;
    return verdict == ReviewVerdict::accepted || verdict == ReviewVerdict::edited;
}

std::vector<std::string> validate_tag(const AttributeTag& t) {
    std::vector<std::string> errors;
    if (t.guesses.empty() || t.guesses.size() > 3) errors.emplace_back("guesses must hold 1 to 3 values");
    if (t.certainty < 1 || t.certainty > 5) errors.emplace_back("certainty outside [1, 5]");
    if (t.hardness_fine && (*t.hardness_fine < 1 || *t.hardness_fine > 5))
        errors.emplace_back("hardness_fine outside [1, 5]");
    if (t.source == TagSource::human && !t.hardness_fine) errors.emplace_back("human tag without hardness_fine");
    return errors;
}

// ---------------------------------------------------------------------------
// ThreadTree
// ---------------------------------------------------------------------------

ThreadTree::ThreadTree(std::string id, Attribute target, std::string question, std::string description)
    : id_(std::move(id)), target_(target), question_(std::move(question)), description_(std::move(description)) {
    CommentNode root;
    root.id = kRootId;
    root.author = std::string(kSystemAuthor);
    root.text = question_.empty() ? description_ : description_.empty() ? question_ : question_ + "\n" + description_;
    nodes_.push_back(std::move(root));
}

ThreadTree ThreadTree::from_parts(std::string id, Attribute target, std::string question, std::string description,
                                  std::vector<CommentNode> nodes, std::vector<std::string> participants) {
    ThreadTree tree(std::move(id), target, std::move(question), std::move(description));
    if (nodes.empty()) throw IntegrityError("thread " + tree.id_ + " has no root node");
    tree.nodes_ = std::move(nodes);
    tree.participants_ = std::move(participants);
    auto problems = tree.check_structure();
    if (!problems.empty()) throw IntegrityError("thread " + tree.id_ + ": " + problems.front());
    return tree;
}

const CommentNode& ThreadTree::node(CommentId id) const {
    if (!contains(id)) throw LookupError("unknown comment id " + std::to_string(id) + " in thread " + id_);
    return nodes_[id];
}

CommentNode& ThreadTree::node_for_tagging(CommentId id) {
    if (!contains(id)) throw LookupError("unknown comment id " + std::to_string(id) + " in thread " + id_);
    return nodes_[id];
}

std::size_t ThreadTree::depth(CommentId id) const {
    std::size_t d = 1;
    for (const auto* n = &node(id); n->parent; n = &nodes_[*n->parent]) ++d;
    return d;
}

CommentId ThreadTree::insert(CommentId parent, CommentNode node, const TreeLimits& limits) {
    const auto& p = this->node(parent);
    if (depth(parent) + 1 > static_cast<std::size_t>(limits.max_depth)) {
        throw DepthExceeded("reply to comment " + std::to_string(parent) + " would exceed max depth " +
                            std::to_string(limits.max_depth));
    }
    if (parent != kRootId && p.children.size() >= static_cast<std::size_t>(limits.max_fanout)) {
        throw FanoutExceeded("comment " + std::to_string(parent) + " already has " +
                             std::to_string(p.children.size()) + " replies");
    }
    return attach(parent, std::move(node));
}

CommentId ThreadTree::attach(CommentId parent, CommentNode node) {
    (void)this->node(parent);
    node.id = static_cast<CommentId>(nodes_.size());
    node.parent = parent;
    node.children.clear();
    if (node.author != kSystemAuthor) add_participant(node.author);
    const auto id = node.id;
    nodes_.push_back(std::move(node));
    nodes_[parent].children.push_back(id);
    return id;
}

void ThreadTree::add_participant(const std::string& username) {
    if (std::find(participants_.begin(), participants_.end(), username) == participants_.end()) {
        participants_.push_back(username);
    }
}

std::vector<std::string> ThreadTree::check_structure() const {
    std::vector<std::string> problems;
    if (nodes_.empty()) {
        problems.emplace_back("no root");
        return problems;
    }
    const auto& root = nodes_.front();
    if (root.id != kRootId || root.parent || root.round != 0 || root.author != kSystemAuthor) {
        problems.emplace_back("root must be id 0, SYSTEM-authored, parentless, round 0");
    }
    std::size_t child_links = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.id != i) problems.push_back("node at position " + std::to_string(i) + " has id " + std::to_string(n.id));
        child_links += n.children.size();
        for (auto c : n.children) {
            if (c >= nodes_.size() || nodes_[c].parent != n.id) {
                problems.push_back("child link " + std::to_string(n.id) + "->" + std::to_string(c) + " does not resolve");
            }
        }
        if (i == 0) continue;
        if (!n.parent || *n.parent >= n.id) {
            problems.push_back("comment " + std::to_string(n.id) + " has no earlier parent");
            continue;
        }
        const auto& siblings = nodes_[*n.parent].children;
        if (std::count(siblings.begin(), siblings.end(), n.id) != 1) {
            problems.push_back("comment " + std::to_string(n.id) + " missing from its parent's children");
        }
        if (std::find(participants_.begin(), participants_.end(), n.author) == participants_.end()) {
            problems.push_back("author '" + n.author + "' of comment " + std::to_string(n.id) + " is not a participant");
        }
    }
    if (child_links != nodes_.size() - 1) problems.emplace_back("child link count differs from node count - 1");
    return problems;
}

std::vector<const CommentNode*> path_to_root(const ThreadTree& tree, CommentId id) {
    std::vector<const CommentNode*> path;
    for (const auto* n = &tree.node(id);; n = &tree.node(*n->parent)) {
        path.push_back(n);
        if (!n->parent) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

SubtreeCounts subtree_counts(const ThreadTree& tree, CommentId id, std::string_view author) {
    SubtreeCounts counts;
    std::vector<CommentId> stack{id};
    (void)tree.node(id);
    while (!stack.empty()) {
        const auto& n = tree.node(stack.back());
        stack.pop_back();
        if (n.author != kSystemAuthor) {
            if (n.author == author) {
                ++counts.own;
            } else {
                ++counts.others;
            }
        }
        stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    return counts;
}

std::string comment_key(std::string_view thread_id, CommentId id) {
    std::string key(thread_id);
    key.push_back('/');
    key += std::to_string(id);
    return key;
}

std::optional<std::pair<std::string, CommentId>> parse_comment_key(std::string_view key) {
    auto slash = key.rfind('/');
    if (slash == std::string_view::npos || slash == 0 || slash + 1 >= key.size()) return std::nullopt;
    CommentId id = 0;
    for (char c : key.substr(slash + 1)) {
        if (c < '0' || c > '9') return std::nullopt;
        id = id * 10 + static_cast<CommentId>(c - '0');
    }
    return std::make_pair(std::string(key.substr(0, slash)), id);
}

}  // namespace pai
