#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pai {

// ---------------------------------------------------------------------------
// Attributes and categorical domains
// ---------------------------------------------------------------------------

enum class Attribute {
    age,
    sex,
    city_country,
    birth_city_country,
    education,
    occupation,
    relationship_status,
    income_level,
};

inline constexpr std::array<Attribute, 8> kAllAttributes = {
    Attribute::age,        Attribute::sex,        Attribute::city_country,
    Attribute::birth_city_country, Attribute::education, Attribute::occupation,
    Attribute::relationship_status, Attribute::income_level,
};

/// Canonical snake_case name ("city_country").
std::string_view to_string(Attribute a);

/// Accepts canonical names and the aliases used across prompts and the
/// published dataset ("location", "place of birth", "income level", ...).
std::optional<Attribute> parse_attribute(std::string_view name);

/// Row label used in hardness tables ("Place of Birth").
std::string_view display_name(Attribute a);

/// Row order of the hardness tables: Age, Place of Birth, Location, Education,
/// Income Level, Occupation, Relationship Status, Sex.
inline constexpr std::array<Attribute, 8> kTableOrder = {
    Attribute::age,        Attribute::birth_city_country, Attribute::city_country,
    Attribute::education,  Attribute::income_level,       Attribute::occupation,
    Attribute::relationship_status, Attribute::sex,
};

/// Attributes scored by canonical-form equality.
bool is_categorical(Attribute a);

enum class Sex { male, female };
enum class EducationCategory { high_school, college_degree, masters_degree, phd };
enum class IncomeLevel { low, middle, high, very_high };
enum class RelationshipStatus { single, in_relationship, married, divorced, widowed, engaged };

std::string_view to_string(Sex v);
std::string_view to_string(EducationCategory v);
std::string_view to_string(IncomeLevel v);
std::string_view to_string(RelationshipStatus v);

std::optional<Sex> parse_sex(std::string_view s);
std::optional<EducationCategory> parse_education_category(std::string_view s);
std::optional<IncomeLevel> parse_income_level(std::string_view s);
std::optional<RelationshipStatus> parse_relationship_status(std::string_view s);

/// Keyword mapping of free-text education onto the four categories:
/// phd/doctorate -> PhD; master -> master's; bachelor/college/BSc/BA -> college
/// degree; anything else -> high school.
EducationCategory categorize_education(std::string_view education);

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

struct Profile {
    std::string username;
    int age = 0;
    Sex sex = Sex::male;
    std::string city_country;
    std::string birth_city_country;
    std::string education;
    EducationCategory education_category = EducationCategory::high_school;
    std::string occupation;
    std::string income;
    IncomeLevel income_level = IncomeLevel::low;
    RelationshipStatus relationship_status = RelationshipStatus::single;
    std::string writing_style;

    bool operator==(const Profile&) const = default;
};

inline constexpr int kMinAge = 18;
inline constexpr int kMaxAge = 99;

/// Mechanical invariant checks; empty result means valid. Writing style is
/// only required when `require_style` is set (after enrichment).
std::vector<std::string> validate_profile(const Profile& p, bool require_style = false);

/// Ground-truth value of one attribute as text (categoricals in canonical
/// form, education as its category).
std::string ground_truth(const Profile& p, Attribute a);

/// Raw profile value used for exact-overlap comparisons (education verbatim).
std::string raw_value(const Profile& p, Attribute a);

// ---------------------------------------------------------------------------
// Tags and labels
// ---------------------------------------------------------------------------

enum class HardnessCoarse { direct, indirect, complicated };
enum class TagSource { model, human };
enum class ReviewVerdict { pending, accepted, edited, rejected };

std::string_view to_string(HardnessCoarse h);
std::string_view to_string(TagSource s);
std::string_view to_string(ReviewVerdict v);
std::optional<HardnessCoarse> parse_hardness_coarse(std::string_view s);
std::optional<TagSource> parse_tag_source(std::string_view s);
std::optional<ReviewVerdict> parse_review_verdict(std::string_view s);

struct AttributeTag {
    Attribute attribute = Attribute::age;
    std::vector<std::string> guesses;  // first = most confident
    int certainty = 1;
    std::optional<HardnessCoarse> hardness_coarse;
    std::optional<int> hardness_fine;
    TagSource source = TagSource::model;
    std::optional<ReviewVerdict> verdict;

    bool operator==(const AttributeTag&) const = default;

    /// Counts toward profile-level labels: a human tag, or a model tag a
    /// reviewer accepted or edited.
    bool human_verified() const;
};

std::vector<std::string> validate_tag(const AttributeTag& t);

struct ProfileLabel {
    std::string value;
    int hardness = 1;
    int certainty = 1;
    std::vector<std::string> supporting_comments;

    bool operator==(const ProfileLabel&) const = default;
};

struct ProfileLabelSet {
    std::string username;
    std::map<Attribute, ProfileLabel> labels;

    bool operator==(const ProfileLabelSet&) const = default;
};

// ---------------------------------------------------------------------------
// Thread trees
// ---------------------------------------------------------------------------

using CommentId = std::uint32_t;

inline constexpr std::string_view kSystemAuthor = "SYSTEM";
inline constexpr CommentId kRootId = 0;

struct CommentNode {
    CommentId id = 0;
    std::string author;
    std::string text;
    std::optional<CommentId> parent;
    std::vector<CommentId> children;
    int round = 0;
    std::optional<std::string> reasoning_trace;
    std::vector<AttributeTag> tags;

    bool operator==(const CommentNode&) const = default;
};

struct TreeLimits {
    int max_depth = 5;
    int max_fanout = 3;  // root exempt
};

class ThreadTree {
public:
    ThreadTree(std::string id, Attribute target, std::string question, std::string description);

    /// Rebuilds a tree from stored nodes; throws IntegrityError when the
    /// structural invariants do not hold.
    static ThreadTree from_parts(std::string id, Attribute target, std::string question,
                                 std::string description, std::vector<CommentNode> nodes,
                                 std::vector<std::string> participants);

    const std::string& id() const noexcept { return id_; }
    Attribute target_attribute() const noexcept { return target_; }
    const std::string& topic_question() const noexcept { return question_; }
    const std::string& topic_description() const noexcept { return description_; }
    const std::vector<std::string>& participants() const noexcept { return participants_; }
    const std::vector<CommentNode>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    bool contains(CommentId id) const noexcept { return id < nodes_.size(); }
    const CommentNode& root() const { return nodes_.front(); }
    const CommentNode& node(CommentId id) const;
    /// Only tags and reasoning may be edited through this handle.
    CommentNode& node_for_tagging(CommentId id);

    /// Root depth is 1.
    std::size_t depth(CommentId id) const;

    /// Checked insertion: throws DepthExceeded / FanoutExceeded. Assigns the
    /// next ordinal id and returns it.
    CommentId insert(CommentId parent, CommentNode node, const TreeLimits& limits);

    /// Structural append without depth or fanout limits (imports).
    CommentId attach(CommentId parent, CommentNode node);

    void add_participant(const std::string& username);

    /// Structural violations; empty when the tree is valid.
    std::vector<std::string> check_structure() const;

    bool operator==(const ThreadTree&) const = default;

private:
    std::string id_;
    Attribute target_;
    std::string question_;
    std::string description_;
    std::vector<CommentNode> nodes_;
    std::vector<std::string> participants_;
};

/// Root-first chain ending at `id`; throws LookupError on unknown ids.
std::vector<const CommentNode*> path_to_root(const ThreadTree& tree, CommentId id);

struct SubtreeCounts {
    int own = 0;     // m: comments by the author of interest
    int others = 0;  // k: comments by everybody else (the SYSTEM root excluded)

    bool operator==(const SubtreeCounts&) const = default;
};

SubtreeCounts subtree_counts(const ThreadTree& tree, CommentId id, std::string_view author);

/// Dataset-wide comment reference "thread_id/ordinal".
std::string comment_key(std::string_view thread_id, CommentId id);
std::optional<std::pair<std::string, CommentId>> parse_comment_key(std::string_view key);

}  // namespace pai
