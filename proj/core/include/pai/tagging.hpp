#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pai/gateway.hpp"
#include "pai/model.hpp"
#include "pai/simulation.hpp"

namespace pai {

/// Parses the Reasoning / Guess / Certainty / Hardness answer of the tagging
/// prompt. "Guess: None" yields no tags; features outside the schema are
/// dropped. Throws TagParseError when the Guess section is missing.
std::vector<AttributeTag> parse_tagging(std::string_view raw);

std::vector<AttributeTag> tag_comment(std::string_view comment_text, Gateway& gateway, std::uint64_t seed);

/// Inline oracle for simulate_thread backed by the tagging prompt.
CommentOracle model_oracle(Gateway& gateway);

/// Tags every untagged comment of the threads concurrently (post-hoc mode).
/// Returns the number of comments whose tagging failed.
int tag_threads(std::vector<ThreadTree>& threads, Gateway& gateway, std::uint64_t seed);

/// Reviewer pre-fill: direct -> 1, indirect -> 3, complicated -> 4.
int coarse_to_fine(HardnessCoarse h);

enum class DecisionAction { accept, edit, reject, add };

std::string_view to_string(DecisionAction a);
std::optional<DecisionAction> parse_decision_action(std::string_view s);

struct TaggingDecision {
    std::string comment_id;  // "thread_id/ordinal"
    Attribute attribute = Attribute::age;
    DecisionAction action = DecisionAction::accept;
    std::vector<std::string> edited_guesses;
    std::optional<int> hardness_fine;
    std::optional<int> certainty;
    std::string labeler;
    std::int64_t timestamp = 0;  // milliseconds since the Unix epoch

    bool operator==(const TaggingDecision&) const = default;
};

struct FieldError {
    std::string field;
    std::string message;

    bool operator==(const FieldError&) const = default;
};

/// Schema-level checks (no dataset lookups).
std::vector<FieldError> validate_decision(const TaggingDecision& d);

/// Applies one decision to a comment's tag list. accept/edit/reject need a
/// model tag for the attribute; add inserts (or replaces) the human tag.
/// Throws DecisionError.
void apply_decision(std::vector<AttributeTag>& tags, const TaggingDecision& decision);

/// Stable timestamp order with exact duplicates removed.
std::vector<TaggingDecision> normalize_log(std::vector<TaggingDecision> log);

/// Replays a decision log onto raw threads. Throws DecisionError naming
/// dangling comment references.
void replay_decisions(std::vector<ThreadTree>& threads, const std::vector<TaggingDecision>& log);

/// Tags of one comment together with its dataset key.
struct CommentTags {
    std::string key;
    std::string author;
    std::vector<AttributeTag> tags;
};

std::vector<CommentTags> collect_comment_tags(const std::vector<ThreadTree>& threads);

enum class LabelSource {
    human_verified,  // human tags plus accepted or edited model tags
    model,           // every non-rejected model tag, hardness from coarse_to_fine
};

/// Per attribute: hardness = min, certainty = max, supporting comments = all
/// contributing keys (sorted). The value is the first guess of the support
/// ranked by certainty desc, hardness asc, then text, so the result does
/// not depend on input order. Comments by other authors are ignored.
ProfileLabelSet aggregate_profile_labels(const std::vector<CommentTags>& comments, const std::string& username,
                                         LabelSource source = LabelSource::human_verified);

/// (truth, guess, attribute) -> equivalent?
using EquivalenceFn = std::function<bool(const std::string& truth, const std::string& guess, Attribute a)>;

/// Drops attributes whose value is not equivalent to the profile's ground
/// truth; kept labels carry the ground-truth value.
ProfileLabelSet sanitize_against_ground_truth(const ProfileLabelSet& labels, const Profile& profile,
                                              const EquivalenceFn& equivalent);

/// Aggregates every profile in order and, given `equivalent`, sanitizes the
/// result. Profiles left without labels are omitted.
std::vector<ProfileLabelSet> aggregate_dataset(const std::vector<ThreadTree>& threads,
                                               const std::vector<Profile>& profiles, LabelSource source,
                                               const EquivalenceFn* equivalent);

}  // namespace pai
