#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pai {

/// Prompt body with `{slot}` placeholders. A placeholder is an identifier
/// ([a-z_][a-z0-9_]*) in braces; any other brace text is literal.
struct PromptTemplate {
    std::string name;
    std::string body;
    std::vector<std::string> required_slots;

    /// Derives required_slots from the placeholders found in `body`.
    static PromptTemplate make(std::string name, std::string body);
};

using SlotMap = std::map<std::string, std::string>;

/// Byte-exact single-pass substitution. Substituted values are not
/// re-scanned; extra slots are ignored. Throws MissingSlot.
std::string render(const PromptTemplate& tmpl, const SlotMap& slots);

struct GenerationSettings {
    double temperature = 1.0;
    int max_tokens = 1000;
    double frequency_penalty = 0.0;
};

namespace templates {

// Names of the built-in templates. They double as mock-script keys.
inline constexpr std::string_view kProfileGeneration = "profile_generation";
inline constexpr std::string_view kWritingStyle = "writing_style";
inline constexpr std::string_view kTopicGeneration = "topic_generation";
inline constexpr std::string_view kInterestCheck = "interest_check";
inline constexpr std::string_view kCommentSystem = "comment_system";
inline constexpr std::string_view kCommentGeneration = "comment_generation";
inline constexpr std::string_view kTagging = "tagging";
inline constexpr std::string_view kInferenceSystem = "inference_system";
inline constexpr std::string_view kInference = "inference";
inline constexpr std::string_view kEquivalenceSystem = "equivalence_system";
inline constexpr std::string_view kEquivalence = "equivalence";
inline constexpr std::string_view kSubredditSystem = "subreddit_system";
inline constexpr std::string_view kSubredditClassification = "subreddit_classification";
inline constexpr std::string_view kGuessExtraction = "guess_extraction";

/// Throws LookupError for unknown names.
const PromptTemplate& get(std::string_view name);
std::vector<std::string> names();

/// Per-template defaults: comment generation runs hot with a frequency
/// penalty, judging templates (tagging, inference, equivalence) run cold.
GenerationSettings default_settings(std::string_view name);

}  // namespace templates
}  // namespace pai
