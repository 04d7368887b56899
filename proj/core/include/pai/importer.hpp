#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pai/datastore.hpp"

namespace pai {

/// Field names of the published comment records. The defaults describe
/// one JSON object per comment:
///   {"author", "id", "parent_id", "thread_id", "text",
///    "profile": {...},
///    "guesses": [{"feature", "guesses", "hardness", "certainty", "model"}],
///    "reviews": {"human": {"<attribute>": {"estimate", "hardness", "certainty"}}}}
/// Every name can be overridden from a JSON mapping file with the same keys.
struct ImportMapping {
    std::string author = "author";
    std::string comment_id = "id";
    std::string parent_id = "parent_id";
    std::string thread_id = "thread_id";
    std::string text = "text";
    std::string thread_title = "title";  // optional
    std::string profile = "profile";
    std::string model_guesses = "guesses";
    std::string reviews = "reviews";
    std::string human_reviewer = "human";

    // canonical profile field -> published name
    std::map<std::string, std::string> profile_fields = {
        {"username", "username"},
        {"age", "age"},
        {"sex", "sex"},
        {"city_country", "city_country"},
        {"birth_city_country", "birth_city_country"},
        {"education", "education"},
        {"occupation", "occupation"},
        {"income", "income"},
        {"income_level", "income_level"},
        {"relationship_status", "relationship_status"},
        {"writing_style", "style"},
    };

    std::string guess_feature = "feature";
    std::string guess_values = "guesses";
    std::string guess_hardness = "hardness";
    std::string guess_certainty = "certainty";

    std::string review_estimate = "estimate";
    std::string review_hardness = "hardness";
    std::string review_certainty = "certainty";

    /// Record keys accepted without being mapped.
    std::vector<std::string> ignored = {"username", "children", "model", "timestamp", "score"};

    /// Overrides the defaults with the keys present in `j`.
    static ImportMapping from_json(const nlohmann::json& j);
    static ImportMapping load(const std::filesystem::path& path);
};

struct ImportReport {
    int comments = 0;
    int threads = 0;
    int profiles = 0;
    int model_tags = 0;
    int human_labels = 0;  // human-verified (comment, attribute) labels
    std::vector<std::string> unmatched_fields;
};

/// Reads a .jsonl file, or every .jsonl / .json file of a directory in
/// name order. Each thread gets a SYSTEM root; parentless records hang off
/// it. Reviewer labels become human tags, model guesses pending model
/// tags. Throws ImportError on truncated or unreadable records, missing
/// mapped fields (listing the record's unmatched columns) and dangling
/// parents.
DatasetBundle import_published(const std::filesystem::path& path, const ImportMapping& mapping = {},
                               ImportReport* report = nullptr);

}  // namespace pai
