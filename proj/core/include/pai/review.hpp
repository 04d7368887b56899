#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pai/datastore.hpp"
#include "pai/tagging.hpp"

namespace pai {

struct ReviewItem {
    std::string comment_id;
    std::string author;
    std::string comment_text;
    std::vector<std::string> thread_context;  // root first, up to the parent
    std::vector<AttributeTag> proposed_tags;  // model tags with their current verdicts
    std::vector<AttributeTag> human_tags;
    std::map<Attribute, int> suggested_hardness;  // coarse_to_fine of each model tag
    bool done = false;
    std::optional<std::string> reasoning_trace;
};

/// Done when every proposed tag carries a non-pending verdict; items with
/// no proposed tags are done from the start.
bool item_done(const std::vector<AttributeTag>& tags);

enum class StatusFilter { pending, done, all };

std::optional<StatusFilter> parse_status_filter(std::string_view s);

struct QueuePage {
    std::vector<ReviewItem> items;
    std::optional<std::string> next_cursor;
};

struct SubmitResult {
    int status = 200;  // 200, 404 or 422
    std::optional<ReviewItem> item;
    std::vector<FieldError> errors;
    bool duplicate = false;
};

struct AttributeProgress {
    int proposed = 0;
    int pending = 0;
    int decided = 0;
};

struct Progress {
    int total = 0;  // comments
    int done = 0;
    std::map<Attribute, AttributeProgress> per_attribute;
    int decisions = 0;
    std::map<std::string, int> per_labeler;
    double decisions_per_hour = 0.0;  // over the logged timestamp span
};

/// Event-sourced review state over one bundle. Reads run concurrently;
/// submissions are serialized and appended to decisions.jsonl when the
/// store is backed by a directory.
class ReviewStore {
public:
    explicit ReviewStore(const std::filesystem::path& dir);
    ReviewStore(DatasetBundle bundle, std::optional<std::filesystem::path> dir = std::nullopt);

    /// Items after `cursor` in comment order.
    QueuePage queue(std::size_t limit, StatusFilter filter = StatusFilter::pending, const std::string& cursor = {},
                    bool with_reasoning = false) const;

    std::optional<ReviewItem> item(const std::string& comment_id, bool with_reasoning = false) const;

    /// Validates, replays the comment's decisions with the new one and
    /// appends it. Exact repeats of a logged decision change nothing.
    SubmitResult submit(const TaggingDecision& decision);

    Progress progress() const;
    std::vector<TaggingDecision> decisions() const;
    std::vector<ThreadTree> state() const;

private:
    struct Slot {
        std::size_t thread;
        CommentId id;
    };

    ReviewItem make_item(const Slot& slot, bool with_reasoning) const;
    std::vector<AttributeTag> replay_comment(const Slot& slot, const std::vector<TaggingDecision>& extra) const;

    mutable std::shared_mutex mutex_;
    DatasetBundle bundle_;              // raw threads and the decision log
    std::vector<ThreadTree> current_;   // replayed state
    std::vector<Slot> order_;
    std::map<std::string, std::size_t> index_;  // comment key -> position in order_
    std::optional<std::filesystem::path> dir_;
};

nlohmann::json to_json(const ReviewItem& item);
nlohmann::json to_json(const Progress& p);

}  // namespace pai
