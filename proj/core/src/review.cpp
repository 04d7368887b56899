#include "pai/review.hpp"

#include <algorithm>
#include <mutex>

#include "pai/errors.hpp"
#include "pai/serialization.hpp"

namespace pai {

using nlohmann::json;

bool item_done(const std::vector<AttributeTag>& tags) {
    return std::all_of(tags.begin(), tags.end(), [](const AttributeTag& t) {
        return t.source != TagSource::model || (t.verdict && *t.verdict != ReviewVerdict::pending);
    });
}

std::optional<StatusFilter> parse_status_filter(std::string_view s) {
    if (s.empty() || s == "pending") return StatusFilter::pending;
    if (s == "done") return StatusFilter::done;
    if (s == "all") return StatusFilter::all;
    return std::nullopt;
}

ReviewStore::ReviewStore(const std::filesystem::path& dir) : ReviewStore(load_bundle(dir), dir) {}

ReviewStore::ReviewStore(DatasetBundle bundle, std::optional<std::filesystem::path> dir)
    : bundle_(std::move(bundle)), dir_(std::move(dir)) {
    bundle_.decisions = normalize_log(std::move(bundle_.decisions));
    current_ = current_threads(bundle_);
    for (std::size_t t = 0; t < bundle_.threads.size(); ++t) {
        for (const auto& node : bundle_.threads[t].nodes()) {
            if (node.id == kRootId) continue;
            index_[comment_key(bundle_.threads[t].id(), node.id)] = order_.size();
            order_.push_back({t, node.id});
        }
    }
}

ReviewItem ReviewStore::make_item(const Slot& slot, bool with_reasoning) const {
    const auto& tree = current_[slot.thread];
    const auto& node = tree.node(slot.id);
    ReviewItem item;
    item.comment_id = comment_key(tree.id(), node.id);
    item.author = node.author;
    item.comment_text = node.text;
    for (const auto* n : path_to_root(tree, node.id)) {
        if (n->id != node.id) item.thread_context.push_back(n->text);
    }
    for (const auto& tag : node.tags) {
        if (tag.source == TagSource::model) {
            item.proposed_tags.push_back(tag);
            if (tag.hardness_coarse) item.suggested_hardness[tag.attribute] = coarse_to_fine(*tag.hardness_coarse);
        } else {
            item.human_tags.push_back(tag);
        }
    }
    item.done = item_done(node.tags);
    if (with_reasoning) item.reasoning_trace = node.reasoning_trace;
    return item;
}

QueuePage ReviewStore::queue(std::size_t limit, StatusFilter filter, const std::string& cursor,
                             bool with_reasoning) const {
    std::shared_lock lock(mutex_);
    std::size_t start = 0;
    if (!cursor.empty()) {
        const auto it = index_.find(cursor);
        if (it == index_.end()) throw LookupError("unknown cursor " + cursor);
        start = it->second + 1;
    }
    QueuePage page;
    for (std::size_t i = start; i < order_.size(); ++i) {
        const auto& slot = order_[i];
        const bool done = item_done(current_[slot.thread].node(slot.id).tags);
        if ((filter == StatusFilter::pending && done) || (filter == StatusFilter::done && !done)) continue;
        if (page.items.size() == limit) {
            page.next_cursor = page.items.back().comment_id;
            break;
        }
        page.items.push_back(make_item(slot, with_reasoning));
    }
    return page;
}

std::optional<ReviewItem> ReviewStore::item(const std::string& comment_id, bool with_reasoning) const {
    std::shared_lock lock(mutex_);
    const auto it = index_.find(comment_id);
    if (it == index_.end()) return std::nullopt;
    return make_item(order_[it->second], with_reasoning);
}

std::vector<AttributeTag> ReviewStore::replay_comment(const Slot& slot, const std::vector<TaggingDecision>& extra) const {
    const auto key = comment_key(bundle_.threads[slot.thread].id(), slot.id);
    std::vector<TaggingDecision> log;
    for (const auto& d : bundle_.decisions) {
        if (d.comment_id == key) log.push_back(d);
    }
    log.insert(log.end(), extra.begin(), extra.end());
    auto tags = bundle_.threads[slot.thread].node(slot.id).tags;
    for (const auto& d : normalize_log(std::move(log))) apply_decision(tags, d);
    return tags;
}

SubmitResult ReviewStore::submit(const TaggingDecision& decision) {
    SubmitResult result;
    if (auto errors = validate_decision(decision); !errors.empty()) {
        result.status = 422;
        result.errors = std::move(errors);
        return result;
    }
    std::unique_lock lock(mutex_);
    const auto it = index_.find(decision.comment_id);
    if (it == index_.end()) {
        result.status = 404;
        result.errors.push_back({"comment_id", "unknown comment " + decision.comment_id});
        return result;
    }
    const auto& slot = order_[it->second];
    if (std::find(bundle_.decisions.begin(), bundle_.decisions.end(), decision) != bundle_.decisions.end()) {
        result.duplicate = true;
        result.item = make_item(slot, false);
        return result;
    }
    std::vector<AttributeTag> tags;
    try {
        tags = replay_comment(slot, {decision});
    } catch (const DecisionError& e) {
        result.status = 422;
        result.errors.push_back({"attribute", e.what()});
        return result;
    }
    if (dir_) append_decision(*dir_, decision);
    bundle_.decisions.push_back(decision);
    bundle_.decisions = normalize_log(std::move(bundle_.decisions));
    current_[slot.thread].node_for_tagging(slot.id).tags = std::move(tags);
    result.item = make_item(slot, false);
    return result;
}

Progress ReviewStore::progress() const {
    std::shared_lock lock(mutex_);
    Progress p;
    for (Attribute a : kAllAttributes) p.per_attribute[a] = {};
    for (const auto& slot : order_) {
        const auto& tags = current_[slot.thread].node(slot.id).tags;
        ++p.total;
        p.done += item_done(tags);
        for (const auto& t : tags) {
            if (t.source != TagSource::model) continue;
            auto& a = p.per_attribute[t.attribute];
            ++a.proposed;
            if (!t.verdict || *t.verdict == ReviewVerdict::pending) ++a.pending;
            else ++a.decided;
        }
    }
    p.decisions = static_cast<int>(bundle_.decisions.size());
    std::int64_t first = 0, last = 0;
    for (const auto& d : bundle_.decisions) {
        ++p.per_labeler[d.labeler];
        if (first == 0 || d.timestamp < first) first = d.timestamp;
        last = std::max(last, d.timestamp);
    }
    if (last > first) p.decisions_per_hour = p.decisions * 3600000.0 / static_cast<double>(last - first);
    return p;
}

std::vector<TaggingDecision> ReviewStore::decisions() const {
    std::shared_lock lock(mutex_);
    return bundle_.decisions;
}

std::vector<ThreadTree> ReviewStore::state() const {
    std::shared_lock lock(mutex_);
    return current_;
}

json to_json(const ReviewItem& item) {
    json suggested = json::object();
    for (const auto& [attr, h] : item.suggested_hardness) suggested[std::string(to_string(attr))] = h;
    return json{{"comment_id", item.comment_id},
                {"author", item.author},
                {"comment_text", item.comment_text},
                {"thread_context", item.thread_context},
                {"proposed_tags", item.proposed_tags},
                {"human_tags", item.human_tags},
                {"suggested_hardness", suggested},
                {"status", item.done ? "done" : "pending"},
                {"reasoning_trace", item.reasoning_trace ? json(*item.reasoning_trace) : json(nullptr)}};
}

json to_json(const Progress& p) {
    json attrs = json::object();
    for (const auto& [attr, a] : p.per_attribute) {
        attrs[std::string(to_string(attr))] = {{"proposed", a.proposed}, {"pending", a.pending}, {"decided", a.decided}};
    }
    return json{{"total", p.total},
                {"done", p.done},
                {"pending", p.total - p.done},
                {"per_attribute", attrs},
                {"decisions", p.decisions},
                {"per_labeler", p.per_labeler},
                {"decisions_per_hour", p.decisions_per_hour}};
}

}  // namespace pai
