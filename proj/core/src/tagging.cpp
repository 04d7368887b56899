#include "pai/tagging.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/parallel.hpp"
#include "pai/rng.hpp"
#include "pai/templates.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

struct Section {
    std::string_view name;
    std::size_t start = std::string_view::npos;  // first byte after the marker
    std::size_t marker = std::string_view::npos;
};

/// Marker must open a line or follow whitespace, so "guess:" inside prose
/// such as "my guess: ..." is still accepted but "misguess:" is not.
std::size_t find_marker(std::string_view raw, std::string_view marker) {
    for (auto pos = text::ifind(raw, marker); pos != std::string_view::npos; pos = text::ifind(raw, marker, pos + 1)) {
        if (pos == 0 || std::isspace(static_cast<unsigned char>(raw[pos - 1])) || raw[pos - 1] == '*') return pos;
    }
    return std::string_view::npos;
}

std::map<std::string_view, std::string_view> split_sections(std::string_view raw) {
    std::vector<Section> sections;
    for (std::string_view name : {"Reasoning:", "Guess:", "Certainty:", "Hardness:"}) {
        Section s{name};
        s.marker = find_marker(raw, name);
        if (s.marker != std::string_view::npos) s.start = s.marker + name.size();
        sections.push_back(s);
    }
    std::map<std::string_view, std::string_view> out;
    for (const auto& s : sections) {
        if (s.marker == std::string_view::npos) continue;
        std::size_t end = raw.size();
        for (const auto& other : sections) {
            if (other.marker != std::string_view::npos && other.marker > s.marker) end = std::min(end, other.marker);
        }
        out[s.name] = text::trim(raw.substr(s.start, end - s.start));
    }
    return out;
}

/// "feature - rest" (also "feature: rest").
std::optional<std::pair<std::string, std::string>> split_feature_line(std::string_view line) {
    line = text::trim(line);
    while (!line.empty() && (line.front() == '-' || line.front() == '*')) line = text::trim(line.substr(1));
    auto sep = line.find(" - ");
    std::size_t sep_len = 3;
    if (sep == std::string_view::npos) {
        sep = line.find(':');
        sep_len = 1;
    }
    if (sep == std::string_view::npos) {
        sep = line.find('-');
        sep_len = 1;
    }
    if (sep == std::string_view::npos) return std::nullopt;
    return std::pair{std::string(text::trim(line.substr(0, sep))), std::string(text::trim(line.substr(sep + sep_len)))};
}

bool is_none(std::string_view s) {
    s = text::trim(s);
    while (!s.empty() && (s.back() == '.' || s.back() == ']')) s.remove_suffix(1);
    while (!s.empty() && s.front() == '[') s.remove_prefix(1);
    return s.empty() || text::iequals(s, "none");
}

std::map<Attribute, std::string> feature_values(std::string_view section) {
    std::map<Attribute, std::string> out;
    if (is_none(section)) return out;
    for (const auto& line : text::split(section, '\n')) {
        auto kv = split_feature_line(line);
        if (!kv) continue;
        if (auto attr = parse_attribute(kv->first)) out.emplace(*attr, kv->second);
    }
    return out;
}

std::string clean_value(std::string_view v) {
    v = text::trim(v);
    while (!v.empty() && (v.back() == '.' || v.back() == ',')) v.remove_suffix(1);
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        v = v.substr(1, v.size() - 2);
    }
    return std::string(text::trim(v));
}

}  // namespace

std::vector<AttributeTag> parse_tagging(std::string_view raw) {
    const auto sections = split_sections(raw);
    const auto guess = sections.find("Guess:");
    if (guess == sections.end()) throw TagParseError("tagging answer has no Guess section", std::string(raw));
    std::vector<AttributeTag> tags;
    if (is_none(guess->second)) return tags;

    const auto certainty =
        feature_values(sections.count("Certainty:") ? sections.at("Certainty:") : std::string_view{});
    const auto hardness = feature_values(sections.count("Hardness:") ? sections.at("Hardness:") : std::string_view{});

    for (const auto& line : text::split(guess->second, '\n')) {
        if (is_none(line)) continue;
        auto kv = split_feature_line(line);
        if (!kv) {
            spdlog::warn("unreadable guess line dropped: {}", line);
            continue;
        }
        auto attr = parse_attribute(kv->first);
        if (!attr) {
            spdlog::warn("guess for unknown feature '{}' dropped", kv->first);
            continue;
        }
        if (std::any_of(tags.begin(), tags.end(), [&](const AttributeTag& t) { return t.attribute == *attr; })) continue;
        AttributeTag tag;
        tag.attribute = *attr;
        for (const auto& g : text::split(kv->second, ';')) {
            auto v = clean_value(g);
            if (!v.empty() && tag.guesses.size() < 3) tag.guesses.push_back(std::move(v));
        }
        if (tag.guesses.empty()) continue;
        if (auto it = certainty.find(*attr); it != certainty.end()) {
            try {
                tag.certainty = std::clamp(std::stoi(it->second), 1, 5);
            } catch (const std::exception&) {
                tag.certainty = 1;
            }
        }
        if (auto it = hardness.find(*attr); it != hardness.end()) {
            tag.hardness_coarse = parse_hardness_coarse(clean_value(it->second));
        }
        tag.source = TagSource::model;
        tag.verdict = ReviewVerdict::pending;
        tags.push_back(std::move(tag));
    }
    return tags;
}

std::vector<AttributeTag> tag_comment(std::string_view comment_text, Gateway& gateway, std::uint64_t seed) {
    if (text::trim(comment_text).empty()) throw PreconditionError("cannot tag an empty comment");
    const auto prompt = render(templates::get(templates::kTagging), {{"comment", std::string(comment_text)}});
    auto request = gateway.prepare(templates::kTagging, "", prompt, seed);
    return parse_tagging(gateway.complete(request));
}

CommentOracle model_oracle(Gateway& gateway) {
    return [&gateway](const CommentNode& node, std::uint64_t seed) { return tag_comment(node.text, gateway, seed); };
}

int tag_threads(std::vector<ThreadTree>& threads, Gateway& gateway, std::uint64_t seed) {
    std::vector<std::pair<std::size_t, CommentId>> work;
    for (std::size_t t = 0; t < threads.size(); ++t) {
        for (const auto& node : threads[t].nodes()) {
            if (node.id != kRootId && node.tags.empty()) work.emplace_back(t, node.id);
        }
    }
    std::vector<std::vector<AttributeTag>> results(work.size());
    std::vector<char> failed(work.size(), 0);
    parallel_for(work.size(), gateway.max_in_flight(), [&](std::size_t i) {
        const auto& [t, id] = work[i];
        const auto& tree = threads[t];
        try {
            results[i] = tag_comment(tree.node(id).text, gateway, mix_seed(seed, stable_hash(comment_key(tree.id(), id))));
        } catch (const BackendUnavailable&) {
            throw;
        } catch (const Error& e) {
            spdlog::warn("tagging {} failed: {}", comment_key(tree.id(), id), e.what());
            failed[i] = 1;
        }
    });
    for (std::size_t i = 0; i < work.size(); ++i) {
        threads[work[i].first].node_for_tagging(work[i].second).tags = std::move(results[i]);
    }
    return static_cast<int>(std::count(failed.begin(), failed.end(), 1));
}

int coarse_to_fine(HardnessCoarse h) {
    switch (h) {
        case HardnessCoarse::direct: return 1;
        case HardnessCoarse::indirect: return 3;
        case HardnessCoarse::complicated: return 4;
    }
    return 3;
}

std::string_view to_string(DecisionAction a) {
    switch (a) {
        case DecisionAction::accept: return "accept";
        case DecisionAction::edit: return "edit";
        case DecisionAction::reject: return "reject";
        case DecisionAction::add: return "add";
    }
    return "accept";
}

std::optional<DecisionAction> parse_decision_action(std::string_view s) {
    const auto k = text::normalize(s);
    if (k == "accept") return DecisionAction::accept;
    if (k == "edit") return DecisionAction::edit;
    if (k == "reject") return DecisionAction::reject;
    if (k == "add") return DecisionAction::add;
    return std::nullopt;
}

std::vector<FieldError> validate_decision(const TaggingDecision& d) {
    std::vector<FieldError> errors;
    if (!parse_comment_key(d.comment_id)) errors.push_back({"comment_id", "expected 'thread_id/ordinal'"});
    const bool needs_guesses = d.action == DecisionAction::edit || d.action == DecisionAction::add;
    if (needs_guesses) {
        if (d.edited_guesses.empty() || d.edited_guesses.size() > 3) {
            errors.push_back({"edited_guesses", "must hold 1 to 3 values"});
        } else if (std::any_of(d.edited_guesses.begin(), d.edited_guesses.end(),
                               [](const std::string& g) { return text::trim(g).empty(); })) {
            errors.push_back({"edited_guesses", "values must be non-empty"});
        }
    }
    if (d.action != DecisionAction::reject) {
        if (!d.hardness_fine) errors.push_back({"hardness_fine", "required for accept, edit and add"});
        else if (*d.hardness_fine < 1 || *d.hardness_fine > 5) errors.push_back({"hardness_fine", "must lie in [1, 5]"});
    }
    if (d.action == DecisionAction::add && !d.certainty) errors.push_back({"certainty", "required for add"});
    if (d.certainty && (*d.certainty < 1 || *d.certainty > 5)) errors.push_back({"certainty", "must lie in [1, 5]"});
    if (d.timestamp < 0) errors.push_back({"timestamp", "must be non-negative"});
    return errors;
}

void apply_decision(std::vector<AttributeTag>& tags, const TaggingDecision& d) {
    if (auto errors = validate_decision(d); !errors.empty()) {
        throw DecisionError(errors.front().field + ": " + errors.front().message);
    }
    if (d.action == DecisionAction::add) {
        AttributeTag tag;
        tag.attribute = d.attribute;
        tag.guesses = d.edited_guesses;
        tag.certainty = *d.certainty;
        tag.hardness_fine = d.hardness_fine;
        tag.source = TagSource::human;
        auto it = std::find_if(tags.begin(), tags.end(), [&](const AttributeTag& t) {
            return t.source == TagSource::human && t.attribute == d.attribute;
        });
        if (it != tags.end()) *it = std::move(tag);
        else tags.push_back(std::move(tag));
        return;
    }
    auto it = std::find_if(tags.begin(), tags.end(), [&](const AttributeTag& t) {
        return t.source == TagSource::model && t.attribute == d.attribute;
    });
    if (it == tags.end()) {
        throw DecisionError("comment " + d.comment_id + " has no model tag for " + std::string(to_string(d.attribute)));
    }
    switch (d.action) {
        case DecisionAction::accept: it->verdict = ReviewVerdict::accepted; break;
        case DecisionAction::edit:
            it->verdict = ReviewVerdict::edited;
            it->guesses = d.edited_guesses;
            break;
        case DecisionAction::reject: it->verdict = ReviewVerdict::rejected; break;
        case DecisionAction::add: break;
    }
    if (d.hardness_fine) it->hardness_fine = d.hardness_fine;
    if (d.certainty) it->certainty = *d.certainty;
}

std::vector<TaggingDecision> normalize_log(std::vector<TaggingDecision> log) {
    std::stable_sort(log.begin(), log.end(),
                     [](const TaggingDecision& a, const TaggingDecision& b) { return a.timestamp < b.timestamp; });
    std::vector<TaggingDecision> out;
    for (auto& d : log) {
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
    }
    return out;
}

void replay_decisions(std::vector<ThreadTree>& threads, const std::vector<TaggingDecision>& log) {
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < threads.size(); ++i) index[threads[i].id()] = i;
    for (const auto& d : normalize_log(log)) {
        const auto key = parse_comment_key(d.comment_id);
        auto it = key ? index.find(key->first) : index.end();
        if (it == index.end() || !threads[it->second].contains(key->second) || key->second == kRootId) {
            throw DecisionError("decision references unknown comment " + d.comment_id);
        }
        apply_decision(threads[it->second].node_for_tagging(key->second).tags, d);
    }
}

std::vector<CommentTags> collect_comment_tags(const std::vector<ThreadTree>& threads) {
    std::vector<CommentTags> out;
    for (const auto& tree : threads) {
        for (const auto& node : tree.nodes()) {
            if (node.id == kRootId) continue;
            out.push_back({comment_key(tree.id(), node.id), node.author, node.tags});
        }
    }
    return out;
}

ProfileLabelSet aggregate_profile_labels(const std::vector<CommentTags>& comments, const std::string& username,
                                         LabelSource source) {
    struct Support {
        std::string value;
        int certainty;
        int hardness;
        std::string key;
    };
    std::map<Attribute, std::vector<Support>> by_attr;
    for (const auto& c : comments) {
        if (c.author != username) continue;
        for (const auto& t : c.tags) {
            if (t.guesses.empty() || t.verdict == ReviewVerdict::rejected) continue;
            int hardness = 0;
            if (source == LabelSource::human_verified) {
                if (!t.human_verified() || !t.hardness_fine) continue;
                hardness = *t.hardness_fine;
            } else {
                if (t.source != TagSource::model) continue;
                hardness = t.hardness_fine ? *t.hardness_fine
                                           : t.hardness_coarse ? coarse_to_fine(*t.hardness_coarse) : 3;
            }
            by_attr[t.attribute].push_back({t.guesses.front(), t.certainty, hardness, c.key});
        }
    }
    ProfileLabelSet out;
    out.username = username;
    for (auto& [attr, supports] : by_attr) {
        const auto best = std::min_element(supports.begin(), supports.end(), [](const Support& a, const Support& b) {
            return std::tuple(-a.certainty, a.hardness, a.value) < std::tuple(-b.certainty, b.hardness, b.value);
        });
        ProfileLabel label;
        label.value = best->value;
        label.hardness = 5;
        label.certainty = 1;
        for (const auto& s : supports) {
            label.hardness = std::min(label.hardness, s.hardness);
            label.certainty = std::max(label.certainty, s.certainty);
            label.supporting_comments.push_back(s.key);
        }
        std::sort(label.supporting_comments.begin(), label.supporting_comments.end());
        label.supporting_comments.erase(
            std::unique(label.supporting_comments.begin(), label.supporting_comments.end()),
            label.supporting_comments.end());
        out.labels.emplace(attr, std::move(label));
    }
    return out;
}

ProfileLabelSet sanitize_against_ground_truth(const ProfileLabelSet& labels, const Profile& profile,
                                              const EquivalenceFn& equivalent) {
    ProfileLabelSet out;
    out.username = labels.username;
    for (const auto& [attr, label] : labels.labels) {
        const auto truth = ground_truth(profile, attr);
        if (!equivalent(truth, label.value, attr)) continue;
        auto kept = label;
        kept.value = truth;
        out.labels.emplace(attr, std::move(kept));
    }
    return out;
}

std::vector<ProfileLabelSet> aggregate_dataset(const std::vector<ThreadTree>& threads,
                                               const std::vector<Profile>& profiles, LabelSource source,
                                               const EquivalenceFn* equivalent) {
    const auto comments = collect_comment_tags(threads);
    std::vector<ProfileLabelSet> out;
    for (const auto& p : profiles) {
        auto set = aggregate_profile_labels(comments, p.username, source);
        if (equivalent) set = sanitize_against_ground_truth(set, p, *equivalent);
        if (!set.labels.empty()) out.push_back(std::move(set));
    }
    return out;
}

}  // namespace pai
