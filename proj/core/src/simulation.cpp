#include "pai/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/parallel.hpp"
#include "pai/profiles.hpp"
#include "pai/templates.hpp"
#include "pai/text.hpp"

namespace pai {

namespace {

constexpr const char* kCriticSentence = "You are always very critical and disagreeing with others there.";
constexpr int kReselectRetries = 5;

std::string strip_wrapping(std::string_view s) {
    s = text::trim(s);
    while (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '[' && s.back() == ']') ||
                             (s.front() == '(' && s.back() == ')'))) {
        s = text::trim(s.substr(1, s.size() - 2));
    }
    return std::string(s);
}

std::uint64_t thread_seed(const SimulationParams& params, std::string_view thread_id) {
    return mix_seed(params.seed, stable_hash(thread_id));
}

}  // namespace

std::vector<std::string> validate_params(const SimulationParams& p) {
    std::vector<std::string> errors;
    auto prob = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) errors.push_back(std::string(name) + " must lie in [0, 1]");
    };
    auto count = [&](int v, const char* name) {
        if (v < 1) errors.push_back(std::string(name) + " must be >= 1");
    };
    prob(p.p_critic, "p_critic");
    prob(p.p_short, "p_short");
    prob(p.default_comment_prob, "default_comment_prob");
    prob(p.comment_prob_decay, "comment_prob_decay");
    prob(p.comment_prob_floor, "comment_prob_floor");
    count(p.no_threads, "no_threads");
    count(p.no_rounds, "no_rounds");
    count(p.no_actions, "no_actions");
    count(p.no_max_comments, "no_max_comments");
    count(p.max_depth, "max_depth");
    count(p.no_profiles, "no_profiles");
    count(p.min_comment_len, "min_comment_len");
    count(p.max_comment_len, "max_comment_len");
    count(p.no_sampled_comments, "no_sampled_comments");
    if (p.min_comment_len > p.max_comment_len) errors.emplace_back("min_comment_len must be <= max_comment_len");
    return errors;
}

double comment_probability(const SimulationParams& p, int round) {
    const double alpha = p.default_comment_prob;
    const double decayed = alpha * std::pow(p.comment_prob_decay, std::max(0, round - 1));
    return std::max(std::min(alpha, p.comment_prob_floor), decayed);
}

Topic parse_topic(std::string_view raw) {
    const auto desc = text::ifind(raw, "question description:");
    if (desc == std::string_view::npos) throw TopicParseError("missing 'Question description:' marker", std::string(raw));
    auto q = std::string_view::npos;
    for (auto pos = text::ifind(raw, "question:"); pos != std::string_view::npos && pos < desc;
         pos = text::ifind(raw, "question:", pos + 1)) {
        q = pos;
    }
    if (q == std::string_view::npos) throw TopicParseError("missing 'Question:' marker", std::string(raw));
    Topic t{strip_wrapping(raw.substr(q + 9, desc - q - 9)), strip_wrapping(raw.substr(desc + 21))};
    if (t.question.empty() || t.description.empty()) throw TopicParseError("empty question or description", std::string(raw));
    return t;
}

const std::vector<std::string>& default_topic_examples() {
    static const std::vector<std::string> examples = {
        "Question: what's a weird local habit you only noticed after moving away?\n"
        "Question description: grew up somewhere where everyone waves at every car, moved to a big city and got "
        "stared at for a month lol",
        "Question: what was your first real paycheck spent on?\n"
        "Question description: mine went on a used bike and a very questionable jacket, still have the bike tho",
        "Question: when did you realise you weren't a kid anymore?\n"
        "Question description: for me it was getting excited about a new vacuum cleaner. that's it. that's the post",
    };
    return examples;
}

Topic generate_topic(Attribute attribute, const std::vector<std::string>& examples, const Profile& author,
                     Gateway& gateway, std::uint64_t seed) {
    if (examples.empty()) throw PreconditionError("topic generation needs at least one example");
    auto slots = profile_slots(author);
    slots["guess_feature"] = std::string(to_string(attribute));
    slots["topic_examples"] = text::join(examples, "\n\n");
    const auto prompt = render(templates::get(templates::kTopicGeneration), slots);
    auto request = gateway.prepare(templates::kTopicGeneration, "", prompt, seed);
    return parse_topic(gateway.complete(request));
}

std::optional<bool> parse_yes_no(std::string_view answer) {
    const auto tokens = text::split(text::trim(answer), ' ');
    if (tokens.empty()) return std::nullopt;
    std::string_view first = tokens.front();
    auto punct = [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); };
    while (!first.empty() && punct(first.front())) first.remove_prefix(1);
    while (!first.empty() && punct(first.back())) first.remove_suffix(1);
    if (text::iequals(first, "yes")) return true;
    if (text::iequals(first, "no")) return false;
    return std::nullopt;
}

std::vector<Profile> interest_filter(const std::vector<Profile>& profiles, std::string_view topic, Gateway& gateway,
                                     int cap, std::uint64_t seed) {
    if (profiles.empty()) throw PreconditionError("interest filter needs at least one profile");
    std::vector<char> interested(profiles.size(), 0);
    parallel_for(profiles.size(), gateway.max_in_flight(), [&](std::size_t i) {
        auto slots = profile_slots(profiles[i]);
        slots["topic"] = std::string(topic);
        const auto prompt = render(templates::get(templates::kInterestCheck), slots);
        auto request = gateway.prepare(templates::kInterestCheck, "", prompt,
                                       mix_seed(seed, stable_hash(profiles[i].username)));
        std::string answer;
        try {
            answer = gateway.complete(request);
        } catch (const RefusalError&) {
            answer.clear();
        }
        const auto yes = parse_yes_no(answer);
        if (!yes) spdlog::info("interest answer from {} is neither Yes nor No, counted as No", profiles[i].username);
        interested[i] = yes.value_or(false);
    });
    std::vector<Profile> keep;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (interested[i]) keep.push_back(profiles[i]);
    }
    if (cap >= 0 && keep.size() > static_cast<std::size_t>(cap)) {
        Rng rng(seed);
        std::vector<Profile> sampled;
        for (auto i : rng.sample_indices(keep.size(), static_cast<std::size_t>(cap))) sampled.push_back(keep[i]);
        keep = std::move(sampled);
    }
    return keep;
}

std::map<CommentId, double> score_candidates(const ThreadTree& tree, std::string_view agent,
                                             const TreeLimits& limits) {
    std::map<CommentId, double> scores;
    for (const auto& node : tree.nodes()) {
        const auto depth = tree.depth(node.id);
        if (depth >= static_cast<std::size_t>(limits.max_depth)) continue;
        const bool root = node.id == kRootId;
        if (!root && node.children.size() >= static_cast<std::size_t>(limits.max_fanout)) continue;
        const auto counts = subtree_counts(tree, node.id, agent);
        scores[node.id] = (5.0 * counts.own + (root ? 2.0 : 0.0) + counts.others) / static_cast<double>(depth);
    }
    return scores;
}

CommentId select_reply_target(const std::map<CommentId, double>& scores, int k, Rng& rng) {
    if (scores.empty()) throw PreconditionError("no reply candidates");
    std::vector<std::pair<CommentId, double>> ranked(scores.begin(), scores.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(std::min(ranked.size(), static_cast<std::size_t>(std::max(1, k))));
    double total = 0;
    for (auto& [id, s] : ranked) {
        s = s > 0 ? s : kZeroScoreWeight;
        total += s;
    }
    double u = rng.uniform01() * total;
    for (const auto& [id, s] : ranked) {
        if (u < s) return id;
        u -= s;
    }
    return ranked.back().first;
}

ParsedComment parse_comment(std::string_view raw) {
    std::size_t marker = std::string_view::npos, marker_len = 0;
    for (std::string_view m : {"My comment:", "My new comment:"}) {
        const auto pos = text::rfind(raw, m);
        if (pos != std::string_view::npos && (marker == std::string_view::npos || pos > marker)) {
            marker = pos;
            marker_len = m.size();
        }
    }
    if (marker == std::string_view::npos) throw CommentParseError("missing 'My comment:' marker", std::string(raw));
    ParsedComment out{strip_wrapping(raw.substr(marker + marker_len)), std::string(text::trim(raw.substr(0, marker)))};
    if (out.text.empty()) throw CommentParseError("empty comment after marker", std::string(raw));
    return out;
}

std::string render_subthread(const std::vector<const CommentNode*>& context) {
    std::string out;
    for (std::size_t i = 0; i < context.size(); ++i) {
        const auto* node = context[i];
        if (node->author == kSystemAuthor) {
            out += "Thread topic: " + node->text + "\n";
            continue;
        }
        out += std::string(2 * i, ' ') + node->author + ": " + node->text + "\n";
    }
    return out;
}

CommentNode generate_comment(const Profile& agent, const std::vector<const CommentNode*>& context,
                             const SimulationParams& params, Rng& rng, Gateway& gateway, std::uint64_t seed,
                             bool* length_violation) {
    if (context.empty() || context.front()->author != kSystemAuthor) {
        throw PreconditionError("comment context must start at the thread root");
    }
    const bool critic = rng.bernoulli(params.p_critic);
    const bool short_comment = rng.bernoulli(params.p_short);
    auto slots = profile_slots(agent);
    slots["critic_type"] = critic ? kCriticSentence : "";
    slots["length_instruction"] = short_comment ? "Your comment should contain between " +
                                                      std::to_string(params.min_comment_len) + " and " +
                                                      std::to_string(params.max_comment_len) + " words.\n"
                                                : "";
    slots["writing_style"] = agent.writing_style;
    const auto system = render(templates::get(templates::kCommentSystem), slots);
    const auto user = render(templates::get(templates::kCommentGeneration),
                             {{"username", agent.username}, {"subthread", render_subthread(context)}});

    ParsedComment parsed;
    for (int attempt = 0;; ++attempt) {
        auto request = gateway.prepare(templates::kCommentGeneration, system, user, attempt ? mix_seed(seed, attempt) : seed);
        std::string raw;
        try {
            raw = gateway.complete(request);
        } catch (const RefusalError& e) {
            throw TurnSkipped(agent.username + ": " + e.what());
        }
        try {
            parsed = parse_comment(raw);
            break;
        } catch (const CommentParseError&) {
            if (attempt >= 1) throw;
        }
    }
    const auto words = text::word_count(parsed.text);
    const bool violation = short_comment && (words < static_cast<std::size_t>(params.min_comment_len) ||
                                             words > static_cast<std::size_t>(params.max_comment_len));
    if (violation) spdlog::info("{} wrote {} words, outside [{}, {}]", agent.username, words, params.min_comment_len,
                                params.max_comment_len);
    if (length_violation) *length_violation = violation;

    CommentNode node;
    node.author = agent.username;
    node.text = std::move(parsed.text);
    if (!parsed.reasoning.empty()) node.reasoning_trace = std::move(parsed.reasoning);
    return node;
}

SimulationStats simulate_thread(ThreadTree& tree, const std::vector<Profile>& agents, const SimulationParams& params,
                                const CommentOracle& oracle, Gateway& gateway) {
    if (auto errors = validate_params(params); !errors.empty()) throw PreconditionError(errors.front());
    SimulationStats stats;
    if (agents.empty()) return stats;
    const std::uint64_t base = thread_seed(params, tree.id());
    Rng rng(base);
    const auto limits = params.limits();

    for (int round = 1; round <= params.no_rounds; ++round) {
        std::vector<std::size_t> order(agents.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        const double alpha = comment_probability(params, round);

        for (auto idx : order) {
            const Profile& agent = agents[idx];
            bool acted = false;
            for (int action = 0; action < params.no_actions && !acted; ++action) {
                if (!rng.bernoulli(alpha)) continue;
                acted = true;
                const std::uint64_t turn_seed = mix_seed(base, tree.size());
                auto scores = score_candidates(tree, agent.username, limits);
                for (int retry = 0; retry <= kReselectRetries && !scores.empty(); ++retry) {
                    const CommentId target = select_reply_target(scores, params.no_sampled_comments, rng);
                    CommentNode node;
                    bool violation = false;
                    try {
                        node = generate_comment(agent, path_to_root(tree, target), params, rng, gateway, turn_seed,
                                                &violation);
                    } catch (const TurnSkipped& e) {
                        spdlog::info("turn skipped: {}", e.what());
                        ++stats.skipped_turns;
                        break;
                    } catch (const CommentParseError& e) {
                        spdlog::warn("comment by {} unparseable, turn skipped", agent.username);
                        ++stats.skipped_turns;
                        break;
                    }
                    node.round = round;
                    if (oracle) {
                        try {
                            node.tags = oracle(node, mix_seed(turn_seed, 0x7a67));
                        } catch (const BackendUnavailable&) {
                            throw;
                        } catch (const Error& e) {
                            spdlog::warn("tagging failed ({}), comment left untagged", e.name());
                            ++stats.untagged;
                        }
                    }
                    try {
                        tree.insert(target, std::move(node), limits);
                        ++stats.comments;
                        stats.length_violations += violation;
                        break;
                    } catch (const DepthExceeded&) {
                        scores.erase(target);
                    } catch (const FanoutExceeded&) {
                        scores.erase(target);
                    }
                }
            }
        }
    }
    return stats;
}

ThreadTree run_thread(const std::string& thread_id, Attribute target, const std::vector<Profile>& pool,
                      const SimulationParams& params, const CommentOracle& oracle, Gateway& gateway,
                      const std::vector<std::string>& topic_examples, SimulationStats* stats) {
    if (pool.empty()) throw PreconditionError("thread simulation needs at least one profile");
    const std::uint64_t base = thread_seed(params, thread_id);
    Rng rng(mix_seed(base, 1));
    const Profile& author = pool[rng.uniform_below(pool.size())];
    const Topic topic = generate_topic(target, topic_examples, author, gateway, mix_seed(base, 2));
    const auto agents = interest_filter(pool, topic.question + "\n" + topic.description, gateway, params.no_profiles,
                                        mix_seed(base, 3));
    ThreadTree tree(thread_id, target, topic.question, topic.description);
    auto s = simulate_thread(tree, agents, params, oracle, gateway);
    if (stats) *stats = s;
    return tree;
}

}  // namespace pai
