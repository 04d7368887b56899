#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pai/gateway.hpp"
#include "pai/model.hpp"
#include "pai/rng.hpp"

namespace pai {

struct SimulationParams {
    int no_threads = 1;
    int no_rounds = 2;
    int no_actions = 3;
    int no_max_comments = 3;
    int max_depth = 5;
    int no_profiles = 40;
    double p_critic = 0.7;
    double p_short = 0.7;
    int min_comment_len = 5;
    int max_comment_len = 20;
    int no_sampled_comments = 10;
    double default_comment_prob = 0.7;
    double comment_prob_decay = 0.7;
    double comment_prob_floor = 0.05;
    std::uint64_t seed = 0;

    TreeLimits limits() const { return {max_depth, no_max_comments}; }
};

std::vector<std::string> validate_params(const SimulationParams& p);

/// alpha_r = max(min(alpha, floor), alpha * decay^(r-1)), r >= 1. The floor
/// never lifts a probability above its round-1 value, so alpha = 0 stays 0.
double comment_probability(const SimulationParams& p, int round);

struct Topic {
    std::string question;
    std::string description;

    bool operator==(const Topic&) const = default;
};

/// Splits "Question: ... Question description: ..." (case-insensitive
/// markers). Throws TopicParseError carrying the raw text.
Topic parse_topic(std::string_view raw);

/// Post snippets shown to the topic author as style references.
const std::vector<std::string>& default_topic_examples();

Topic generate_topic(Attribute attribute, const std::vector<std::string>& examples, const Profile& author,
                     Gateway& gateway, std::uint64_t seed);

/// First token, punctuation stripped, compared case-insensitively.
std::optional<bool> parse_yes_no(std::string_view answer);

/// Keeps profiles answering Yes; subsamples uniformly to `cap` with `seed`.
/// Order of the result follows the input order.
std::vector<Profile> interest_filter(const std::vector<Profile>& profiles, std::string_view topic, Gateway& gateway,
                                     int cap, std::uint64_t seed);

/// sigma(c) = (5m + 2[c is root] + k) / depth(c) over reply-eligible nodes.
std::map<CommentId, double> score_candidates(const ThreadTree& tree, std::string_view agent,
                                             const TreeLimits& limits);

inline constexpr double kZeroScoreWeight = 1e-6;

/// Score-proportional draw among the k best candidates (ties -> smaller id).
CommentId select_reply_target(const std::map<CommentId, double>& scores, int k, Rng& rng);

struct ParsedComment {
    std::string text;
    std::string reasoning;
};

/// Text after the last "My comment:" (or "My new comment:") marker.
/// Throws CommentParseError when no marker is followed by text.
ParsedComment parse_comment(std::string_view raw);

/// Rendering of a root-first chain as shown to the commenting agent.
std::string render_subthread(const std::vector<const CommentNode*>& context);

/// Samples the critic and short-length switches, sends the chain-of-thought
/// prompt and extracts the comment. One reprompt on a missing marker, then
/// CommentParseError; refusals raise TurnSkipped. `length_violation` is set
/// when a length-constrained comment falls outside the word range.
CommentNode generate_comment(const Profile& agent, const std::vector<const CommentNode*>& context,
                             const SimulationParams& params, Rng& rng, Gateway& gateway, std::uint64_t seed,
                             bool* length_violation = nullptr);

/// Comment tagger used inline during simulation (the per-turn labelling
/// step). An empty function leaves comments untagged for post-hoc tagging.
using CommentOracle = std::function<std::vector<AttributeTag>(const CommentNode& node, std::uint64_t seed)>;

struct SimulationStats {
    int comments = 0;
    int skipped_turns = 0;
    int untagged = 0;
    int length_violations = 0;
};

/// Runs the rounds on an existing tree (normally root only).
SimulationStats simulate_thread(ThreadTree& tree, const std::vector<Profile>& agents, const SimulationParams& params,
                                const CommentOracle& oracle, Gateway& gateway);

/// Topic author draw, topic generation, interest filter and simulation.
ThreadTree run_thread(const std::string& thread_id, Attribute target, const std::vector<Profile>& pool,
                      const SimulationParams& params, const CommentOracle& oracle, Gateway& gateway,
                      const std::vector<std::string>& topic_examples, SimulationStats* stats = nullptr);

}  // namespace pai
