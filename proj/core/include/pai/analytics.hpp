#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pai/gateway.hpp"
#include "pai/model.hpp"
#include "pai/tagging.hpp"

namespace pai {

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // sample (n - 1); 0 for n < 2
    double median = 0.0;
    std::size_t n = 0;

    bool operator==(const Summary&) const = default;
};

Summary summarize(std::vector<double> values);

struct ThreadStats {
    Summary comment_length;  // code points
    Summary comments_per_thread;
    Summary profiles_per_thread;
    Summary comments_per_profile;
};

/// The SYSTEM root is not a comment. With `profiles`, profiles that never
/// commented count as zero in comments_per_profile; otherwise only authors
/// are counted. Throws PreconditionError without threads.
ThreadStats thread_stats(const std::vector<ThreadTree>& threads, const std::vector<std::string>* profiles = nullptr);

/// attribute -> counts for hardness 1..5 (index 0..4); all 8 rows present.
using HardnessTable = std::map<Attribute, std::array<int, 5>>;

HardnessTable empty_hardness_table();

/// Profile level: one count per profile label.
HardnessTable hardness_distribution(const std::vector<ProfileLabelSet>& labels);

/// Comment level: one count per (comment, attribute) carrying a
/// human-verified tag with a fine hardness.
HardnessTable hardness_distribution(const std::vector<CommentTags>& comments);

struct AgreementMatrix {
    long tn = 0;  // neither side labels the attribute
    long fn = 0;  // human only
    long fp = 0;  // model only
    long tp = 0;  // both

    double fnr() const { return fn + tp ? static_cast<double>(fn) / static_cast<double>(fn + tp) : 0.0; }
    double fpr() const { return fp + tn ? static_cast<double>(fp) / static_cast<double>(fp + tn) : 0.0; }
    long total() const { return tn + fn + fp + tp; }
    bool operator==(const AgreementMatrix&) const = default;
};

/// Attribute sets of one comment on both sides.
struct CommentAttributeSets {
    std::set<Attribute> model;
    std::set<Attribute> human;
};

/// Every comment contributes one cell per attribute (8 per comment).
AgreementMatrix tag_agreement(const std::vector<CommentAttributeSets>& comments);

/// Model side: model-sourced tags as proposed. Human side: human-verified tags.
AgreementMatrix tag_agreement(const std::vector<CommentTags>& comments);

enum class Authorship { synthetic, human };

std::string_view to_string(Authorship a);
std::optional<Authorship> parse_authorship(std::string_view s);

struct JudgmentRecord {
    std::string comment_id;
    Authorship source_truth = Authorship::synthetic;
    Authorship judged_as = Authorship::synthetic;
    std::string rater_id;

    bool operator==(const JudgmentRecord&) const = default;
};

struct HumanStudyMetrics {
    AgreementMatrix confusion;  // positive class = human-written
    double accuracy = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    std::map<std::string, double> per_rater_accuracy;
    std::array<int, 10> rater_histogram{};  // accuracy deciles, [0.9, 1.0] in the last bin
    double pairwise_agreement = 0.0;        // over comments with at least two raters
    std::vector<std::string> warnings;      // comments not judged by exactly two raters
};

HumanStudyMetrics human_study_metrics(const std::vector<JudgmentRecord>& judgments);

/// Reads "/r/a, /r/b, /r/c" answers; names are lowercased, at most 3 kept.
/// Returns nullopt when no subreddit can be read.
std::optional<std::vector<std::string>> parse_subreddits(std::string_view answer);

struct TopicClassification {
    std::map<std::string, std::vector<std::string>> per_thread;
    std::size_t unique_subreddits = 0;
    std::map<Attribute, std::map<std::string, int>> per_attribute;
    std::vector<std::string> skipped;  // thread ids with unreadable answers
};

TopicClassification classify_thread_topics(const std::vector<ThreadTree>& threads, Gateway& gateway,
                                           std::uint64_t seed);

struct ProfileAgreement {
    double human_vs_truth = 0.0;  // fraction of human labels matching ground truth
    double llm_vs_human = 0.0;    // fraction of human labels the model side reproduces
    int human_labels = 0;
};

/// Deterministic value matching only; a missing model label disagrees.
ProfileAgreement llm_profile_agreement(const std::vector<ProfileLabelSet>& llm,
                                       const std::vector<ProfileLabelSet>& human,
                                       const std::vector<Profile>& ground_truth);

std::string thread_stats_text(const ThreadStats& s);
std::string thread_stats_csv(const ThreadStats& s);
std::string hardness_table_text(const HardnessTable& t);
std::string hardness_table_csv(const HardnessTable& t);
std::string agreement_text(const AgreementMatrix& m);
std::string human_study_text(const HumanStudyMetrics& m);

}  // namespace pai
