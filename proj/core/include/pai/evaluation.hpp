#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pai/anonymize.hpp"
#include "pai/gateway.hpp"
#include "pai/matching.hpp"
#include "pai/model.hpp"

namespace pai {

struct PredictionRecord {
    std::string username;
    Attribute attribute = Attribute::age;
    std::vector<std::string> guesses;  // at most 3, most likely first
    std::string inference_text;
    std::string model_id;
    bool unparsed = false;

    bool operator==(const PredictionRecord&) const = default;
};

struct EvalComment {
    std::string key;
    std::string text;
    bool labeled = false;  // carries a tag; kept when trimming to a budget
};

struct EvalProfile {
    ProfileLabelSet labels;
    std::vector<EvalComment> comments;  // chronological
};

/// Comments of every labelled profile in thread order; a comment is
/// labelled when it supports one of the profile's labels.
std::vector<EvalProfile> build_eval_profiles(const std::vector<ThreadTree>& threads,
                                             const std::vector<ProfileLabelSet>& labels);

/// Answer-format hint appended to the Guess line for one attribute.
std::string answer_options(Attribute a);

/// Asks for exactly the labelled attributes. With a positive character
/// budget, unlabelled comments are dropped oldest-first until the comment
/// block fits. Throws EmptyProfile without labels or comments.
ChatRequest build_inference_prompt(const ProfileLabelSet& labels, const std::vector<EvalComment>& comments,
                                   std::size_t max_context_chars = 0);

/// Extracts Type / Inference / Guess blocks. Blocks without a readable
/// Guess line are returned with `unparsed` set.
std::vector<PredictionRecord> parse_inference(std::string_view text, const std::string& username = {},
                                              const std::string& model_id = {});

/// Second pass for unparsed records: asks the extraction template to pull
/// guesses out of the block text. Records that still fail stay unparsed.
void extract_missing_guesses(std::vector<PredictionRecord>& records, Gateway& gateway, std::uint64_t seed);

struct AttributeScore {
    Attribute attribute = Attribute::age;
    int hardness = 1;
    Verdict top1;
    Verdict top3;
};

/// One score per labelled attribute, in attribute order. Predictions for
/// unlabelled attributes are ignored; missing predictions are unparsed.
std::vector<AttributeScore> score_profile(const std::vector<PredictionRecord>& predictions,
                                          const ProfileLabelSet& labels, const EquivalenceJudge* judge = nullptr,
                                          const MatchOptions& options = {});

struct ReportCell {
    int total = 0;
    int top1_correct = 0;
    int top3_correct = 0;
    int top1_less_precise = 0;
    int unparsed = 0;

    double top1() const { return total ? static_cast<double>(top1_correct) / total : 0.0; }
    double top3() const { return total ? static_cast<double>(top3_correct) / total : 0.0; }
    ReportCell& operator+=(const ReportCell& o);
    bool operator==(const ReportCell&) const = default;
};

struct InferenceReport {
    std::string model_id;
    bool anonymized = false;
    int profiles = 0;
    int failed_profiles = 0;
    std::map<Attribute, std::array<ReportCell, 5>> cells;  // hardness 1..5 at index 0..4

    void add(const AttributeScore& s);
    ReportCell attribute_total(Attribute a) const;
    ReportCell hardness_total(int hardness) const;
    ReportCell overall() const;
};

struct EvalOptions {
    const EquivalenceJudge* judge = nullptr;
    MatchOptions match;
    bool anonymize = false;
    Anonymizer* anonymizer = nullptr;  // rule-based when null
    bool extraction_fallback = true;
    std::uint64_t seed = 0;
};

/// build -> complete -> parse -> score for every profile, concurrently up
/// to the gateway cap. Per-profile failures are logged and counted.
InferenceReport evaluate_dataset(const std::vector<EvalProfile>& dataset, Gateway& gateway,
                                 const EvalOptions& options = {});

nlohmann::json report_to_json(const InferenceReport& report);
std::string report_to_text(const InferenceReport& report);

}  // namespace pai
