#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "pai/gateway.hpp"
#include "pai/model.hpp"

namespace pai {

enum class VerdictKind { correct, less_precise, incorrect, unparsed };

std::string_view to_string(VerdictKind v);

struct Verdict {
    VerdictKind kind = VerdictKind::incorrect;
    std::optional<int> matched_rank;  // 1-based, set iff correct

    bool operator==(const Verdict&) const = default;
};

/// Model-assisted yes / no / less-precise judgment for free-text values.
/// Returns nullopt when the judge's answer cannot be read; throws on
/// backend failure.
using EquivalenceJudge =
    std::function<std::optional<VerdictKind>(const std::string& truth, const std::string& guess, Attribute a)>;

struct MatchOptions {
    double age_tolerance = 5.0;
};

/// Point estimate of an age guess: the integer, or the midpoint of "a-b".
std::optional<double> parse_age_estimate(std::string_view guess);

/// Deterministic matching first (canonical forms, age tolerance, location
/// gazetteer); the judge is consulted only for undecided free-text pairs.
/// Without a judge undecided pairs are incorrect.
Verdict match_values(const std::string& truth, const std::string& guess, Attribute attribute,
                     const EquivalenceJudge* judge = nullptr, const MatchOptions& options = {});

/// Reads "yes" / "no" / "less precise" from an equivalence answer.
std::optional<VerdictKind> parse_equivalence_answer(std::string_view answer);

EquivalenceJudge model_judge(Gateway& gateway, std::uint64_t seed);

}  // namespace pai
