#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pai/gateway.hpp"
#include "pai/model.hpp"
#include "pai/templates.hpp"

namespace pai {

struct ProfileBatchSpec {
    int count = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> few_shot_examples;
    int batch_size = 50;
    int max_stalled_batches = 5;
};

/// Hand-written profile dictionaries used as generation examples.
const std::vector<std::string>& default_profile_examples();

struct ParsedBatch {
    std::vector<Profile> profiles;
    std::vector<std::string> rejected;  // one reason per discarded record
};

/// Extracts every profile record from a model answer. Accepts JSON objects
/// keyed by username ({"Name": {...}}) and flat records carrying a
/// "username" field, anywhere in the text.
ParsedBatch parse_profile_batch(std::string_view text);

/// Requests batches until `count` valid, unique profiles exist. Throws
/// GenerationStalled after `max_stalled_batches` consecutive batches that
/// add nothing.
std::vector<Profile> generate_profiles(const ProfileBatchSpec& spec, Gateway& gateway);

/// Persona slots shared by every agent-facing template.
SlotMap profile_slots(const Profile& p);

/// Requires an empty writing style (PreconditionError); a refusal or an empty
/// answer raises StyleGenerationFailed.
Profile enrich_writing_style(Profile profile, Gateway& gateway, std::uint64_t seed);

/// Enriches every profile concurrently, one request per profile.
std::vector<Profile> enrich_all(std::vector<Profile> profiles, Gateway& gateway, std::uint64_t seed);

/// Throws DomainError for negative or non-finite amounts.
IncomeLevel income_level_for_usd(double amount_usd);

/// Number of the 8 attributes with exactly equal raw values.
int attribute_overlap(const Profile& a, const Profile& b);

struct OverlapHistogram {
    std::array<double, 9> per_profile_max{};  // profile -> max overlap with any other
    std::array<double, 9> pairwise{};         // all unordered pairs
};

/// Both distributions normalized to sum 1. Throws PreconditionError for
/// fewer than two profiles.
OverlapHistogram overlap_histogram(const std::vector<Profile>& profiles);

}  // namespace pai
