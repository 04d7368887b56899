#pragma once

#include <nlohmann/json.hpp>

#include "pai/analytics.hpp"
#include "pai/model.hpp"
#include "pai/simulation.hpp"
#include "pai/tagging.hpp"

// JSON encodings of the domain types. Optional fields are written as null so
// every record has a fixed key set; enums use their canonical names. Readers
// throw nlohmann::json exceptions or DomainError on malformed input.
namespace pai {

void to_json(nlohmann::json& j, Attribute a);
void from_json(const nlohmann::json& j, Attribute& a);

void to_json(nlohmann::json& j, const Profile& p);
void from_json(const nlohmann::json& j, Profile& p);

void to_json(nlohmann::json& j, const AttributeTag& t);
void from_json(const nlohmann::json& j, AttributeTag& t);

void to_json(nlohmann::json& j, const CommentNode& n);
void from_json(const nlohmann::json& j, CommentNode& n);

nlohmann::json thread_to_json(const ThreadTree& tree);
/// Throws IntegrityError when the stored structure is invalid.
ThreadTree thread_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const TaggingDecision& d);
void from_json(const nlohmann::json& j, TaggingDecision& d);

void to_json(nlohmann::json& j, const ProfileLabel& l);
void from_json(const nlohmann::json& j, ProfileLabel& l);

void to_json(nlohmann::json& j, const ProfileLabelSet& s);
void from_json(const nlohmann::json& j, ProfileLabelSet& s);

void to_json(nlohmann::json& j, const SimulationParams& p);
/// Missing keys keep their defaults; unknown keys raise DomainError.
void from_json(const nlohmann::json& j, SimulationParams& p);

void to_json(nlohmann::json& j, const JudgmentRecord& r);
void from_json(const nlohmann::json& j, JudgmentRecord& r);

void to_json(nlohmann::json& j, const FieldError& e);

/// Decision as posted by a client: comment_id, attribute, action and
/// labeler are required; timestamp defaults to `now_ms`. Returns field
/// errors instead of throwing.
std::vector<FieldError> decision_from_client_json(const nlohmann::json& j, std::int64_t now_ms, TaggingDecision& out);

}  // namespace pai
