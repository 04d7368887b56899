#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pai/model.hpp"
#include "pai/tagging.hpp"

namespace pai {

inline constexpr int kSchemaVersion = 1;

struct Manifest {
    int schema_version = kSchemaVersion;
    std::uint64_t seed = 0;
    std::string created_at = "1970-01-01T00:00:00Z";
    std::string generator_model;

    bool operator==(const Manifest&) const = default;
};

/// Threads hold the raw generated state (model tags pending); reviewer
/// state is the replay of `decisions` on top of them.
struct DatasetBundle {
    std::vector<Profile> profiles;
    std::vector<ThreadTree> threads;
    std::vector<TaggingDecision> decisions;
    std::vector<ProfileLabelSet> labels;
    Manifest manifest;

    bool operator==(const DatasetBundle&) const = default;
};

inline constexpr const char* kProfilesFile = "profiles.jsonl";
inline constexpr const char* kThreadsFile = "threads.jsonl";
inline constexpr const char* kDecisionsFile = "decisions.jsonl";
inline constexpr const char* kLabelsFile = "labels.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";

/// Dangling references: comment authors, label owners, supporting comments
/// and decision targets must all resolve. Empty when consistent.
std::vector<std::string> check_integrity(const DatasetBundle& bundle);

/// Compact JSON with sorted keys, one record per line.
std::string jsonl_line(const nlohmann::json& j);

/// Writes every file to a temporary name first and renames it into place.
/// Throws IntegrityError for inconsistent bundles.
void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Throws IntegrityError when the manifest or a file is missing or a record
/// is malformed or dangling, MigrationRequired on a schema mismatch.
DatasetBundle load_bundle(const std::filesystem::path& dir);

/// Appends one decision line to decisions.jsonl (flushed before return).
void append_decision(const std::filesystem::path& dir, const TaggingDecision& decision);

/// Threads with the decision log replayed.
std::vector<ThreadTree> current_threads(const DatasetBundle& bundle);

}  // namespace pai
