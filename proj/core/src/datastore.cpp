#include "pai/datastore.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pai/errors.hpp"
#include "pai/serialization.hpp"

namespace pai {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_atomic(const fs::path& target, const std::string& content) {
    const auto tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IntegrityError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IntegrityError("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IntegrityError("cannot move " + tmp.string() + " into place: " + ec.message());
}

template <typename T, typename Encode>
std::string encode_lines(const std::vector<T>& items, Encode encode) {
    std::string out;
    for (const auto& item : items) out += jsonl_line(encode(item));
    return out;
}

template <typename Decode>
void read_lines(const fs::path& file, Decode decode) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IntegrityError("missing " + file.filename().string() + " in " + file.parent_path().string());
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            decode(json::parse(line));
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw IntegrityError(file.filename().string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

}  // namespace

std::string jsonl_line(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict) + "\n"; }

std::vector<std::string> check_integrity(const DatasetBundle& bundle) {
    std::vector<std::string> problems;
    std::set<std::string> usernames;
    for (const auto& p : bundle.profiles) {
        if (!usernames.insert(p.username).second) problems.push_back("duplicate profile " + p.username);
    }
    std::set<std::string> comments, thread_ids;
    for (const auto& tree : bundle.threads) {
        if (!thread_ids.insert(tree.id()).second) problems.push_back("duplicate thread " + tree.id());
        for (const auto& problem : tree.check_structure()) problems.push_back("thread " + tree.id() + ": " + problem);
        for (const auto& node : tree.nodes()) {
            comments.insert(comment_key(tree.id(), node.id));
            if (node.id != kRootId && !usernames.count(node.author)) {
                problems.push_back("comment " + comment_key(tree.id(), node.id) + " has unknown author '" +
                                   node.author + "'");
            }
        }
    }
    for (const auto& d : bundle.decisions) {
        if (!comments.count(d.comment_id)) problems.push_back("decision references unknown comment " + d.comment_id);
    }
    for (const auto& set : bundle.labels) {
        if (!usernames.count(set.username)) problems.push_back("labels reference unknown profile " + set.username);
        for (const auto& [attr, label] : set.labels) {
            for (const auto& key : label.supporting_comments) {
                if (!comments.count(key)) problems.push_back("label of " + set.username + " cites unknown comment " + key);
            }
        }
    }
    return problems;
}

void save_bundle(const DatasetBundle& bundle, const fs::path& dir) {
    if (auto problems = check_integrity(bundle); !problems.empty()) throw IntegrityError(problems.front());
    fs::create_directories(dir);
    write_atomic(dir / kProfilesFile, encode_lines(bundle.profiles, [](const Profile& p) { return json(p); }));
    write_atomic(dir / kThreadsFile, encode_lines(bundle.threads, thread_to_json));
    write_atomic(dir / kDecisionsFile,
                 encode_lines(bundle.decisions, [](const TaggingDecision& d) { return json(d); }));
    write_atomic(dir / kLabelsFile, encode_lines(bundle.labels, [](const ProfileLabelSet& s) { return json(s); }));
    const json manifest = {{"schema_version", bundle.manifest.schema_version},
                           {"seed", bundle.manifest.seed},
                           {"created_at", bundle.manifest.created_at},
                           {"generator_model", bundle.manifest.generator_model}};
    write_atomic(dir / kManifestFile, manifest.dump(2) + "\n");
}

DatasetBundle load_bundle(const fs::path& dir) {
    const auto manifest_path = dir / kManifestFile;
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IntegrityError("no dataset at " + dir.string() + " (missing " + kManifestFile + ")");
    DatasetBundle bundle;
    try {
        const auto m = json::parse(in);
        bundle.manifest.schema_version = m.at("schema_version").get<int>();
        bundle.manifest.seed = m.at("seed").get<std::uint64_t>();
        bundle.manifest.created_at = m.at("created_at").get<std::string>();
        bundle.manifest.generator_model = m.at("generator_model").get<std::string>();
    } catch (const std::exception& e) {
        throw IntegrityError(std::string("malformed manifest: ") + e.what());
    }
    if (bundle.manifest.schema_version != kSchemaVersion) {
        throw MigrationRequired("dataset schema " + std::to_string(bundle.manifest.schema_version) +
                                ", this build reads schema " + std::to_string(kSchemaVersion));
    }
    read_lines(dir / kProfilesFile, [&](const json& j) { bundle.profiles.push_back(j.get<Profile>()); });
    read_lines(dir / kThreadsFile, [&](const json& j) { bundle.threads.push_back(thread_from_json(j)); });
    read_lines(dir / kDecisionsFile, [&](const json& j) { bundle.decisions.push_back(j.get<TaggingDecision>()); });
    read_lines(dir / kLabelsFile, [&](const json& j) { bundle.labels.push_back(j.get<ProfileLabelSet>()); });
    if (auto problems = check_integrity(bundle); !problems.empty()) throw IntegrityError(problems.front());
    return bundle;
}

void append_decision(const fs::path& dir, const TaggingDecision& decision) {
    std::ofstream out(dir / kDecisionsFile, std::ios::binary | std::ios::app);
    if (!out) throw IntegrityError("cannot append to " + (dir / kDecisionsFile).string());
    out << jsonl_line(json(decision));
    out.flush();
    if (!out) throw IntegrityError("append to " + (dir / kDecisionsFile).string() + " failed");
}

std::vector<ThreadTree> current_threads(const DatasetBundle& bundle) {
    auto threads = bundle.threads;
    replay_decisions(threads, bundle.decisions);
    return threads;
}

}  // namespace pai
