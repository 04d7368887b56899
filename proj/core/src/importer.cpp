#include "pai/importer.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/text.hpp"

namespace pai {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Record {
    json body;
    std::string origin;  // file:line
};

std::vector<fs::path> input_files(const fs::path& path) {
    if (fs::is_regular_file(path)) return {path};
    if (!fs::is_directory(path)) throw ImportError("no published dataset at " + path.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".json")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ImportError("no .jsonl or .json files in " + path.string());
    return files;
}

std::vector<Record> read_records(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ImportError("cannot read " + file.string());
    std::vector<Record> out;
    if (file.extension() == ".json") {
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_array()) throw ImportError(file.string() + ": expected a JSON array of records");
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back({j[i], file.filename().string() + "[" + std::to_string(i) + "]"});
        return out;
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (text::trim(line).empty()) continue;
        auto j = json::parse(line, nullptr, false);
        const auto origin = file.filename().string() + ":" + std::to_string(number);
        if (j.is_discarded() || !j.is_object()) throw ImportError(origin + ": truncated or malformed record");
        out.push_back({std::move(j), origin});
    }
    return out;
}

std::string scalar_text(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return {};
    return j.dump();
}

std::optional<int> scalar_int(const json& j) {
    if (j.is_number()) return static_cast<int>(j.get<double>());
    if (j.is_string()) {
        const auto s = std::string(text::trim(j.get<std::string>()));
        if (s.empty()) return std::nullopt;
        try {
            return std::stoi(s);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<std::string> guess_list(const json& j) {
    std::vector<std::string> out;
    auto push = [&](std::string_view s) {
        auto t = std::string(text::trim(s));
        if (!t.empty() && out.size() < 3) out.push_back(std::move(t));
    };
    if (j.is_array()) {
        for (const auto& g : j) push(scalar_text(g));
    } else {
        for (const auto& g : text::split(scalar_text(j), ';')) push(g);
    }
    return out;
}

std::optional<HardnessCoarse> coarse_of(const json& j) {
    if (j.is_string()) {
        if (auto h = parse_hardness_coarse(j.get<std::string>())) return h;
    }
    if (auto n = scalar_int(j)) {
        if (*n <= 0) return std::nullopt;
        return *n <= 1 ? HardnessCoarse::direct : *n <= 3 ? HardnessCoarse::indirect : HardnessCoarse::complicated;
    }
    return std::nullopt;
}

const json* field(const json& j, const std::string& key) {
    const auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

template <typename T>
T need(std::optional<T> v, const std::string& what, const Record& r) {
    if (!v) throw ImportError(r.origin + ": unreadable profile field " + what);
    return *v;
}

Profile read_profile(const json& j, const ImportMapping& m, const std::string& author, const Record& r) {
    auto get = [&](const char* canonical) -> const json* {
        const auto it = m.profile_fields.find(canonical);
        return it == m.profile_fields.end() ? nullptr : field(j, it->second);
    };
    std::vector<std::string> missing;
    for (const char* key : {"age", "sex", "city_country", "birth_city_country", "education", "occupation",
                            "income_level", "relationship_status"}) {
        if (!get(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
        std::vector<std::string> keys;
        for (const auto& [k, v] : j.items()) keys.push_back(k);
        throw ImportError(r.origin + ": profile lacks " + text::join(missing, ", ") + " (profile columns: " +
                          text::join(keys, ", ") + ")");
    }
    Profile p;
    p.username = get("username") ? scalar_text(*get("username")) : author;
    if (p.username.empty()) p.username = author;
    p.age = need(scalar_int(*get("age")), "age", r);
    p.sex = need(parse_sex(scalar_text(*get("sex"))), "sex", r);
    p.city_country = scalar_text(*get("city_country"));
    p.birth_city_country = scalar_text(*get("birth_city_country"));
    p.education = scalar_text(*get("education"));
    p.education_category = categorize_education(p.education);
    p.occupation = scalar_text(*get("occupation"));
    if (const auto* income = get("income")) p.income = scalar_text(*income);
    p.income_level = need(parse_income_level(scalar_text(*get("income_level"))), "income_level", r);
    p.relationship_status =
        need(parse_relationship_status(scalar_text(*get("relationship_status"))), "relationship_status", r);
    if (const auto* style = get("writing_style")) p.writing_style = scalar_text(*style);
    return p;
}

std::vector<AttributeTag> read_tags(const json& body, const ImportMapping& m, ImportReport& report) {
    std::vector<AttributeTag> tags;
    if (const auto* guesses = field(body, m.model_guesses); guesses && guesses->is_array()) {
        for (const auto& g : *guesses) {
            const auto* feature = field(g, m.guess_feature);
            auto attr = feature ? parse_attribute(scalar_text(*feature)) : std::nullopt;
            if (!attr) continue;
            AttributeTag tag;
            tag.attribute = *attr;
            if (const auto* v = field(g, m.guess_values)) tag.guesses = guess_list(*v);
            if (tag.guesses.empty()) continue;
            if (const auto* c = field(g, m.guess_certainty)) tag.certainty = std::clamp(scalar_int(*c).value_or(1), 1, 5);
            if (const auto* h = field(g, m.guess_hardness)) tag.hardness_coarse = coarse_of(*h);
            tag.source = TagSource::model;
            tag.verdict = ReviewVerdict::pending;
            tags.push_back(std::move(tag));
            ++report.model_tags;
        }
    }
    const auto* reviews = field(body, m.reviews);
    const auto* human = reviews && reviews->is_object() ? field(*reviews, m.human_reviewer) : nullptr;
    if (human && human->is_object()) {
        for (const auto& [key, review] : human->items()) {
            auto attr = parse_attribute(key);
            if (!attr || !review.is_object()) continue;
            const auto* estimate = field(review, m.review_estimate);
            const auto value = estimate ? std::string(text::trim(scalar_text(*estimate))) : std::string{};
            if (value.empty()) continue;
            AttributeTag tag;
            tag.attribute = *attr;
            tag.guesses = {value};
            tag.source = TagSource::human;
            if (const auto* h = field(review, m.review_hardness)) {
                if (auto n = scalar_int(*h); n && *n > 0) tag.hardness_fine = std::clamp(*n, 1, 5);
            }
            if (const auto* c = field(review, m.review_certainty)) tag.certainty = std::clamp(scalar_int(*c).value_or(1), 1, 5);
            tags.push_back(std::move(tag));
            ++report.human_labels;
        }
    }
    return tags;
}

}  // namespace

ImportMapping ImportMapping::from_json(const json& j) {
    ImportMapping m;
    auto set = [&](const char* key, std::string& target) {
        if (j.contains(key)) target = j.at(key).get<std::string>();
    };
    set("author", m.author);
    set("comment_id", m.comment_id);
    set("parent_id", m.parent_id);
    set("thread_id", m.thread_id);
    set("text", m.text);
    set("thread_title", m.thread_title);
    set("profile", m.profile);
    set("model_guesses", m.model_guesses);
    set("reviews", m.reviews);
    set("human_reviewer", m.human_reviewer);
    set("guess_feature", m.guess_feature);
    set("guess_values", m.guess_values);
    set("guess_hardness", m.guess_hardness);
    set("guess_certainty", m.guess_certainty);
    set("review_estimate", m.review_estimate);
    set("review_hardness", m.review_hardness);
    set("review_certainty", m.review_certainty);
    if (j.contains("profile_fields")) {
        for (const auto& [k, v] : j.at("profile_fields").items()) m.profile_fields[k] = v.get<std::string>();
    }
    if (j.contains("ignored")) m.ignored = j.at("ignored").get<std::vector<std::string>>();
    return m;
}

ImportMapping ImportMapping::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ImportError("cannot read mapping " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw ImportError("malformed mapping " + path.string() + ": " + e.what());
    }
}

DatasetBundle import_published(const fs::path& path, const ImportMapping& m, ImportReport* report_out) {
    std::vector<Record> records;
    for (const auto& file : input_files(path)) {
        auto part = read_records(file);
        records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    ImportReport report;
    const std::set<std::string> mapped = {m.author,  m.comment_id,    m.parent_id, m.thread_id,   m.text,
                                          m.profile, m.model_guesses, m.reviews,   m.thread_title};
    std::set<std::string> unmatched;
    for (const auto& r : records) {
        std::vector<std::string> missing;
        for (const auto* key : {&m.author, &m.comment_id, &m.thread_id, &m.text}) {
            if (!field(r.body, *key)) missing.push_back(*key);
        }
        std::vector<std::string> unknown;
        for (const auto& [k, v] : r.body.items()) {
            if (!mapped.count(k) && std::find(m.ignored.begin(), m.ignored.end(), k) == m.ignored.end()) {
                unknown.push_back(k);
                unmatched.insert(k);
            }
        }
        if (!missing.empty()) {
            throw ImportError(r.origin + ": missing " + text::join(missing, ", ") + "; unmatched columns: " +
                              (unknown.empty() ? std::string("none") : text::join(unknown, ", ")));
        }
    }
    report.unmatched_fields.assign(unmatched.begin(), unmatched.end());
    for (const auto& k : report.unmatched_fields) spdlog::warn("import: unmatched column '{}' ignored", k);

    DatasetBundle bundle;
    std::map<std::string, std::size_t> profile_index;
    std::vector<std::string> thread_order;
    std::map<std::string, std::vector<const Record*>> by_thread;
    for (const auto& r : records) {
        const auto author = scalar_text(r.body.at(m.author));
        if (!profile_index.count(author)) {
            const auto* profile = field(r.body, m.profile);
            if (!profile || !profile->is_object()) throw ImportError(r.origin + ": author " + author + " has no profile");
            auto p = read_profile(*profile, m, author, r);
            p.username = author;
            profile_index[author] = bundle.profiles.size();
            bundle.profiles.push_back(std::move(p));
        }
        const auto thread = scalar_text(r.body.at(m.thread_id));
        auto [it, fresh] = by_thread.try_emplace(thread);
        if (fresh) thread_order.push_back(thread);
        it->second.push_back(&r);
    }

    for (const auto& thread_id : thread_order) {
        const auto& members = by_thread[thread_id];
        std::string title;
        if (const auto* t = field(members.front()->body, m.thread_title)) title = scalar_text(*t);
        std::vector<std::pair<std::string, std::vector<AttributeTag>>> staged;
        std::map<Attribute, int> attribute_votes;
        for (const auto* r : members) {
            auto tags = read_tags(r->body, m, report);
            for (const auto& t : tags) ++attribute_votes[t.attribute];
            staged.emplace_back(scalar_text(r->body.at(m.comment_id)), std::move(tags));
        }
        Attribute target = Attribute::age;
        if (!attribute_votes.empty()) {
            target = std::max_element(attribute_votes.begin(), attribute_votes.end(), [](const auto& a, const auto& b) {
                         return a.second < b.second;
                     })->first;
        }
        ThreadTree tree(thread_id, target, title.empty() ? scalar_text(members.front()->body.at(m.text)) : title, "");
        std::map<std::string, CommentId> placed;
        std::vector<std::size_t> pending(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) pending[i] = i;
        while (!pending.empty()) {
            std::vector<std::size_t> next;
            for (auto i : pending) {
                const auto& body = members[i]->body;
                const auto* parent_field = field(body, m.parent_id);
                const auto parent = parent_field ? scalar_text(*parent_field) : std::string{};
                CommentId parent_id = kRootId;
                if (!parent.empty() && parent != thread_id) {
                    const auto it = placed.find(parent);
                    if (it == placed.end()) {
                        next.push_back(i);
                        continue;
                    }
                    parent_id = it->second;
                }
                CommentNode node;
                node.author = scalar_text(body.at(m.author));
                node.text = scalar_text(body.at(m.text));
                node.round = 1;
                node.tags = std::move(staged[i].second);
                tree.add_participant(node.author);
                placed[staged[i].first] = tree.attach(parent_id, std::move(node));
                ++report.comments;
            }
            if (next.size() == pending.size()) {
                throw ImportError(members[next.front()]->origin + ": parent " +
                                  scalar_text(members[next.front()]->body.at(m.parent_id)) + " not found in thread " +
                                  thread_id);
            }
            pending = std::move(next);
        }
        bundle.threads.push_back(std::move(tree));
    }
    report.threads = static_cast<int>(bundle.threads.size());
    report.profiles = static_cast<int>(bundle.profiles.size());
    bundle.manifest.generator_model = "published";
    if (report_out) *report_out = report;
    return bundle;
}

}  // namespace pai
