#include "pai/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "pai/errors.hpp"
#include "pai/matching.hpp"
#include "pai/parallel.hpp"
#include "pai/rng.hpp"
#include "pai/templates.hpp"
#include "pai/text.hpp"

namespace pai {

Summary summarize(std::vector<double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    std::sort(values.begin(), values.end());
    const auto mid = s.n / 2;
    s.median = s.n % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return s;
}

ThreadStats thread_stats(const std::vector<ThreadTree>& threads, const std::vector<std::string>* profiles) {
    if (threads.empty()) throw PreconditionError("thread statistics need at least one thread");
    std::vector<double> lengths, per_thread, authors_per_thread;
    std::map<std::string, int> per_profile;
    if (profiles) {
        for (const auto& p : *profiles) per_profile[p] = 0;
    }
    for (const auto& tree : threads) {
        std::set<std::string> authors;
        int comments = 0;
        for (const auto& node : tree.nodes()) {
            if (node.id == kRootId) continue;
            ++comments;
            lengths.push_back(static_cast<double>(text::utf8_length(node.text)));
            authors.insert(node.author);
            ++per_profile[node.author];
        }
        per_thread.push_back(comments);
        authors_per_thread.push_back(static_cast<double>(authors.size()));
    }
    std::vector<double> per_profile_values;
    for (const auto& [name, count] : per_profile) per_profile_values.push_back(count);
    return {summarize(lengths), summarize(per_thread), summarize(authors_per_thread), summarize(per_profile_values)};
}

HardnessTable empty_hardness_table() {
    HardnessTable t;
    for (Attribute a : kAllAttributes) t[a] = {};
    return t;
}

HardnessTable hardness_distribution(const std::vector<ProfileLabelSet>& labels) {
    auto t = empty_hardness_table();
    for (const auto& set : labels) {
        for (const auto& [attr, label] : set.labels) {
            if (label.hardness >= 1 && label.hardness <= 5) ++t[attr][static_cast<std::size_t>(label.hardness - 1)];
        }
    }
    return t;
}

HardnessTable hardness_distribution(const std::vector<CommentTags>& comments) {
    auto t = empty_hardness_table();
    for (const auto& c : comments) {
        std::map<Attribute, int> best;
        for (const auto& tag : c.tags) {
            if (!tag.human_verified() || !tag.hardness_fine) continue;
            auto [it, fresh] = best.emplace(tag.attribute, *tag.hardness_fine);
            if (!fresh) it->second = std::min(it->second, *tag.hardness_fine);
        }
        for (const auto& [attr, h] : best) {
            if (h >= 1 && h <= 5) ++t[attr][static_cast<std::size_t>(h - 1)];
        }
    }
    return t;
}

AgreementMatrix tag_agreement(const std::vector<CommentAttributeSets>& comments) {
    AgreementMatrix m;
    for (const auto& c : comments) {
        for (Attribute a : kAllAttributes) {
            const bool model = c.model.count(a) > 0, human = c.human.count(a) > 0;
            if (model && human) ++m.tp;
            else if (model) ++m.fp;
            else if (human) ++m.fn;
            else ++m.tn;
        }
    }
    return m;
}

AgreementMatrix tag_agreement(const std::vector<CommentTags>& comments) {
    std::vector<CommentAttributeSets> sets;
    sets.reserve(comments.size());
    for (const auto& c : comments) {
        CommentAttributeSets s;
        for (const auto& tag : c.tags) {
            if (tag.source == TagSource::model) s.model.insert(tag.attribute);
            if (tag.human_verified()) s.human.insert(tag.attribute);
        }
        sets.push_back(std::move(s));
    }
    return tag_agreement(sets);
}

std::string_view to_string(Authorship a) { return a == Authorship::human ? "human" : "synthetic"; }

std::optional<Authorship> parse_authorship(std::string_view s) {
    const auto n = text::normalize(s);
    if (n == "human") return Authorship::human;
    if (n == "synthetic" || n == "llm" || n == "ai") return Authorship::synthetic;
    return std::nullopt;
}

HumanStudyMetrics human_study_metrics(const std::vector<JudgmentRecord>& judgments) {
    HumanStudyMetrics out;
    std::map<std::string, std::pair<int, int>> raters;  // correct, total
    std::map<std::string, std::vector<const JudgmentRecord*>> by_comment;
    for (const auto& j : judgments) {
        const bool truth = j.source_truth == Authorship::human, judged = j.judged_as == Authorship::human;
        if (truth && judged) ++out.confusion.tp;
        else if (truth) ++out.confusion.fn;
        else if (judged) ++out.confusion.fp;
        else ++out.confusion.tn;
        auto& r = raters[j.rater_id];
        r.first += truth == judged;
        ++r.second;
        by_comment[j.comment_id].push_back(&j);
    }
    const auto total = out.confusion.total();
    out.accuracy = total ? static_cast<double>(out.confusion.tp + out.confusion.tn) / static_cast<double>(total) : 0.0;
    out.fpr = out.confusion.fpr();
    out.fnr = out.confusion.fnr();
    for (const auto& [id, r] : raters) {
        const double acc = static_cast<double>(r.first) / r.second;
        out.per_rater_accuracy[id] = acc;
        ++out.rater_histogram[static_cast<std::size_t>(std::min(9, static_cast<int>(acc * 10.0)))];
    }
    int pairs = 0, agreeing = 0;
    for (const auto& [id, js] : by_comment) {
        if (js.size() != 2) out.warnings.push_back(fmt::format("comment {} judged by {} raters", id, js.size()));
        if (js.size() >= 2) {
            ++pairs;
            agreeing += js[0]->judged_as == js[1]->judged_as;
        }
    }
    out.pairwise_agreement = pairs ? static_cast<double>(agreeing) / pairs : 0.0;
    return out;
}

std::optional<std::vector<std::string>> parse_subreddits(std::string_view answer) {
    static const std::regex re(R"((?:^|[^A-Za-z0-9_])/?r/([A-Za-z0-9_]+))");
    std::vector<std::string> out;
    const std::string s(answer);
    for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end && out.size() < 3; ++it) {
        auto name = text::to_lower((*it)[1].str());
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
    }
    if (out.empty()) return std::nullopt;
    return out;
}

TopicClassification classify_thread_topics(const std::vector<ThreadTree>& threads, Gateway& gateway,
                                           std::uint64_t seed) {
    std::vector<std::optional<std::vector<std::string>>> answers(threads.size());
    const auto system = templates::get(templates::kSubredditSystem).body;
    parallel_for(threads.size(), gateway.max_in_flight(), [&](std::size_t i) {
        const auto& tree = threads[i];
        const auto prompt = render(templates::get(templates::kSubredditClassification),
                                   {{"title", tree.topic_question()}, {"text", tree.topic_description()}});
        auto request =
            gateway.prepare(templates::kSubredditClassification, system, prompt, mix_seed(seed, stable_hash(tree.id())));
        try {
            answers[i] = parse_subreddits(gateway.complete(request));
        } catch (const Error& e) {
            spdlog::warn("subreddit classification of {} failed: {}", tree.id(), e.what());
        }
    });
    TopicClassification out;
    std::set<std::string> unique;
    for (std::size_t i = 0; i < threads.size(); ++i) {
        if (!answers[i]) {
            spdlog::warn("thread {}: unreadable subreddit answer, skipped", threads[i].id());
            out.skipped.push_back(threads[i].id());
            continue;
        }
        for (const auto& name : *answers[i]) {
            unique.insert(name);
            ++out.per_attribute[threads[i].target_attribute()][name];
        }
        out.per_thread[threads[i].id()] = *answers[i];
    }
    out.unique_subreddits = unique.size();
    return out;
}

ProfileAgreement llm_profile_agreement(const std::vector<ProfileLabelSet>& llm,
                                       const std::vector<ProfileLabelSet>& human,
                                       const std::vector<Profile>& truth) {
    std::map<std::string, const Profile*> profiles;
    for (const auto& p : truth) profiles[p.username] = &p;
    std::map<std::string, const ProfileLabelSet*> model;
    for (const auto& s : llm) model[s.username] = &s;

    ProfileAgreement out;
    int truth_hits = 0, truth_total = 0, llm_hits = 0;
    for (const auto& set : human) {
        const auto profile = profiles.find(set.username);
        const auto other = model.find(set.username);
        for (const auto& [attr, label] : set.labels) {
            ++out.human_labels;
            if (profile != profiles.end()) {
                ++truth_total;
                truth_hits += match_values(ground_truth(*profile->second, attr), label.value, attr).kind ==
                              VerdictKind::correct;
            }
            if (other == model.end()) continue;
            const auto it = other->second->labels.find(attr);
            if (it != other->second->labels.end()) {
                llm_hits += match_values(label.value, it->second.value, attr).kind == VerdictKind::correct;
            }
        }
    }
    out.human_vs_truth = truth_total ? static_cast<double>(truth_hits) / truth_total : 0.0;
    out.llm_vs_human = out.human_labels ? static_cast<double>(llm_hits) / out.human_labels : 0.0;
    return out;
}

namespace {

std::string summary_row(std::string_view name, const Summary& s, std::string_view sep, bool aligned) {
    if (aligned) return fmt::format("{:<22}{:>10.2f}{:>10.2f}{:>10.2f}{:>8}\n", name, s.mean, s.std, s.median, s.n);
    return fmt::format("{}{}{:.4f}{}{:.4f}{}{:.4f}{}{}\n", name, sep, s.mean, sep, s.std, sep, s.median, sep, s.n);
}

}  // namespace

std::string thread_stats_text(const ThreadStats& s) {
    std::string out = fmt::format("{:<22}{:>10}{:>10}{:>10}{:>8}\n", "", "mean", "std", "median", "n");
    out += summary_row("comment length", s.comment_length, "", true);
    out += summary_row("comments / thread", s.comments_per_thread, "", true);
    out += summary_row("profiles / thread", s.profiles_per_thread, "", true);
    out += summary_row("comments / profile", s.comments_per_profile, "", true);
    return out;
}

std::string thread_stats_csv(const ThreadStats& s) {
    std::string out = "statistic,mean,std,median,n\n";
    out += summary_row("comment_length", s.comment_length, ",", false);
    out += summary_row("comments_per_thread", s.comments_per_thread, ",", false);
    out += summary_row("profiles_per_thread", s.profiles_per_thread, ",", false);
    out += summary_row("comments_per_profile", s.comments_per_profile, ",", false);
    return out;
}

std::string hardness_table_text(const HardnessTable& t) {
    std::string out = fmt::format("{:<22}{:>6}{:>6}{:>6}{:>6}{:>6}{:>8}\n", "", "1", "2", "3", "4", "5", "total");
    std::array<int, 5> sums{};
    for (Attribute a : kTableOrder) {
        const auto it = t.find(a);
        const auto row = it == t.end() ? std::array<int, 5>{} : it->second;
        for (std::size_t i = 0; i < 5; ++i) sums[i] += row[i];
        out += fmt::format("{:<22}{:>6}{:>6}{:>6}{:>6}{:>6}{:>8}\n", display_name(a), row[0], row[1], row[2], row[3],
                           row[4], std::accumulate(row.begin(), row.end(), 0));
    }
    out += fmt::format("{:<22}{:>6}{:>6}{:>6}{:>6}{:>6}{:>8}\n", "Total", sums[0], sums[1], sums[2], sums[3], sums[4],
                       std::accumulate(sums.begin(), sums.end(), 0));
    return out;
}

std::string hardness_table_csv(const HardnessTable& t) {
    std::string out = "attribute,1,2,3,4,5\n";
    for (Attribute a : kTableOrder) {
        const auto it = t.find(a);
        const auto row = it == t.end() ? std::array<int, 5>{} : it->second;
        out += fmt::format("{},{},{},{},{},{}\n", to_string(a), row[0], row[1], row[2], row[3], row[4]);
    }
    return out;
}

std::string agreement_text(const AgreementMatrix& m) {
    std::string out = fmt::format("{:<18}{:>14}{:>14}\n", "", "human: no", "human: yes");
    out += fmt::format("{:<18}{:>14}{:>14}\n", "model: no", m.tn, m.fn);
    out += fmt::format("{:<18}{:>14}{:>14}\n", "model: yes", m.fp, m.tp);
    out += fmt::format("FNR {:.3f}  FPR {:.3f}\n", m.fnr(), m.fpr());
    return out;
}

std::string human_study_text(const HumanStudyMetrics& m) {
    std::string out = fmt::format("{:<18}{:>14}{:>14}\n", "", "judged synth.", "judged human");
    out += fmt::format("{:<18}{:>14}{:>14}\n", "synthetic", m.confusion.tn, m.confusion.fp);
    out += fmt::format("{:<18}{:>14}{:>14}\n", "human", m.confusion.fn, m.confusion.tp);
    out += fmt::format("accuracy {:.1f}%  FPR {:.1f}%  FNR {:.1f}%  rater agreement {:.1f}%\n", 100.0 * m.accuracy,
                       100.0 * m.fpr, 100.0 * m.fnr, 100.0 * m.pairwise_agreement);
    out += "rater accuracy deciles:";
    for (int c : m.rater_histogram) out += fmt::format(" {}", c);
    out += "\n";
    for (const auto& w : m.warnings) out += "warning: " + w + "\n";
    return out;
}

}  // namespace pai
