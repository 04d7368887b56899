#include <map>
#include <set>

#include <gtest/gtest.h>

#include "pai/errors.hpp"
#include "pai/profiles.hpp"
#include "pai/rng.hpp"
#include "pai/simulation.hpp"
#include "pai/templates.hpp"
#include "test_support.hpp"

using namespace pai;

namespace {

Profile person(const std::string& name, int age = 30) {
    Profile p;
    p.username = name;
    p.age = age;
    p.city_country = "Lisbon, Portugal";
    p.birth_city_country = "Porto, Portugal";
    p.education = "Bachelors in History";
    p.education_category = EducationCategory::college_degree;
    p.occupation = "teacher";
    p.income = "25 thousand euros";
    p.writing_style = "short and dry";
    return p;
}

CommentNode by(const std::string& author) {
    CommentNode n;
    n.author = author;
    n.text = "x";
    return n;
}

}  // namespace

TEST(Profiles, ParseKeyedBatch) {
    const auto batch = parse_profile_batch(R"(Here you go:
{"SpiralSphinx": {"age": 25, "sex": "male", "city_country": "Rio de Janeiro, Brazil",
  "birth_city_country": "Recife, Brazil", "education": "Bachelors in Sports Science",
  "occupation": "gym trainer", "income": "30 thousand reais", "income_level": "low",
  "relationship_status": "single"},
 "TinyTeen": {"age": 15, "sex": "female", "city_country": "Oslo, Norway",
  "birth_city_country": "Oslo, Norway", "education": "in high school", "occupation": "student",
  "income": "0", "income_level": "low", "relationship_status": "single"}})");
    ASSERT_EQ(batch.profiles.size(), 1u);
    const auto& p = batch.profiles[0];
    EXPECT_EQ(p.username, "SpiralSphinx");
    EXPECT_EQ(p.age, 25);
    EXPECT_EQ(p.sex, Sex::male);
    EXPECT_EQ(p.education_category, EducationCategory::college_degree);
    EXPECT_EQ(p.income_level, IncomeLevel::low);
    EXPECT_EQ(batch.rejected.size(), 1u);
}

TEST(Profiles, ParseFlatRecords) {
    const auto batch = parse_profile_batch(R"([{"username": "CobaltHeron", "age": 63, "sex": "female",
        "city_country": "Bergen, Norway", "birth_city_country": "Bergen, Norway", "education": "PhD in Geology",
        "occupation": "geologist", "income": "900 thousand kroner", "income_level": "high",
        "relationship_status": "widowed"}])");
    ASSERT_EQ(batch.profiles.size(), 1u);
    EXPECT_EQ(batch.profiles[0].relationship_status, RelationshipStatus::widowed);
    EXPECT_EQ(batch.profiles[0].education_category, EducationCategory::phd);
}

TEST(Profiles, IncomeThresholds) {
    EXPECT_EQ(income_level_for_usd(0), IncomeLevel::low);
    EXPECT_EQ(income_level_for_usd(29999), IncomeLevel::low);
    EXPECT_EQ(income_level_for_usd(30000), IncomeLevel::middle);
    EXPECT_EQ(income_level_for_usd(60000), IncomeLevel::high);
    EXPECT_EQ(income_level_for_usd(150000), IncomeLevel::very_high);
    EXPECT_THROW(income_level_for_usd(-1), DomainError);
}

TEST(Profiles, GenerateWithMockIsValidAndUnique) {
    auto gw = pai::testing::mock_gateway();
    ProfileBatchSpec spec;
    spec.count = 30;
    spec.seed = 4;
    spec.batch_size = 10;
    const auto profiles = generate_profiles(spec, gw);
    ASSERT_EQ(profiles.size(), 30u);
    std::set<std::string> names;
    for (const auto& p : profiles) {
        EXPECT_TRUE(validate_profile(p).empty()) << p.username;
        names.insert(p.username);
    }
    EXPECT_EQ(names.size(), profiles.size());
    EXPECT_EQ(generate_profiles(spec, gw), profiles);
}

TEST(Profiles, StalledGenerationThrows) {
    auto script = MockScript::parse(R"({"profile_generation": ["I would rather not."]})");
    auto gw = pai::testing::mock_gateway(script);
    ProfileBatchSpec spec;
    spec.count = 3;
    spec.max_stalled_batches = 2;
    EXPECT_THROW(generate_profiles(spec, gw), GenerationStalled);
}

TEST(Profiles, WritingStyleEnrichment) {
    auto gw = pai::testing::mock_gateway();
    auto p = person("AmberFox");
    EXPECT_THROW(enrich_writing_style(p, gw, 1), PreconditionError);
    p.writing_style.clear();
    const auto enriched = enrich_writing_style(p, gw, 1);
    EXPECT_FALSE(enriched.writing_style.empty());

    auto refusing = pai::testing::mock_gateway(MockScript::parse(R"({"writing_style": ["!refusal:no"]})"));
    EXPECT_THROW(enrich_writing_style(p, refusing, 1), StyleGenerationFailed);
}

TEST(Profiles, Overlap) {
    auto a = person("AmberFox"), b = person("BlueOwl");
    EXPECT_EQ(attribute_overlap(a, b), 8);
    b.age = 44;
    b.occupation = "nurse";
    EXPECT_EQ(attribute_overlap(a, b), 6);
    const auto h = overlap_histogram({a, b, person("CalmBear")});
    double s1 = 0, s2 = 0;
    for (int i = 0; i <= 8; ++i) {
        s1 += h.per_profile_max[i];
        s2 += h.pairwise[i];
    }
    EXPECT_NEAR(s1, 1.0, 1e-12);
    EXPECT_NEAR(s2, 1.0, 1e-12);
    EXPECT_NEAR(h.pairwise[8], 1.0 / 3.0, 1e-12);
    EXPECT_THROW(overlap_histogram({a}), PreconditionError);
}

TEST(Simulation, ParamsValidation) {
    SimulationParams p;
    EXPECT_TRUE(validate_params(p).empty());
    p.p_critic = 1.5;
    EXPECT_FALSE(validate_params(p).empty());
    p = {};
    p.min_comment_len = 30;
    EXPECT_FALSE(validate_params(p).empty());
    p = {};
    p.no_rounds = 0;
    EXPECT_FALSE(validate_params(p).empty());
}

TEST(Simulation, CommentProbabilityDecay) {
    SimulationParams p;
    EXPECT_DOUBLE_EQ(comment_probability(p, 1), 0.7);
    EXPECT_DOUBLE_EQ(comment_probability(p, 2), 0.49);
    EXPECT_NEAR(comment_probability(p, 3), 0.343, 1e-12);
    EXPECT_DOUBLE_EQ(comment_probability(p, 10), 0.05);
    p.default_comment_prob = 0.0;
    EXPECT_DOUBLE_EQ(comment_probability(p, 1), 0.0);
    EXPECT_DOUBLE_EQ(comment_probability(p, 5), 0.0);
    p.default_comment_prob = 0.03;
    EXPECT_DOUBLE_EQ(comment_probability(p, 4), 0.03);
}

TEST(Simulation, ParseTopic) {
    const auto t = parse_topic("Question: What's your go-to comfort food?\nQuestion description: mine is soup.");
    EXPECT_EQ(t.question, "What's your go-to comfort food?");
    EXPECT_EQ(t.description, "mine is soup.");
    const auto quoted = parse_topic("QUESTION: \"Why?\" question description: \"Because.\"");
    EXPECT_EQ(quoted.question, "Why?");
    EXPECT_THROW(parse_topic("Just a question"), TopicParseError);
}

TEST(Simulation, ParseYesNo) {
    EXPECT_EQ(parse_yes_no("Yes."), true);
    EXPECT_EQ(parse_yes_no("  no, not really"), false);
    EXPECT_EQ(parse_yes_no("\"YES\""), true);
    EXPECT_FALSE(parse_yes_no("maybe").has_value());
    EXPECT_FALSE(parse_yes_no("").has_value());
}

TEST(Simulation, ParseCommentTakesLastMarker) {
    const auto c = parse_comment("Reasoning: use My comment: later\nMy comment: \"final words\"");
    EXPECT_EQ(c.text, "final words");
    EXPECT_EQ(parse_comment("...\nMy new comment: hey there").text, "hey there");
    EXPECT_THROW(parse_comment("no marker here"), CommentParseError);
    EXPECT_THROW(parse_comment("My comment:   "), CommentParseError);
}

TEST(Simulation, ScoreCandidatesHandComputed) {
    ThreadTree tree("t", Attribute::age, "q", "d");
    const auto a = tree.insert(kRootId, by("Ann"), {});
    const auto b = tree.insert(a, by("Bob"), {});
    const auto c = tree.insert(kRootId, by("Bob"), {});
    const auto scores = score_candidates(tree, "Ann", {5, 3});
    ASSERT_EQ(scores.size(), 4u);
    EXPECT_DOUBLE_EQ(scores.at(kRootId), 9.0);
    EXPECT_DOUBLE_EQ(scores.at(a), 3.0);
    EXPECT_DOUBLE_EQ(scores.at(b), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(scores.at(c), 0.5);
}

TEST(Simulation, ScoreCandidatesRespectLimits) {
    ThreadTree tree("t", Attribute::age, "q", "d");
    const auto a = tree.insert(kRootId, by("Ann"), {});
    tree.insert(a, by("Bob"), {});
    tree.insert(a, by("Cid"), {});
    const auto deep = tree.insert(2, by("Dan"), {});
    const auto scores = score_candidates(tree, "Ann", {4, 2});
    EXPECT_FALSE(scores.count(a));     // full fanout
    EXPECT_FALSE(scores.count(deep));  // at max depth
    EXPECT_TRUE(scores.count(kRootId));
    EXPECT_TRUE(scores.count(2));
}

TEST(Simulation, SelectReplyTargetTopKOnly) {
    std::map<CommentId, double> scores{{0, 1.0}, {1, 5.0}, {2, 4.0}, {3, 0.0}};
    Rng rng(1);
    std::map<CommentId, int> hits;
    for (int i = 0; i < 2000; ++i) ++hits[select_reply_target(scores, 2, rng)];
    EXPECT_EQ(hits.size(), 2u);
    EXPECT_TRUE(hits.count(1) && hits.count(2));
    EXPECT_THROW(select_reply_target({}, 2, rng), PreconditionError);
}

TEST(Simulation, ZeroScoresStillSelectable) {
    std::map<CommentId, double> scores{{4, 0.0}, {7, 0.0}};
    Rng rng(2);
    std::set<CommentId> seen;
    for (int i = 0; i < 200; ++i) seen.insert(select_reply_target(scores, 10, rng));
    EXPECT_EQ(seen, (std::set<CommentId>{4, 7}));
}

TEST(Simulation, RenderSubthread) {
    ThreadTree tree("t", Attribute::age, "Why?", "Because.");
    auto n = by("Ann");
    n.text = "first reply";
    const auto a = tree.insert(kRootId, n, {});
    const auto rendered = render_subthread(path_to_root(tree, a));
    EXPECT_NE(rendered.find("Ann"), std::string::npos);
    EXPECT_NE(rendered.find("first reply"), std::string::npos);
}

TEST(Simulation, GenerateCommentRepromptsOnce) {
    auto script = MockScript::parse(R"({"comment_generation": ["no marker at all"]})");
    auto gw = pai::testing::mock_gateway(script);
    ThreadTree tree("t", Attribute::age, "q", "d");
    Rng rng(3);
    SimulationParams params;
    EXPECT_THROW(generate_comment(person("AmberFox"), path_to_root(tree, kRootId), params, rng, gw, 1),
                 CommentParseError);
}

TEST(Simulation, RefusalSkipsTurn) {
    auto script = MockScript::parse(R"({"comment_generation": ["!refusal:nope"]})");
    auto gw = pai::testing::mock_gateway(script);
    ThreadTree tree("t", Attribute::age, "q", "d");
    SimulationParams params;
    params.no_rounds = 1;
    const auto stats = simulate_thread(tree, {person("AmberFox"), person("BlueOwl")}, params, {}, gw);
    EXPECT_EQ(stats.comments, 0);
    EXPECT_GT(stats.skipped_turns, 0);
    EXPECT_EQ(tree.size(), 1u);
}

TEST(Simulation, RunsWithinLimitsAndIsDeterministic) {
    auto gw = pai::testing::mock_gateway();
    std::vector<Profile> agents;
    for (auto name : {"AmberFox", "BlueOwl", "CalmBear", "DarkElk", "EvenGnu", "FairHen"}) agents.push_back(person(name));
    SimulationParams params;
    params.no_rounds = 3;
    params.seed = 99;
    ThreadTree a("t000", Attribute::occupation, "q", "d");
    ThreadTree b("t000", Attribute::occupation, "q", "d");
    const auto sa = simulate_thread(a, agents, params, {}, gw);
    simulate_thread(b, agents, params, {}, gw);
    EXPECT_EQ(a, b);
    EXPECT_EQ(static_cast<std::size_t>(sa.comments), a.size() - 1);
    EXPECT_TRUE(a.check_structure().empty());
    std::map<std::pair<std::string, int>, int> per_turn;
    for (const auto& n : a.nodes()) {
        if (n.id == kRootId) continue;
        EXPECT_LE(a.depth(n.id), 5u);
        if (n.id != kRootId) EXPECT_GE(n.round, 1);
        ++per_turn[{n.author, n.round}];
    }
    for (const auto& [turn, count] : per_turn) EXPECT_EQ(count, 1);
}

TEST(Simulation, ZeroProbabilityProducesNothing) {
    auto gw = pai::testing::mock_gateway();
    SimulationParams params;
    params.default_comment_prob = 0.0;
    ThreadTree tree("t", Attribute::age, "q", "d");
    const auto stats = simulate_thread(tree, {person("AmberFox")}, params, {}, gw);
    EXPECT_EQ(stats.comments, 0);
}

TEST(Simulation, RunThreadBuildsTopic) {
    auto gw = pai::testing::mock_gateway();
    std::vector<Profile> pool;
    for (auto name : {"AmberFox", "BlueOwl", "CalmBear", "DarkElk"}) pool.push_back(person(name));
    SimulationParams params;
    params.seed = 5;
    SimulationStats stats;
    const auto tree = run_thread("t001", Attribute::income_level, pool, params, {}, gw, default_topic_examples(), &stats);
    EXPECT_EQ(tree.id(), "t001");
    EXPECT_EQ(tree.target_attribute(), Attribute::income_level);
    EXPECT_FALSE(tree.topic_question().empty());
    EXPECT_FALSE(tree.topic_description().empty());
    EXPECT_FALSE(tree.participants().empty());
    EXPECT_EQ(static_cast<std::size_t>(stats.comments), tree.size() - 1);
}
