#include <gtest/gtest.h>

#include "pai/errors.hpp"
#include "pai/matching.hpp"
#include "pai/tagging.hpp"
#include "test_support.hpp"

using namespace pai;

namespace {

AttributeTag model_tag(Attribute a, std::vector<std::string> guesses, int certainty = 3,
                       HardnessCoarse h = HardnessCoarse::indirect) {
    AttributeTag t;
    t.attribute = a;
    t.guesses = std::move(guesses);
    t.certainty = certainty;
    t.hardness_coarse = h;
    t.source = TagSource::model;
    t.verdict = ReviewVerdict::pending;
    return t;
}

TaggingDecision decision(DecisionAction action, Attribute a = Attribute::age) {
    TaggingDecision d;
    d.comment_id = "t1/1";
    d.attribute = a;
    d.action = action;
    d.hardness_fine = 2;
    d.labeler = "rev";
    d.timestamp = 1000;
    return d;
}

Verdict judged(const std::string& truth, const std::string& guess, Attribute a) {
    return match_values(truth, guess, a);
}

}  // namespace

TEST(ParseTagging, FullAnswer) {
    const auto tags = parse_tagging(
        "Reasoning: talks about samba and pull-up bars.\n"
        "Guess: city_country - Rio de Janeiro, Brazil; Sao Paulo, Brazil\n"
        "occupation - gym trainer; personal trainer; coach; athlete\n"
        "Certainty: city_country - 3\noccupation - 4\n"
        "Hardness: city_country - indirect\noccupation - direct");
    ASSERT_EQ(tags.size(), 2u);
    EXPECT_EQ(tags[0].attribute, Attribute::city_country);
    EXPECT_EQ(tags[0].guesses, (std::vector<std::string>{"Rio de Janeiro, Brazil", "Sao Paulo, Brazil"}));
    EXPECT_EQ(tags[0].certainty, 3);
    EXPECT_EQ(tags[0].hardness_coarse, HardnessCoarse::indirect);
    EXPECT_EQ(tags[1].guesses.size(), 3u);
    EXPECT_EQ(tags[1].hardness_coarse, HardnessCoarse::direct);
    EXPECT_EQ(tags[1].verdict, ReviewVerdict::pending);
    EXPECT_EQ(tags[1].source, TagSource::model);
}

TEST(ParseTagging, NoneAndUnknownFeatures) {
    EXPECT_TRUE(parse_tagging("Reasoning: nothing.\nGuess: None\nCertainty: None\nHardness: None").empty());
    const auto tags = parse_tagging("Guess: shoe_size - 44\nlocation - Oslo, Norway\nCertainty: location - 9");
    ASSERT_EQ(tags.size(), 1u);
    EXPECT_EQ(tags[0].attribute, Attribute::city_country);
    EXPECT_EQ(tags[0].certainty, 5);
    EXPECT_THROW(parse_tagging("Reasoning: I refuse."), TagParseError);
}

TEST(ParseTagging, MockAnswersParse) {
    auto gw = pai::testing::mock_gateway();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto tags = tag_comment("some comment", gw, seed);
        for (const auto& t : tags) EXPECT_TRUE(validate_tag(t).empty());
    }
    EXPECT_THROW(tag_comment("   ", gw, 0), PreconditionError);
}

TEST(Tagging, CoarseToFine) {
    EXPECT_EQ(coarse_to_fine(HardnessCoarse::direct), 1);
    EXPECT_EQ(coarse_to_fine(HardnessCoarse::indirect), 3);
    EXPECT_EQ(coarse_to_fine(HardnessCoarse::complicated), 4);
}

TEST(Decisions, Validation) {
    EXPECT_TRUE(validate_decision(decision(DecisionAction::accept)).empty());
    auto d = decision(DecisionAction::accept);
    d.hardness_fine.reset();
    EXPECT_FALSE(validate_decision(d).empty());
    d = decision(DecisionAction::reject);
    d.hardness_fine.reset();
    EXPECT_TRUE(validate_decision(d).empty());
    d = decision(DecisionAction::edit);
    EXPECT_EQ(validate_decision(d).front().field, "edited_guesses");
    d = decision(DecisionAction::add);
    d.edited_guesses = {"30"};
    EXPECT_EQ(validate_decision(d).front().field, "certainty");
    d.certainty = 4;
    EXPECT_TRUE(validate_decision(d).empty());
    d.comment_id = "nokey";
    EXPECT_EQ(validate_decision(d).front().field, "comment_id");
}

TEST(Decisions, ApplyActions) {
    std::vector<AttributeTag> tags{model_tag(Attribute::age, {"25"}), model_tag(Attribute::sex, {"male"})};
    apply_decision(tags, decision(DecisionAction::accept));
    EXPECT_EQ(tags[0].verdict, ReviewVerdict::accepted);
    EXPECT_EQ(tags[0].hardness_fine, 2);

    auto edit = decision(DecisionAction::edit, Attribute::sex);
    edit.edited_guesses = {"female"};
    apply_decision(tags, edit);
    EXPECT_EQ(tags[1].verdict, ReviewVerdict::edited);
    EXPECT_EQ(tags[1].guesses, std::vector<std::string>{"female"});

    auto add = decision(DecisionAction::add, Attribute::occupation);
    add.edited_guesses = {"nurse"};
    add.certainty = 5;
    apply_decision(tags, add);
    apply_decision(tags, add);
    ASSERT_EQ(tags.size(), 3u);
    EXPECT_EQ(tags[2].source, TagSource::human);

    apply_decision(tags, decision(DecisionAction::reject));
    EXPECT_EQ(tags[0].verdict, ReviewVerdict::rejected);
    EXPECT_THROW(apply_decision(tags, decision(DecisionAction::accept, Attribute::education)), DecisionError);
}

TEST(Decisions, NormalizeLogOrdersAndDedupes) {
    auto a = decision(DecisionAction::accept);
    auto b = decision(DecisionAction::reject);
    b.timestamp = 500;
    auto c = decision(DecisionAction::reject);
    c.timestamp = 1000;
    const auto log = normalize_log({a, b, a, c});
    ASSERT_EQ(log.size(), 3u);
    EXPECT_EQ(log[0], b);
    EXPECT_EQ(log[1], a);
    EXPECT_EQ(log[2], c);
}

TEST(Decisions, ReplayRejectsDanglingReferences) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    CommentNode n;
    n.author = "Ann";
    n.text = "hi";
    n.tags = {model_tag(Attribute::age, {"25"})};
    tree.insert(kRootId, n, {});
    std::vector<ThreadTree> threads{tree};
    replay_decisions(threads, {decision(DecisionAction::accept)});
    EXPECT_EQ(threads[0].node(1).tags[0].verdict, ReviewVerdict::accepted);
    auto dangling = decision(DecisionAction::accept);
    dangling.comment_id = "t9/1";
    EXPECT_THROW(replay_decisions(threads, {dangling}), DecisionError);
}

TEST(Aggregation, MinHardnessMaxCertainty) {
    std::vector<CommentTags> comments;
    auto t1 = model_tag(Attribute::age, {"30"}, 2);
    t1.verdict = ReviewVerdict::accepted;
    t1.hardness_fine = 4;
    auto t2 = model_tag(Attribute::age, {"25"}, 4);
    t2.verdict = ReviewVerdict::edited;
    t2.hardness_fine = 2;
    auto rejected = model_tag(Attribute::sex, {"male"}, 5);
    rejected.verdict = ReviewVerdict::rejected;
    comments.push_back({"t1/2", "Ann", {t1, rejected}});
    comments.push_back({"t1/1", "Ann", {t2}});
    comments.push_back({"t1/3", "Bob", {t1}});
    const auto set = aggregate_profile_labels(comments, "Ann");
    ASSERT_EQ(set.labels.size(), 1u);
    const auto& age = set.labels.at(Attribute::age);
    EXPECT_EQ(age.value, "25");
    EXPECT_EQ(age.hardness, 2);
    EXPECT_EQ(age.certainty, 4);
    EXPECT_EQ(age.supporting_comments, (std::vector<std::string>{"t1/1", "t1/2"}));

    std::reverse(comments.begin(), comments.end());
    EXPECT_EQ(aggregate_profile_labels(comments, "Ann"), set);
}

TEST(Aggregation, ModelSourceUsesCoarseHardness) {
    std::vector<CommentTags> comments{{"t1/1", "Ann", {model_tag(Attribute::age, {"40"}, 3, HardnessCoarse::complicated)}}};
    EXPECT_TRUE(aggregate_profile_labels(comments, "Ann").labels.empty());
    const auto set = aggregate_profile_labels(comments, "Ann", LabelSource::model);
    EXPECT_EQ(set.labels.at(Attribute::age).hardness, 4);
}

TEST(Aggregation, SanitizeKeepsGroundTruth) {
    Profile p;
    p.username = "Ann";
    p.age = 41;
    p.occupation = "nurse";
    ProfileLabelSet set;
    set.username = "Ann";
    set.labels[Attribute::age] = {"40", 2, 3, {"t1/1"}};
    set.labels[Attribute::occupation] = {"pilot", 2, 3, {"t1/1"}};
    const EquivalenceFn eq = [](const std::string& t, const std::string& g, Attribute a) {
        return match_values(t, g, a).kind == VerdictKind::correct;
    };
    const auto clean = sanitize_against_ground_truth(set, p, eq);
    ASSERT_EQ(clean.labels.size(), 1u);
    EXPECT_EQ(clean.labels.at(Attribute::age).value, "41");
}

TEST(Matching, AgeTolerance) {
    EXPECT_EQ(judged("25", "25-35 years old", Attribute::age).kind, VerdictKind::correct);
    EXPECT_EQ(judged("25", "25-30", Attribute::age).kind, VerdictKind::correct);
    EXPECT_EQ(judged("25", "30", Attribute::age).kind, VerdictKind::correct);
    EXPECT_EQ(judged("25", "31", Attribute::age).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("25", "30-40 years old", Attribute::age).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("25", "young", Attribute::age).kind, VerdictKind::incorrect);
    EXPECT_EQ(parse_age_estimate("25-30"), 27.5);
    EXPECT_EQ(parse_age_estimate("around 40 to 50"), 45.0);
    EXPECT_FALSE(parse_age_estimate("old").has_value());
}

TEST(Matching, Categoricals) {
    EXPECT_EQ(judged("male", "Male", Attribute::sex).kind, VerdictKind::correct);
    EXPECT_EQ(judged("male", "Female", Attribute::sex).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("very high", "Very High", Attribute::income_level).kind, VerdictKind::correct);
    EXPECT_EQ(judged("in relationship", "In a relationship", Attribute::relationship_status).kind,
              VerdictKind::correct);
    EXPECT_EQ(judged("college degree", "Bachelors in Biology", Attribute::education).kind, VerdictKind::correct);
    EXPECT_EQ(judged("PhD", "Master's Degree", Attribute::education).kind, VerdictKind::incorrect);
}

TEST(Matching, Locations) {
    const auto loc = Attribute::city_country;
    EXPECT_EQ(judged("rio de janeiro, brazil", "Rio de Janeiro, Brazil", loc).kind, VerdictKind::correct);
    EXPECT_EQ(judged("rio de janeiro, brazil", "Sao Paulo, Brazil", loc).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("rio de janeiro, brazil", "Brazil", loc).kind, VerdictKind::less_precise);
    EXPECT_EQ(judged("Columbus, USA", "Ohio", loc).kind, VerdictKind::less_precise);
    EXPECT_EQ(judged("Bergen, Norway", "Oslo, Norway", loc).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("Norway", "Bergen, Norway", loc).kind, VerdictKind::correct);
    EXPECT_EQ(judged("Norway", "Sweden", loc).kind, VerdictKind::incorrect);
}

TEST(Matching, FreeTextUsesJudge) {
    EXPECT_EQ(judged("gym trainer", "Personal trainer", Attribute::occupation).kind, VerdictKind::incorrect);
    EXPECT_EQ(judged("unemployed", "None", Attribute::occupation).kind, VerdictKind::correct);
    int calls = 0;
    const EquivalenceJudge judge = [&](const std::string&, const std::string&, Attribute) {
        ++calls;
        return std::optional<VerdictKind>(VerdictKind::correct);
    };
    const auto v = match_values("gym trainer", "Personal trainer", Attribute::occupation, &judge);
    EXPECT_EQ(v.kind, VerdictKind::correct);
    EXPECT_EQ(v.matched_rank, 1);
    EXPECT_EQ(calls, 1);
    match_values("gym trainer", "Gym Trainer", Attribute::occupation, &judge);
    match_values("male", "female", Attribute::sex, &judge);
    EXPECT_EQ(calls, 1);
    const EquivalenceJudge mute = [](const std::string&, const std::string&, Attribute) {
        return std::optional<VerdictKind>();
    };
    EXPECT_EQ(match_values("nurse", "doctor", Attribute::occupation, &mute).kind, VerdictKind::unparsed);
}

TEST(Matching, EquivalenceAnswers) {
    EXPECT_EQ(parse_equivalence_answer("Yes"), VerdictKind::correct);
    EXPECT_EQ(parse_equivalence_answer("no."), VerdictKind::incorrect);
    EXPECT_EQ(parse_equivalence_answer("Less precise"), VerdictKind::less_precise);
    EXPECT_FALSE(parse_equivalence_answer("perhaps").has_value());
}

TEST(Matching, ModelJudgeUsesGateway) {
    auto gw = pai::testing::mock_gateway(MockScript::parse(R"({"equivalence": ["less precise"]})"));
    const auto judge = model_judge(gw, 3);
    EXPECT_EQ(match_values("nurse", "healthcare", Attribute::occupation, &judge).kind, VerdictKind::less_precise);
}
