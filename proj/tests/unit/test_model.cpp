#include <set>

#include <gtest/gtest.h>

#include "pai/errors.hpp"
#include "pai/model.hpp"

using namespace pai;

namespace {

Profile sample_profile() {
    Profile p;
    p.username = "SpiralSphinx";
    p.age = 25;
    p.sex = Sex::male;
    p.city_country = "Rio de Janeiro, Brazil";
    p.birth_city_country = "Recife, Brazil";
    p.education = "Bachelor's in Sports Science";
    p.education_category = EducationCategory::college_degree;
    p.occupation = "gym trainer";
    p.income = "30 thousand brazilian reais";
    p.income_level = IncomeLevel::low;
    p.relationship_status = RelationshipStatus::single;
    return p;
}

CommentNode comment(const std::string& author) {
    CommentNode n;
    n.author = author;
    n.text = "text by " + author;
    return n;
}

}  // namespace

TEST(Attribute, CanonicalNamesRoundTrip) {
    for (Attribute a : kAllAttributes) {
        auto parsed = parse_attribute(to_string(a));
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, a);
    }
}

TEST(Attribute, AliasesResolve) {
    EXPECT_EQ(parse_attribute("location"), Attribute::city_country);
    EXPECT_EQ(parse_attribute("Place of Birth"), Attribute::birth_city_country);
    EXPECT_EQ(parse_attribute("income level"), Attribute::income_level);
    EXPECT_EQ(parse_attribute("gender"), Attribute::sex);
    EXPECT_EQ(parse_attribute("Relationship Status"), Attribute::relationship_status);
    EXPECT_FALSE(parse_attribute("shoe size").has_value());
}

TEST(Attribute, TableOrderIsPermutation) {
    std::set<Attribute> seen(kTableOrder.begin(), kTableOrder.end());
    EXPECT_EQ(seen.size(), kAllAttributes.size());
    EXPECT_EQ(display_name(Attribute::city_country), "Location");
    EXPECT_EQ(display_name(Attribute::birth_city_country), "Place of Birth");
}

TEST(Attribute, CategoricalSplit) {
    EXPECT_TRUE(is_categorical(Attribute::sex));
    EXPECT_TRUE(is_categorical(Attribute::income_level));
    EXPECT_TRUE(is_categorical(Attribute::relationship_status));
    EXPECT_TRUE(is_categorical(Attribute::education));
    EXPECT_FALSE(is_categorical(Attribute::occupation));
    EXPECT_FALSE(is_categorical(Attribute::city_country));
}

TEST(Domains, ParseCategoricals) {
    EXPECT_EQ(parse_sex("Female"), Sex::female);
    EXPECT_EQ(parse_sex(" m "), Sex::male);
    EXPECT_FALSE(parse_sex("robot").has_value());
    EXPECT_EQ(parse_income_level("Very High"), IncomeLevel::very_high);
    EXPECT_EQ(parse_income_level("Low (<30k USD)"), IncomeLevel::low);
    EXPECT_EQ(parse_relationship_status("In Relationship"), RelationshipStatus::in_relationship);
    EXPECT_EQ(parse_relationship_status("widower"), RelationshipStatus::widowed);
    EXPECT_EQ(parse_education_category("PhD"), EducationCategory::phd);
    EXPECT_EQ(parse_education_category("Master's Degree"), EducationCategory::masters_degree);
}

TEST(Domains, EducationKeywordMapping) {
    EXPECT_EQ(categorize_education("PhD in Chemistry"), EducationCategory::phd);
    EXPECT_EQ(categorize_education("Masters in Economics"), EducationCategory::masters_degree);
    EXPECT_EQ(categorize_education("MBA"), EducationCategory::masters_degree);
    EXPECT_EQ(categorize_education("Bachelors in Graphic Design"), EducationCategory::college_degree);
    EXPECT_EQ(categorize_education("BSc Computer Science"), EducationCategory::college_degree);
    EXPECT_EQ(categorize_education("High School Diploma"), EducationCategory::high_school);
    EXPECT_EQ(categorize_education("self-taught"), EducationCategory::high_school);
}

TEST(ProfileValidation, AcceptsWellFormed) {
    EXPECT_TRUE(validate_profile(sample_profile()).empty());
    EXPECT_FALSE(validate_profile(sample_profile(), true).empty());
}

TEST(ProfileValidation, RejectsMinorsAndBadNames) {
    auto p = sample_profile();
    p.age = 15;
    EXPECT_FALSE(validate_profile(p).empty());
    p = sample_profile();
    p.username = "spiral sphinx";
    EXPECT_FALSE(validate_profile(p).empty());
    p = sample_profile();
    p.city_country = "Brazil";
    EXPECT_FALSE(validate_profile(p).empty());
}

TEST(ProfileValidation, GroundTruthUsesCategories) {
    const auto p = sample_profile();
    EXPECT_EQ(ground_truth(p, Attribute::education), "college degree");
    EXPECT_EQ(raw_value(p, Attribute::education), "Bachelor's in Sports Science");
    EXPECT_EQ(ground_truth(p, Attribute::age), "25");
    EXPECT_EQ(ground_truth(p, Attribute::sex), "male");
    EXPECT_EQ(ground_truth(p, Attribute::income_level), "low");
}

TEST(AttributeTagValidation, Bounds) {
    AttributeTag t;
    t.guesses = {"25"};
    t.certainty = 3;
    EXPECT_TRUE(validate_tag(t).empty());
    t.certainty = 6;
    EXPECT_FALSE(validate_tag(t).empty());
    t.certainty = 3;
    t.guesses = {"a", "b", "c", "d"};
    EXPECT_FALSE(validate_tag(t).empty());
    t.guesses = {"a"};
    t.source = TagSource::human;
    EXPECT_FALSE(validate_tag(t).empty());
    t.hardness_fine = 2;
    EXPECT_TRUE(validate_tag(t).empty());
}

TEST(AttributeTagValidation, HumanVerified) {
    AttributeTag t;
    t.guesses = {"x"};
    EXPECT_FALSE(t.human_verified());
    t.verdict = ReviewVerdict::accepted;
    EXPECT_TRUE(t.human_verified());
    t.verdict = ReviewVerdict::edited;
    EXPECT_TRUE(t.human_verified());
    t.verdict = ReviewVerdict::rejected;
    EXPECT_FALSE(t.human_verified());
    t.source = TagSource::human;
    t.verdict.reset();
    EXPECT_TRUE(t.human_verified());
}

TEST(ThreadTree, RootIsSystem) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    ASSERT_EQ(tree.size(), 1u);
    EXPECT_EQ(tree.root().author, kSystemAuthor);
    EXPECT_EQ(tree.depth(kRootId), 1u);
    EXPECT_TRUE(tree.check_structure().empty());
}

TEST(ThreadTree, InsertAssignsOrdinals) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    TreeLimits limits;
    const auto a = tree.insert(kRootId, comment("Ann"), limits);
    const auto b = tree.insert(a, comment("Bob"), limits);
    EXPECT_EQ(a, 1u);
    EXPECT_EQ(b, 2u);
    EXPECT_EQ(tree.depth(b), 3u);
    EXPECT_EQ(tree.node(b).parent, a);
    EXPECT_EQ(tree.node(a).children, std::vector<CommentId>{b});
}

TEST(ThreadTree, DepthLimit) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    TreeLimits limits{3, 3};
    auto id = tree.insert(kRootId, comment("A"), limits);
    id = tree.insert(id, comment("B"), limits);
    EXPECT_EQ(tree.depth(id), 3u);
    EXPECT_THROW(tree.insert(id, comment("C"), limits), DepthExceeded);
    EXPECT_EQ(tree.size(), 3u);
}

TEST(ThreadTree, FanoutLimitExemptsRoot) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    TreeLimits limits{5, 2};
    for (int i = 0; i < 4; ++i) tree.insert(kRootId, comment("A"), limits);
    EXPECT_EQ(tree.root().children.size(), 4u);
    tree.insert(1, comment("B"), limits);
    tree.insert(1, comment("C"), limits);
    EXPECT_THROW(tree.insert(1, comment("D"), limits), FanoutExceeded);
}

TEST(ThreadTree, UnknownParentThrows) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    EXPECT_THROW(tree.insert(7, comment("A"), {}), LookupError);
    EXPECT_THROW(tree.node(7), LookupError);
}

TEST(ThreadTree, FromPartsRejectsBrokenStructure) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    tree.insert(kRootId, comment("A"), {});
    tree.add_participant("A");
    auto nodes = tree.nodes();
    auto rebuilt = ThreadTree::from_parts("t1", Attribute::age, "q", "d", nodes, {"A"});
    EXPECT_EQ(rebuilt, tree);
    nodes[1].parent = 5;
    EXPECT_THROW(ThreadTree::from_parts("t1", Attribute::age, "q", "d", nodes, {"A"}), IntegrityError);
}

TEST(ThreadTree, PathToRoot) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    const auto a = tree.insert(kRootId, comment("A"), {});
    const auto b = tree.insert(a, comment("B"), {});
    const auto path = path_to_root(tree, b);
    ASSERT_EQ(path.size(), 3u);
    EXPECT_EQ(path[0]->id, kRootId);
    EXPECT_EQ(path[2]->id, b);
    EXPECT_THROW(path_to_root(tree, 99), LookupError);
}

TEST(ThreadTree, SubtreeCountsIncludeSelfAndSkipRoot) {
    ThreadTree tree("t1", Attribute::age, "q", "d");
    const auto a = tree.insert(kRootId, comment("Ann"), {});
    tree.insert(a, comment("Bob"), {});
    tree.insert(a, comment("Ann"), {});
    tree.insert(kRootId, comment("Bob"), {});
    EXPECT_EQ(subtree_counts(tree, kRootId, "Ann"), (SubtreeCounts{2, 2}));
    EXPECT_EQ(subtree_counts(tree, a, "Ann"), (SubtreeCounts{2, 1}));
    EXPECT_EQ(subtree_counts(tree, a, "Bob"), (SubtreeCounts{1, 2}));
}

TEST(CommentKey, RoundTrip) {
    EXPECT_EQ(comment_key("t007", 12), "t007/12");
    auto parsed = parse_comment_key("t007/12");
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(parsed->first, "t007");
    EXPECT_EQ(parsed->second, 12u);
    EXPECT_FALSE(parse_comment_key("t007").has_value());
    EXPECT_FALSE(parse_comment_key("t007/x").has_value());
}
