#include <benchmark/benchmark.h>

#include "pai/rng.hpp"
#include "pai/simulation.hpp"

using namespace pai;

namespace {

ThreadTree grown_tree(int nodes, std::uint64_t seed) {
    static const std::vector<std::string> authors = {"AmberFox", "BlueOwl", "CalmBear", "DarkElk", "EvenGnu"};
    Rng rng(seed);
    ThreadTree tree("b", Attribute::age, "q", "d");
    for (int i = 0; i < nodes; ++i) {
        CommentNode node;
        node.author = authors[rng.uniform_below(authors.size())];
        node.text = "c";
        tree.attach(static_cast<CommentId>(rng.uniform_below(tree.size())), node);
    }
    return tree;
}

void BM_ScoreCandidates(benchmark::State& state) {
    const auto tree = grown_tree(static_cast<int>(state.range(0)), 3);
    const TreeLimits limits{5, 3};
    for (auto _ : state) benchmark::DoNotOptimize(score_candidates(tree, "BlueOwl", limits));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScoreCandidates)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_SelectReplyTarget(benchmark::State& state) {
    const auto tree = grown_tree(256, 5);
    const auto scores = score_candidates(tree, "CalmBear", {64, 64});
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(select_reply_target(scores, 3, rng));
}
BENCHMARK(BM_SelectReplyTarget);

}  // namespace
