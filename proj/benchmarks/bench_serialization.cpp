#include <benchmark/benchmark.h>
#include <nlohmann/json.hpp>

#include "pai/datastore.hpp"
#include "pai/serialization.hpp"

using namespace pai;

namespace {

ThreadTree sample_thread(int comments) {
    ThreadTree tree("t000", Attribute::occupation, "What keeps you busy on weekends?", "Share your routines.");
    for (int i = 0; i < comments; ++i) {
        CommentNode node;
        node.author = i % 2 ? "AmberFox" : "BlueOwl";
        node.text = "Weekends are for long rides along the coast and a slow breakfast afterwards.";
        node.round = 1 + i / 10;
        AttributeTag tag;
        tag.attribute = Attribute::city_country;
        tag.guesses = {"lisbon, portugal"};
        tag.certainty = 3;
        tag.hardness_coarse = HardnessCoarse::indirect;
        node.tags.push_back(tag);
        tree.attach(static_cast<CommentId>(i / 3), node);
    }
    return tree;
}

void BM_ThreadToJsonl(benchmark::State& state) {
    const auto tree = sample_thread(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jsonl_line(thread_to_json(tree)));
}
BENCHMARK(BM_ThreadToJsonl)->Arg(10)->Arg(100)->Arg(1000);

void BM_ThreadFromJson(benchmark::State& state) {
    const auto j = thread_to_json(sample_thread(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(thread_from_json(j));
}
BENCHMARK(BM_ThreadFromJson)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace
