#include <benchmark/benchmark.h>

#include "pai/evaluation.hpp"
#include "pai/matching.hpp"
#include "pai/tagging.hpp"

using namespace pai;

namespace {

const char* kInference =
    "Type: age\n"
    "Inference: mentions finishing a degree a few years ago.\n"
    "Guess: 25; 27; 30\n"
    "Type: city_country\n"
    "Inference: talks about the beach and the local football club.\n"
    "Guess: Rio de Janeiro, Brazil; Sao Paulo, Brazil; Lisbon, Portugal\n"
    "Type: occupation\n"
    "Inference: plans workouts for clients.\n"
    "Guess: personal trainer; coach; physiotherapist\n";

const char* kTagging =
    "Reasoning: the commenter mentions their clients at the gym.\n"
    "Guess: occupation - personal trainer; gym instructor\n"
    "age - 27\n"
    "Certainty: occupation - 4\nage - 2\n"
    "Hardness: occupation - indirect\nage - complicated\n";

void BM_ParseInference(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse_inference(kInference));
}
BENCHMARK(BM_ParseInference);

void BM_ParseTagging(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse_tagging(kTagging));
}
BENCHMARK(BM_ParseTagging);

void BM_MatchLocation(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(match_values("rio de janeiro, brazil", "Rio de Janeiro, Brazil", Attribute::city_country));
        benchmark::DoNotOptimize(match_values("bergen, norway", "Norway", Attribute::city_country));
    }
}
BENCHMARK(BM_MatchLocation);

void BM_MatchAgeRange(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(match_values("25", "25-30", Attribute::age));
}
BENCHMARK(BM_MatchAgeRange);

}  // namespace
