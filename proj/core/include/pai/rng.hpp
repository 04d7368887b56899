#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace pai {

/// Seeded generator with platform-independent draws. std::mt19937_64's
/// output sequence is fixed by the standard, the std distributions are not,
/// so every derived draw is computed here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[uniform_below(i)]);
        }
    }

    /// k distinct indices from [0, n) in increasing order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// FNV-1a over bytes, stable across platforms.
std::uint64_t stable_hash(std::string_view s);

}  // namespace pai
