#pragma once

#include <cstdint>
#include <initializer_list>

namespace chemo {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// What a derived stream is used for. Values are part of the reproducibility
/// contract: changing them changes every run.
enum class SeedPurpose : std::uint64_t {
    ask = 1,
    single_episode = 2,
    multi_episode = 3,
    rule_based = 4,
    misc = 5,
};

/// Derives an independent 64-bit seed from a master seed and an ordered list
/// of context labels (purpose, generation, candidate, agent, ...). Each label
/// is folded through SplitMix64, so the result depends on the labels and their
/// order but never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, SeedPurpose purpose,
                                    std::initializer_list<std::uint64_t> labels = {}) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(purpose)));
    std::uint64_t position = 0;
    for (std::uint64_t label : labels) {
        ++position;
        h = splitmix64(h ^ splitmix64(label + (position << 56)));
    }
    return h;
}

} // namespace chemo
