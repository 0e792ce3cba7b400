#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sentinel {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to decorrelate nearby integer seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable per-stage seed: FNV-1a of the stage name folded with the master
/// seed. Adding a stage never perturbs the seeds of the others.
constexpr std::uint64_t stage_seed(std::uint64_t master, std::string_view stage) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : stage) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix_seed(h ^ mix_seed(master));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

}  // namespace sentinel
