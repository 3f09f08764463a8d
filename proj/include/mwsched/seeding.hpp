#pragma once

#include <cstdint>
#include <string_view>

namespace mwsched {

// Fixed, platform-independent mixing so derived seeds are stable across builds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
    return splitmix64(seed ^ splitmix64(value));
}

// Per-run seed = hash(master, dataset, clusterer, repetition).
inline std::uint64_t run_seed(std::uint64_t master, std::string_view dataset, std::string_view clusterer,
                              std::uint64_t repetition) {
    std::uint64_t h = splitmix64(master);
    h = mix_seed(h, fnv1a(dataset));
    h = mix_seed(h, fnv1a(clusterer));
    h = mix_seed(h, repetition);
    return h;
}

} // namespace mwsched
