#ifndef HMT_HASH_HPP
#define HMT_HASH_HPP

#include <cstdint>

namespace hmt {

/// splitmix64 finalizer; the mixing step behind every seeded coloring.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) { return mix64(seed ^ mix64(v)); }

}  // namespace hmt

#endif
