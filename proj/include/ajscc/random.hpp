#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace ajscc {

using Engine = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Derives a child seed from a parent seed and a path of integer keys.
/// The mapping is a pure function, so substreams do not depend on the
/// order in which workers reach them.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = detail::splitmix64(seed);
    for (auto k : path) s = detail::splitmix64(s ^ detail::splitmix64(k + 0x632be59bd9b4e019ULL));
    return s;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                                    std::initializer_list<std::uint64_t> path = {}) noexcept {
    return derive_seed(detail::splitmix64(seed) ^ detail::fnv1a(tag), path);
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Boost distributions are used instead of <random> ones because their output
// is specified by the implementation we ship, not by the standard library vendor.
inline double standard_normal(Engine& eng) {
    return boost::random::normal_distribution<double>(0.0, 1.0)(eng);
}

inline double uniform(Engine& eng, double lo, double hi) {
    return boost::random::uniform_real_distribution<double>(lo, hi)(eng);
}

/// Uniform on the open interval (0, 1).
inline double uniform_open01(Engine& eng) {
    for (;;) {
        double u = boost::random::uniform_01<double>()(eng);
        if (u > 0.0) return u;
    }
}

inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    return boost::random::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng);
}

}  // namespace ajscc
