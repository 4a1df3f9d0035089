#pragma once

// Seed derivation and the few portable sampling helpers the library needs.
//
// Every trial owns a single 64-bit seed. Independent streams inside a trial
// are obtained with derive_seed(seed, stream), a SplitMix64 finaliser applied
// to the seed offset by the stream counter. The stream ids used by the
// library are listed in `streams` below; trials never share generators.
//
// std::mt19937_64 is bit-exact across standard libraries, but the standard
// distributions are not, so integer and real draws go through the helpers
// here to keep certificates byte-identical between toolchains.

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>

namespace hfree {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace streams {
inline constexpr std::uint64_t sample = 1;
inline constexpr std::uint64_t packing = 100;   // + member index
inline constexpr std::uint64_t alpha_probe = 200;
inline constexpr std::uint64_t layers = 300;
inline constexpr std::uint64_t lll = 400;
inline constexpr std::uint64_t turan = 500;
} // namespace streams

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    return Rng(derive_seed(seed, stream));
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound)
{
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[uniform_below(rng, i)]);
}

} // namespace hfree
