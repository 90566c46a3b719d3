#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace localcodes {

/// SplitMix64 finalizer. Used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a sequence of indices into a seed, one splitmix round per index.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) noexcept {
    return splitmix64(seed ^ splitmix64(a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(mix_seed(seed, a), b);
}

/// Seeded generator with platform-independent derived distributions.
///
/// The standard library's distributions are implementation-defined, so the
/// bounded-integer and real draws are done here on top of mt19937_64, whose
/// raw output is fixed by the standard. Anything seeded through this class
/// produces the same stream on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    bool bernoulli(double p) { return uniform_real() < p; }

    /// `count` distinct values from [0, population), in draw order
    /// (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);

private:
    std::mt19937_64 engine_;
};

}  // namespace localcodes
