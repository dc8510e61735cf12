#pragma once

#include <cstdint>
#include <algorithm>
#include <numeric>
#include <string_view>
#include <utility>
#include <vector>

namespace shiftkit {

/// SplitMix64 step; used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// FNV-1a, stable across platforms and runs.
inline std::uint64_t stable_hash(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seed for a named sub-task, e.g. derive_seed(seed, "diversity/2015-04/blm").
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
    return splitmix64(seed ^ splitmix64(stable_hash(name)));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// xoshiro256** seeded through SplitMix64. Unlike the standard
/// distributions, the bounded draws below are specified here, so sequences
/// match across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        for (auto &s : state_) {
            seed = splitmix64(seed);
            s = seed;
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            auto r = next();
            if (r >= threshold)
                return r % bound;
        }
    }

    template <class T> void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// `k` distinct indices from [0, n) via a partial Fisher-Yates shuffle.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng &rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k && i < n; ++i)
        std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(std::min(k, n));
    return idx;
}

} // namespace shiftkit
