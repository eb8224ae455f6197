#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace predcause {

// SplitMix64 step; used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a path of
// integers (e.g. {stage, sweep_index, run}). All randomness in the project
// flows from a single master seed through this function.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = master ^ 0x6a09e667f3bcc909ull;
    std::uint64_t out = splitmix64(state);
    for (std::uint64_t p : path) {
        state ^= p + 0x9e3779b97f4a7c15ull + (state << 6) + (state >> 2);
        out = splitmix64(state);
    }
    return out;
}

// mt19937_64 with hand-rolled draws on top, so sampled values do not depend
// on libstdc++'s distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % n;
    }

    bool next_bool(double p) { return next_unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace predcause
