#pragma once

#include <cstdint>
#include <string_view>

namespace netfit {

constexpr std::uint64_t hash_mix(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

/// Folds key material into a stream seed. Every randomized task owns a
/// generator keyed by its logical coordinates (run seed, model tag, grid
/// point, replicate, ...), so results never depend on evaluation order.
template <class... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
    ((seed = hash_mix(seed ^ hash_mix(static_cast<std::uint64_t>(keys) +
                                      0x9e3779b97f4a7c15ULL))),
     ...);
    return seed;
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Counter-based pseudo-random stream (splitmix64). State advances by a
/// fixed increment and the output is a mix of the counter, so streams with
/// different seeds are independent for practical purposes. Not suitable
/// for cryptography.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased uniform draw from [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) noexcept {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    int index(std::size_t size) noexcept {
        return static_cast<int>(below(static_cast<std::uint64_t>(size)));
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t state_;
};

}  // namespace netfit
