#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace occam_rrm {

namespace detail {

constexpr std::uint64_t splitmix_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/// Counter-based random bit generator.
///
/// Output i of a generator with key k is a pure function of (k, i), so a
/// stream can be forked into independent children by tag (`split`) or
/// addressed directly by index (`at`). Every stochastic component of an
/// episode draws from its own child of the episode seed; adding a new
/// consumer never shifts the draws seen by existing ones.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed = 0) noexcept : key_(detail::splitmix_mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        return detail::splitmix_mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Child stream identified by a tag; independent of how much of the
    /// parent has been consumed.
    [[nodiscard]] constexpr Rng split(std::string_view tag) const noexcept {
        return from_key(detail::splitmix_mix(key_ ^ detail::splitmix_mix(detail::fnv1a(tag))));
    }

    [[nodiscard]] constexpr Rng split(std::uint64_t index) const noexcept {
        return from_key(detail::splitmix_mix(key_ + detail::splitmix_mix(index + 0x3c6ef372fe94f82bULL)));
    }

    /// Stream dedicated to step `t` of a per-step process.
    [[nodiscard]] constexpr Rng at(std::uint64_t t) const noexcept { return split(t); }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }

private:
    static constexpr Rng from_key(std::uint64_t key) noexcept {
        Rng r;
        r.key_ = key;
        return r;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Seed for replicate `index` of a base seed (episode i of an evaluation,
/// seed i of an experiment). Independent of anything else in the run.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return detail::splitmix_mix(detail::splitmix_mix(base) + 0x632be59bd9b4e019ULL * (index + 1));
}

} // namespace occam_rrm
