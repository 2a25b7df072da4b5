#pragma once

#include <cstdint>
#include <limits>

namespace popcov {

/// SplitMix64 generator. Cheap to seed, so every SNP (or LD block) gets its
/// own substream keyed by (seed, tag, index); simulations are then
/// reproducible regardless of how work is split across threads.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return SplitMix64(SplitMix64::mix(SplitMix64::mix(seed ^ (tag * 0xd1b54a32d192ed03ULL)) + index));
}

}  // namespace popcov
