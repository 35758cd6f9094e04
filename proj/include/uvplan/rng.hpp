#pragma once

#include <cstdint>
#include <limits>

namespace uvplan {

// SplitMix64 (Steele, Lea, Flood 2014). Used both as a sequential generator
// and, through substream(), as a counter-based one: a substream's state is a
// pure function of (seed, key), so draws keyed by an edge do not depend on
// the order in which edges are visited.
class SplitMix64 {
   public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    result_type operator()() {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform double in [0, 1) built from the top 53 bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound must be positive. Lemire's
    /// multiply-shift without the rejection step (bias < 2^-32 for our sizes).
    std::uint64_t below(std::uint64_t bound) {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>((*this)()) * bound) >> 64);
    }

    /// Independent stream derived from (seed, key).
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t key) {
        return SplitMix64(mix(seed ^ mix(key + kGolden)));
    }

    std::uint64_t state() const { return state_; }

   private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

}  // namespace uvplan
