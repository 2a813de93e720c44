#pragma once

#include <cstdint>

namespace halfline {

// Counter-based splittable stream in the SplitMix64 family (Steele/Lea/Flood;
// output mix by Vigna). The state is a Weyl counter, so skipping ahead and
// carving independent streams out of one seed are O(1). Stream i of seed s is
// a pure function of (s, i); replaying a stream is bit-reproducible.
class RngStream {
public:
    RngStream() : state_(mix(0x853c49e6748fea9bULL)) {}

    RngStream(std::uint64_t seed, std::uint64_t stream) {
        // Decorrelate the stream index before folding it into the seed.
        state_ = mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        state_ = mix(state_ ^ (seed >> 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; safe as a log() argument.
    double next_double_open() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n) by rejection on the top of the range.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    void skip(std::uint64_t draws) { state_ += 0x9e3779b97f4a7c15ULL * draws; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Serves fixed-width bit chunks from buffered 64-bit draws. Used by samplers
// whose atoms need only a couple of random bits per step.
class BitSource {
public:
    explicit BitSource(RngStream& rng) : rng_(&rng) {}

    std::uint32_t take(unsigned bits) {
        if (avail_ < bits) {
            buffer_ = rng_->next_u64();
            avail_ = 64;
        }
        std::uint32_t out = static_cast<std::uint32_t>(buffer_ & ((1ULL << bits) - 1));
        buffer_ >>= bits;
        avail_ -= bits;
        return out;
    }

private:
    RngStream* rng_;
    std::uint64_t buffer_ = 0;
    unsigned avail_ = 0;
};

}  // namespace halfline
