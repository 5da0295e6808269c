#pragma once

#include <cstdint>

namespace specind {

// Counter-based generator built from SplitMix64. Streams are derived by
// mixing (seed, stream id), so (seed, id) pairs reproduce bit-identically
// regardless of how many draws other streams have made.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ 0x7c159e3779b97f4aULL, stream)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53 random bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in {0,...,n-1} (multiply-shift; bias < n/2^64)
    int next_int(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                                 static_cast<unsigned __int128>(n)) >> 64);
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    // independent-looking child stream; derivation depends only on (state seed, id)
    RngStream substream(std::uint64_t id) const {
        RngStream s(0);
        s.state_ = mix(state_, id);
        return s;
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        return z ^ (z >> 29);
    }

    std::uint64_t state_;
};

} // namespace specind
