#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace rifs {

// SplitMix64 finalizer. Statistically strong 64-bit mixer; the basis of the
// counter-mode generator below.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-mode random stream: variate #n of stream #s under a given seed is a
// pure function of (seed, s, n). Streams never overlap, any variate can be
// generated out of order, and partitioning work across threads cannot change
// the result.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(mix64(seed) ^ (stream * 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(key_ ^ (counter * 0xd1342543de82ef95ULL));
    }

    // uniform on [0,1), 53-bit resolution
    double u01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // uniform on [lo, hi)
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * u01(counter);
    }

private:
    std::uint64_t key_;
};

// Stateful adapter over RandomStream for code that consumes variates in order.
class SequentialRandom {
public:
    SequentialRandom(std::uint64_t seed, std::uint64_t stream)
        : stream_(seed, stream) {}

    double u01() { return stream_.u01(counter_++); }
    double uniform(double lo, double hi) { return stream_.uniform(counter_++, lo, hi); }

private:
    RandomStream stream_;
    std::uint64_t counter_ = 0;
};

// Inverse-CDF draw from a discrete distribution. probs must sum to 1.
inline std::size_t pick_index(std::span<const double> probs, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

} // namespace rifs
