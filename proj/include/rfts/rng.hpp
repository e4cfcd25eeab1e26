#pragma once

#include <cmath>
#include <cstdint>

namespace rfts {

/// SplitMix64 finalizer: bijective avalanche mix of one 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based Gaussian stream for one simulated path.
///
/// Every draw is keyed by (seed, path index, cell counter) and no state
/// advances between draws, so any subset of cells can be generated in any
/// order by any worker with identical results.  One standard normal per
/// cell, via Box-Muller from the top 53 bits of two mixed words.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t path_index)
        : path_key_(splitmix64(splitmix64(seed ^ kSeedSalt) + path_index)),
          path_index_(path_index) {}

    std::uint64_t path_index() const { return path_index_; }

    double gauss(std::uint64_t cell) const {
        const std::uint64_t k = splitmix64(path_key_ + cell * 0xd1342543de82ef95ULL);
        const std::uint64_t a = splitmix64(k ^ 0x63652d4fbdcbf7adULL);
        const std::uint64_t b = splitmix64(k ^ 0x3c6ef372fe94f82bULL);
        const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0, 1)
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    static constexpr std::uint64_t kSeedSalt = 0x8f1c73d2a96b5e04ULL;
    static constexpr double kTwoPi = 6.28318530717958647692;

    std::uint64_t path_key_;
    std::uint64_t path_index_;
};

}  // namespace rfts
