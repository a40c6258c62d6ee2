#pragma once

#include <cstdint>

namespace thickknot {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless generator: every value is a pure function of (seed, step, slot), so a chain can be
/// replayed from any step and chains with different seeds never share a stream.
class CounterRng {
  public:
    explicit constexpr CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

    constexpr std::uint64_t bits(std::uint64_t step, std::uint64_t slot) const {
        return mix64(mix64(key_ ^ mix64(step)) + slot);
    }

    /// Uniform on the open interval (0, 1).
    constexpr double uniform(std::uint64_t step, std::uint64_t slot) const {
        return (static_cast<double>(bits(step, slot) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by multiply-shift on 64 random bits.
    std::uint64_t below(std::uint64_t step, std::uint64_t slot, std::uint64_t bound) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits(step, slot)) * bound) >> 64);
    }

  private:
    std::uint64_t key_;
};

/// Seed for the c-th of several parallel chains derived from one master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t chain) {
    return mix64(master + mix64(chain + 0x632be59bd9b4e019ULL));
}

}  // namespace thickknot
