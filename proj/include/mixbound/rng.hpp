#pragma once

#include <cstdint>

#include "mixbound/special.hpp"

namespace mixbound {

// splitmix64 finalizer; see https://prng.di.unimi.it
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based splittable stream built on the splitmix64 mixing function.
// Output i is mix64(seed + (i+1)*golden), so any position is addressable and
// split() derives statistically independent child streams from a key.
class RngStream {
  public:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

    explicit RngStream(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(seed_ + counter_ * kGolden);
    }

    // Uniform on the open interval (0,1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via the inverse CDF.
    double next_normal() { return inv_normal_cdf(next_uniform()); }

    RngStream split(std::uint64_t key) const {
        return RngStream(mix64(seed_ ^ mix64(key + kGolden)));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace mixbound
