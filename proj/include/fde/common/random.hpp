#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "fde/common/bytes.hpp"

namespace fde {

/// Randomness source. The default instance draws from the operating system
/// CSPRNG; seeded instances run SHA-256 in counter mode and exist for
/// reproducible tests and simulations.
class Rng {
  public:
    Rng();
    static Rng seeded(uint64_t seed);
    static Rng seeded(std::string_view seed);

    void fill(std::span<uint8_t> out);
    uint64_t next_u64();
    /// Uniform in [0, bound), bound > 0.
    uint64_t uniform(uint64_t bound);
    double unit();
    bool deterministic() const { return deterministic_; }

  private:
    bool deterministic_ = false;
    Digest key_{};
    uint64_t counter_ = 0;
};

}  // namespace fde
