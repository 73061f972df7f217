#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fde/algebra/field.hpp"
#include "fde/common/bytes.hpp"

namespace fde {

/// Fiat-Shamir transcript over SHA-256. Every absorption is framed as
/// (kind, label length, label, data length, data) so distinct sequences never
/// collide. Each challenge is fed back into the state.
class Transcript {
  public:
    explicit Transcript(std::string_view protocol);

    void absorb(std::string_view label, ByteView data);
    void absorb_u64(std::string_view label, uint64_t v);
    template <PrimeField F>
    void absorb_scalar(std::string_view label, const F& x) {
        auto b = x.to_bytes();
        absorb(label, b);
    }

    /// 32 challenge bytes bound to everything absorbed so far.
    Digest challenge_bytes(std::string_view label);

    /// count field elements, each reduced from 512 bits of hash output.
    template <PrimeField F>
    std::vector<F> challenge_scalars(std::string_view label, size_t count) {
        std::vector<F> out;
        if (count == 0) return out;
        const Digest seed = challenge_bytes(label);
        out.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            auto wide = expand(seed, i);
            out.push_back(F::from_wide_bytes(wide));
        }
        return out;
    }

    template <PrimeField F>
    F challenge_scalar(std::string_view label) {
        return challenge_scalars<F>(label, 1).front();
    }

    /// 64 bytes of output for stream position i under seed.
    static std::array<uint8_t, 64> expand(const Digest& seed, uint64_t i);

  private:
    void frame(uint8_t kind, std::string_view label);
    Sha256 state_;
};

/// k distinct indices in [0, m), sorted ascending, sampled by rejection from a
/// hash stream keyed by seed. Throws DomainError unless 1 <= k <= m.
std::vector<uint64_t> derive_subset(ByteView seed, uint64_t m, uint64_t k);

}  // namespace fde
