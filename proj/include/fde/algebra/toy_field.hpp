#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "fde/common/bytes.hpp"
#include "fde/common/random.hpp"

namespace fde {

/// Small prime field used only for statistical tests of the coding layer,
/// where events of probability 1/p must be observable. P = 65537 by default.
template <uint32_t P, uint32_t Generator, unsigned TwoAdicity>
class ToyField {
  public:
    static constexpr size_t kBytes = 32;
    static constexpr unsigned kTwoAdicity = TwoAdicity;
    static constexpr uint32_t kModulus = P;

    constexpr ToyField() = default;

    static constexpr ToyField zero() { return ToyField(); }
    static constexpr ToyField one() { return from_u64(1); }
    static constexpr ToyField from_u64(uint64_t v) { return ToyField(static_cast<uint32_t>(v % P)); }
    static constexpr ToyField from_i64(int64_t v) {
        int64_t r = v % static_cast<int64_t>(P);
        if (r < 0) r += P;
        return ToyField(static_cast<uint32_t>(r));
    }
    static ToyField from_wide_bytes(ByteView le) {
        uint64_t acc = 0;
        for (size_t i = le.size(); i-- > 0;) acc = ((acc << 8) | le[i]) % P;
        return ToyField(static_cast<uint32_t>(acc));
    }
    static ToyField from_bytes_checked(ByteView le) {
        if (le.size() != kBytes) throw FormatError("scalar must be 32 bytes");
        uint64_t acc = 0;
        for (size_t i = 0; i < kBytes; ++i) {
            if (i >= 4 && le[i]) throw FormatError("scalar out of range");
            if (i < 4) acc |= uint64_t{le[i]} << (8 * i);
        }
        if (acc >= P) throw FormatError("scalar out of range");
        return ToyField(static_cast<uint32_t>(acc));
    }
    static ToyField random(Rng& rng) { return ToyField(static_cast<uint32_t>(rng.uniform(P))); }

    std::array<uint8_t, kBytes> to_bytes() const {
        std::array<uint8_t, kBytes> out{};
        for (int i = 0; i < 4; ++i) out[i] = static_cast<uint8_t>(v_ >> (8 * i));
        return out;
    }
    uint32_t value() const { return v_; }

    constexpr ToyField operator+(ToyField o) const { return ToyField(static_cast<uint32_t>((uint64_t{v_} + o.v_) % P)); }
    constexpr ToyField operator-(ToyField o) const { return ToyField(static_cast<uint32_t>((uint64_t{v_} + P - o.v_) % P)); }
    constexpr ToyField operator*(ToyField o) const { return ToyField(static_cast<uint32_t>((uint64_t{v_} * o.v_) % P)); }
    constexpr ToyField operator-() const { return ToyField(v_ == 0 ? 0 : P - v_); }
    ToyField& operator+=(ToyField o) { return *this = *this + o; }
    ToyField& operator-=(ToyField o) { return *this = *this - o; }
    ToyField& operator*=(ToyField o) { return *this = *this * o; }

    ToyField pow(uint64_t e) const {
        ToyField base = *this, acc = one();
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    ToyField inverse() const {
        if (v_ == 0) throw DomainError("inverse of zero");
        return pow(P - 2);
    }
    ToyField operator/(ToyField o) const { return *this * o.inverse(); }

    bool is_zero() const { return v_ == 0; }
    constexpr bool operator==(const ToyField&) const = default;

    static ToyField root_of_unity(unsigned log_n) {
        if (log_n > kTwoAdicity) throw DomainError("root of unity order exceeds two-adicity");
        return from_u64(Generator).pow((uint64_t{P} - 1) >> log_n);
    }

  private:
    constexpr explicit ToyField(uint32_t v) : v_(v) {}
    uint32_t v_ = 0;
};

using Toy65537 = ToyField<65537, 3, 16>;

}  // namespace fde
