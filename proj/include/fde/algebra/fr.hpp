#pragma once

#include <blst.h>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "fde/common/bytes.hpp"
#include "fde/common/random.hpp"

namespace fde {

/// Element of the BLS12-381 scalar field (prime order r of G1/G2/GT).
/// Stored in Montgomery form; serialization is canonical 32-byte little-endian.
class Fr {
  public:
    static constexpr size_t kBytes = 32;
    static constexpr unsigned kTwoAdicity = 32;

    Fr() = default;

    static Fr zero() { return Fr(); }
    static Fr one() { return from_u64(1); }
    static Fr from_u64(uint64_t v) {
        Fr out;
        const uint64_t limbs[4] = {v, 0, 0, 0};
        blst_fr_from_uint64(&out.v_, limbs);
        return out;
    }
    static Fr from_i64(int64_t v) { return v < 0 ? -from_u64(static_cast<uint64_t>(-(v + 1)) + 1) : from_u64(static_cast<uint64_t>(v)); }
    /// Canonical decoding: nullopt when the encoded integer is >= r.
    static std::optional<Fr> from_bytes(std::span<const uint8_t, kBytes> le);
    /// Like from_bytes but throws FormatError on out-of-range input.
    static Fr from_bytes_checked(ByteView le);
    /// Reduces an arbitrary-length little-endian integer mod r.
    static Fr from_wide_bytes(ByteView le);
    static Fr random(Rng& rng);
    static Fr from_scalar(const blst_scalar& s) {
        Fr out;
        blst_fr_from_scalar(&out.v_, &s);
        return out;
    }

    std::array<uint8_t, kBytes> to_bytes() const;
    blst_scalar to_scalar() const {
        blst_scalar s;
        blst_scalar_from_fr(&s, &v_);
        return s;
    }
    /// Canonical integer limbs (little-endian 64-bit words).
    std::array<uint64_t, 4> to_limbs() const {
        std::array<uint64_t, 4> out{};
        blst_uint64_from_fr(out.data(), &v_);
        return out;
    }
    std::string to_hex() const;

    Fr operator+(const Fr& o) const {
        Fr r;
        blst_fr_add(&r.v_, &v_, &o.v_);
        return r;
    }
    Fr operator-(const Fr& o) const {
        Fr r;
        blst_fr_sub(&r.v_, &v_, &o.v_);
        return r;
    }
    Fr operator*(const Fr& o) const {
        Fr r;
        blst_fr_mul(&r.v_, &v_, &o.v_);
        return r;
    }
    Fr operator-() const {
        Fr r;
        blst_fr_cneg(&r.v_, &v_, true);
        return r;
    }
    Fr& operator+=(const Fr& o) {
        blst_fr_add(&v_, &v_, &o.v_);
        return *this;
    }
    Fr& operator-=(const Fr& o) {
        blst_fr_sub(&v_, &v_, &o.v_);
        return *this;
    }
    Fr& operator*=(const Fr& o) {
        blst_fr_mul(&v_, &v_, &o.v_);
        return *this;
    }
    /// Throws DomainError on zero.
    Fr inverse() const;
    Fr operator/(const Fr& o) const { return *this * o.inverse(); }
    Fr square() const {
        Fr r;
        blst_fr_sqr(&r.v_, &v_);
        return r;
    }
    Fr pow(uint64_t e) const;
    Fr pow(const std::array<uint64_t, 4>& e) const;

    bool is_zero() const { return (v_.l[0] | v_.l[1] | v_.l[2] | v_.l[3]) == 0; }
    bool operator==(const Fr& o) const {
        return v_.l[0] == o.v_.l[0] && v_.l[1] == o.v_.l[1] && v_.l[2] == o.v_.l[2] && v_.l[3] == o.v_.l[3];
    }

    /// Primitive 2^log_n-th root of unity.
    static Fr root_of_unity(unsigned log_n);

    const blst_fr& raw() const { return v_; }
    blst_fr& raw() { return v_; }

  private:
    blst_fr v_{};
};

}  // namespace fde
