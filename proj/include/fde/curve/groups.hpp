#pragma once

#include <blst.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fde/algebra/fr.hpp"
#include "fde/common/bytes.hpp"

namespace fde {

/// Counts public-key operations (variable-base scalar multiplications,
/// hash-to-curve, MSM calls, pairings) for cost assertions in tests.
struct CurveOpCounter {
    static std::atomic<uint64_t>& value();
    static uint64_t get() { return value().load(std::memory_order_relaxed); }
    static void bump(uint64_t n = 1) { value().fetch_add(n, std::memory_order_relaxed); }
};

/// Point of the BLS12-381 prime-order subgroup of E(Fp), Jacobian form.
class G1 {
  public:
    static constexpr size_t kCompressedBytes = 48;
    using Compressed = std::array<uint8_t, kCompressedBytes>;

    G1() = default;  // identity
    static G1 identity() { return G1(); }
    static G1 generator();
    static G1 from_affine(const blst_p1_affine& a) {
        G1 g;
        blst_p1_from_affine(&g.p_, &a);
        return g;
    }
    /// Hash-to-curve (SSWU, random-oracle variant).
    static G1 hash_to_curve(ByteView msg, std::string_view dst);

    blst_p1_affine to_affine() const {
        blst_p1_affine a;
        blst_p1_to_affine(&a, &p_);
        return a;
    }

    G1 operator+(const G1& o) const {
        G1 r;
        blst_p1_add_or_double(&r.p_, &p_, &o.p_);
        return r;
    }
    G1& operator+=(const G1& o) {
        blst_p1_add_or_double(&p_, &p_, &o.p_);
        return *this;
    }
    G1 operator-() const {
        G1 r = *this;
        blst_p1_cneg(&r.p_, true);
        return r;
    }
    G1 operator-(const G1& o) const { return *this + (-o); }
    G1& operator-=(const G1& o) { return *this += -o; }
    G1 operator*(const Fr& s) const;
    /// Scalar multiplication by a short non-negative integer.
    G1 mul_small(uint64_t k) const;

    bool is_identity() const { return blst_p1_is_inf(&p_); }
    bool operator==(const G1& o) const { return blst_p1_is_equal(&p_, &o.p_); }
    bool in_subgroup() const { return blst_p1_in_g1(&p_); }

    Compressed compress() const {
        Compressed out;
        blst_p1_compress(out.data(), &p_);
        return out;
    }
    /// nullopt if the encoding is malformed, off-curve, or (when requested)
    /// outside the prime-order subgroup.
    static std::optional<G1> decompress(ByteView bytes, bool check_subgroup = true);
    static G1 decompress_checked(ByteView bytes);

    const blst_p1& raw() const { return p_; }
    blst_p1& raw() { return p_; }

  private:
    blst_p1 p_{};
};

/// Point of the BLS12-381 prime-order subgroup of E'(Fp2).
class G2 {
  public:
    static constexpr size_t kCompressedBytes = 96;
    using Compressed = std::array<uint8_t, kCompressedBytes>;

    G2() = default;
    static G2 identity() { return G2(); }
    static G2 generator();
    static G2 from_affine(const blst_p2_affine& a) {
        G2 g;
        blst_p2_from_affine(&g.p_, &a);
        return g;
    }

    blst_p2_affine to_affine() const {
        blst_p2_affine a;
        blst_p2_to_affine(&a, &p_);
        return a;
    }

    G2 operator+(const G2& o) const {
        G2 r;
        blst_p2_add_or_double(&r.p_, &p_, &o.p_);
        return r;
    }
    G2& operator+=(const G2& o) {
        blst_p2_add_or_double(&p_, &p_, &o.p_);
        return *this;
    }
    G2 operator-() const {
        G2 r = *this;
        blst_p2_cneg(&r.p_, true);
        return r;
    }
    G2 operator-(const G2& o) const { return *this + (-o); }
    G2 operator*(const Fr& s) const;

    bool is_identity() const { return blst_p2_is_inf(&p_); }
    bool operator==(const G2& o) const { return blst_p2_is_equal(&p_, &o.p_); }
    bool in_subgroup() const { return blst_p2_in_g2(&p_); }

    Compressed compress() const {
        Compressed out;
        blst_p2_compress(out.data(), &p_);
        return out;
    }
    static std::optional<G2> decompress(ByteView bytes, bool check_subgroup = true);
    static G2 decompress_checked(ByteView bytes);

    const blst_p2& raw() const { return p_; }
    blst_p2& raw() { return p_; }

  private:
    blst_p2 p_{};
};

/// Element of the order-r subgroup of Fp12*.
class Gt {
  public:
    static Gt one() {
        Gt g;
        g.v_ = *blst_fp12_one();
        return g;
    }
    Gt operator*(const Gt& o) const {
        Gt r;
        blst_fp12_mul(&r.v_, &v_, &o.v_);
        return r;
    }
    bool operator==(const Gt& o) const { return blst_fp12_is_equal(&v_, &o.v_); }
    bool is_one() const { return blst_fp12_is_one(&v_); }
    blst_fp12& raw() { return v_; }

  private:
    blst_fp12 v_{};
};

Gt pairing(const G1& a, const G2& b);

/// True iff prod_k e(P_k, Q_k) = 1; one shared final exponentiation.
bool pairing_product_is_one(std::span<const std::pair<G1, G2>> terms);

/// sum_i scalars[i] * bases[i]
G1 msm(std::span<const blst_p1_affine> bases, std::span<const Fr> scalars);
G1 msm(std::span<const G1> bases, std::span<const Fr> scalars);
G2 msm(std::span<const blst_p2_affine> bases, std::span<const Fr> scalars);

std::vector<blst_p1_affine> batch_affine(std::span<const G1> points);
std::vector<blst_p2_affine> batch_affine(std::span<const G2> points);

/// Comb table for repeated multiplication of one fixed base: 32 windows of
/// 8 bits, so a multiplication is at most 32 mixed additions.
class G1FixedBase {
  public:
    explicit G1FixedBase(const G1& base);
    G1 mul(const Fr& s) const;

  private:
    std::vector<blst_p1_affine> table_;  // [window][digit-1]
};

class G2FixedBase {
  public:
    explicit G2FixedBase(const G2& base);
    G2 mul(const Fr& s) const;

  private:
    std::vector<blst_p2_affine> table_;
};

}  // namespace fde
