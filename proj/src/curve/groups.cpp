#include "fde/curve/groups.hpp"

#include <memory>

namespace fde {

std::atomic<uint64_t>& CurveOpCounter::value() {
    static std::atomic<uint64_t> counter{0};
    return counter;
}

namespace {

constexpr size_t kWindows = 32;
constexpr size_t kDigits = 255;  // nonzero 8-bit digits

}  // namespace

G1 G1::generator() {
    G1 g;
    g.p_ = *blst_p1_generator();
    return g;
}

G1 G1::hash_to_curve(ByteView msg, std::string_view dst) {
    CurveOpCounter::bump();
    G1 g;
    blst_hash_to_g1(&g.p_, msg.data(), msg.size(), reinterpret_cast<const uint8_t*>(dst.data()), dst.size(),
                    nullptr, 0);
    return g;
}

G1 G1::operator*(const Fr& s) const {
    CurveOpCounter::bump();
    const blst_scalar k = s.to_scalar();
    G1 r;
    blst_p1_mult(&r.p_, &p_, k.b, 255);
    return r;
}

G1 G1::mul_small(uint64_t k) const {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(k >> (8 * i));
    G1 r;
    blst_p1_mult(&r.p_, &p_, b, 64);
    return r;
}

std::optional<G1> G1::decompress(ByteView bytes, bool check_subgroup) {
    if (bytes.size() != kCompressedBytes) return std::nullopt;
    blst_p1_affine a;
    if (blst_p1_uncompress(&a, bytes.data()) != BLST_SUCCESS) return std::nullopt;
    if (check_subgroup && !blst_p1_affine_in_g1(&a)) return std::nullopt;
    return from_affine(a);
}

G1 G1::decompress_checked(ByteView bytes) {
    auto g = decompress(bytes, true);
    if (!g) throw FormatError("invalid G1 encoding");
    return *g;
}

G2 G2::generator() {
    G2 g;
    g.p_ = *blst_p2_generator();
    return g;
}

G2 G2::operator*(const Fr& s) const {
    CurveOpCounter::bump();
    const blst_scalar k = s.to_scalar();
    G2 r;
    blst_p2_mult(&r.p_, &p_, k.b, 255);
    return r;
}

std::optional<G2> G2::decompress(ByteView bytes, bool check_subgroup) {
    if (bytes.size() != kCompressedBytes) return std::nullopt;
    blst_p2_affine a;
    if (blst_p2_uncompress(&a, bytes.data()) != BLST_SUCCESS) return std::nullopt;
    if (check_subgroup && !blst_p2_affine_in_g2(&a)) return std::nullopt;
    return from_affine(a);
}

G2 G2::decompress_checked(ByteView bytes) {
    auto g = decompress(bytes, true);
    if (!g) throw FormatError("invalid G2 encoding");
    return *g;
}

Gt pairing(const G1& a, const G2& b) {
    CurveOpCounter::bump();
    const blst_p1_affine pa = a.to_affine();
    const blst_p2_affine qb = b.to_affine();
    Gt out;
    blst_fp12 ml;
    blst_miller_loop(&ml, &qb, &pa);
    blst_final_exp(&out.raw(), &ml);
    return out;
}

bool pairing_product_is_one(std::span<const std::pair<G1, G2>> terms) {
    CurveOpCounter::bump(terms.size());
    blst_fp12 acc = *blst_fp12_one();
    for (const auto& [p, q] : terms) {
        if (p.is_identity() || q.is_identity()) continue;
        const blst_p1_affine pa = p.to_affine();
        const blst_p2_affine qa = q.to_affine();
        blst_fp12 ml;
        blst_miller_loop(&ml, &qa, &pa);
        blst_fp12_mul(&acc, &acc, &ml);
    }
    blst_fp12 out;
    blst_final_exp(&out, &acc);
    return blst_fp12_is_one(&out);
}

namespace {

std::vector<blst_scalar> to_scalars(std::span<const Fr> s) {
    std::vector<blst_scalar> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = s[i].to_scalar();
    return out;
}

}  // namespace

G1 msm(std::span<const blst_p1_affine> bases, std::span<const Fr> scalars) {
    if (bases.size() != scalars.size()) throw DomainError("msm: length mismatch");
    G1 out;
    if (bases.empty()) return out;
    CurveOpCounter::bump();
    auto ks = to_scalars(scalars);
    const blst_p1_affine* pts[2] = {bases.data(), nullptr};
    const uint8_t* sc[2] = {ks[0].b, nullptr};
    std::unique_ptr<limb_t[]> scratch(
        new limb_t[blst_p1s_mult_pippenger_scratch_sizeof(bases.size()) / sizeof(limb_t) + 1]);
    blst_p1s_mult_pippenger(&out.raw(), pts, bases.size(), sc, 255, scratch.get());
    return out;
}

G1 msm(std::span<const G1> bases, std::span<const Fr> scalars) {
    auto aff = batch_affine(bases);
    return msm(std::span<const blst_p1_affine>(aff), scalars);
}

G2 msm(std::span<const blst_p2_affine> bases, std::span<const Fr> scalars) {
    if (bases.size() != scalars.size()) throw DomainError("msm: length mismatch");
    if (bases.empty()) return G2();
    CurveOpCounter::bump();
    auto ks = to_scalars(scalars);
    const blst_p2_affine* pts[2] = {bases.data(), nullptr};
    const uint8_t* sc[2] = {ks[0].b, nullptr};
    std::unique_ptr<limb_t[]> scratch(
        new limb_t[blst_p2s_mult_pippenger_scratch_sizeof(bases.size()) / sizeof(limb_t) + 1]);
    G2 out;
    blst_p2s_mult_pippenger(&out.raw(), pts, bases.size(), sc, 255, scratch.get());
    return out;
}

std::vector<blst_p1_affine> batch_affine(std::span<const G1> points) {
    std::vector<blst_p1_affine> out(points.size());
    if (points.empty()) return out;
    const blst_p1* pts[2] = {&points[0].raw(), nullptr};
    static_assert(sizeof(G1) == sizeof(blst_p1));
    blst_p1s_to_affine(out.data(), pts, points.size());
    return out;
}

std::vector<blst_p2_affine> batch_affine(std::span<const G2> points) {
    std::vector<blst_p2_affine> out(points.size());
    if (points.empty()) return out;
    const blst_p2* pts[2] = {&points[0].raw(), nullptr};
    static_assert(sizeof(G2) == sizeof(blst_p2));
    blst_p2s_to_affine(out.data(), pts, points.size());
    return out;
}

G1FixedBase::G1FixedBase(const G1& base) {
    std::vector<G1> proj(kWindows * kDigits);
    G1 row = base;
    for (size_t w = 0; w < kWindows; ++w) {
        G1 acc = row;
        for (size_t d = 0; d < kDigits; ++d) {
            proj[w * kDigits + d] = acc;
            acc += row;
        }
        row = acc;  // 256 * row
    }
    table_ = batch_affine(proj);
}

G1 G1FixedBase::mul(const Fr& s) const {
    const auto bytes = s.to_bytes();
    blst_p1 acc{};
    for (size_t w = 0; w < kWindows; ++w) {
        const uint8_t d = bytes[w];
        if (d) blst_p1_add_or_double_affine(&acc, &acc, &table_[w * kDigits + d - 1]);
    }
    G1 out;
    out.raw() = acc;
    return out;
}

G2FixedBase::G2FixedBase(const G2& base) {
    std::vector<G2> proj(kWindows * kDigits);
    G2 row = base;
    for (size_t w = 0; w < kWindows; ++w) {
        G2 acc = row;
        for (size_t d = 0; d < kDigits; ++d) {
            proj[w * kDigits + d] = acc;
            acc += row;
        }
        row = acc;
    }
    table_ = batch_affine(proj);
}

G2 G2FixedBase::mul(const Fr& s) const {
    const auto bytes = s.to_bytes();
    blst_p2 acc{};
    for (size_t w = 0; w < kWindows; ++w) {
        const uint8_t d = bytes[w];
        if (d) blst_p2_add_or_double_affine(&acc, &acc, &table_[w * kDigits + d - 1]);
    }
    G2 out;
    out.raw() = acc;
    return out;
}

}  // namespace fde
