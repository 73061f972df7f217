#include "fde/algebra/fr.hpp"

#include <vector>

namespace fde {

std::optional<Fr> Fr::from_bytes(std::span<const uint8_t, kBytes> le) {
    blst_scalar s;
    blst_scalar_from_lendian(&s, le.data());
    if (!blst_scalar_fr_check(&s)) return std::nullopt;
    return from_scalar(s);
}

Fr Fr::from_bytes_checked(ByteView le) {
    if (le.size() != kBytes) throw FormatError("scalar must be 32 bytes");
    auto v = from_bytes(std::span<const uint8_t, kBytes>(le.data(), kBytes));
    if (!v) throw FormatError("scalar out of range");
    return *v;
}

Fr Fr::from_wide_bytes(ByteView le) {
    blst_scalar s;
    blst_scalar_from_le_bytes(&s, le.data(), le.size());
    return from_scalar(s);
}

Fr Fr::random(Rng& rng) {
    uint8_t wide[64];
    rng.fill(wide);
    return from_wide_bytes(wide);
}

std::array<uint8_t, Fr::kBytes> Fr::to_bytes() const {
    blst_scalar s = to_scalar();
    std::array<uint8_t, kBytes> out{};
    blst_lendian_from_scalar(out.data(), &s);
    return out;
}

std::string Fr::to_hex() const {
    auto b = to_bytes();
    return fde::to_hex(b);
}

Fr Fr::inverse() const {
    if (is_zero()) throw DomainError("inverse of zero");
    Fr r;
    blst_fr_eucl_inverse(&r.v_, &v_);
    return r;
}

Fr Fr::pow(uint64_t e) const {
    Fr base = *this, acc = one();
    while (e) {
        if (e & 1) acc *= base;
        base = base.square();
        e >>= 1;
    }
    return acc;
}

Fr Fr::pow(const std::array<uint64_t, 4>& e) const {
    Fr acc = one();
    for (int limb = 3; limb >= 0; --limb)
        for (int bit = 63; bit >= 0; --bit) {
            acc = acc.square();
            if ((e[limb] >> bit) & 1) acc *= *this;
        }
    return acc;
}

Fr Fr::root_of_unity(unsigned log_n) {
    if (log_n > kTwoAdicity) throw DomainError("root of unity order exceeds two-adicity");
    // (r - 1) / 2^32 with multiplicative generator 7.
    static const Fr kMaxRoot = Fr::from_u64(7).pow(std::array<uint64_t, 4>{
        0xfffe5bfeffffffffULL, 0x09a1d80553bda402ULL, 0x299d7d483339d808ULL, 0x0000000073eda753ULL});
    Fr w = kMaxRoot;
    for (unsigned i = log_n; i < kTwoAdicity; ++i) w = w.square();
    return w;
}

}  // namespace fde
