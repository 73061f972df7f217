#include "fde/algebra/transcript.hpp"

#include <algorithm>
#include <unordered_set>

namespace fde {

namespace {
constexpr uint8_t kAbsorb = 0x01;
constexpr uint8_t kChallenge = 0x02;
}  // namespace

Transcript::Transcript(std::string_view protocol) {
    state_.update(as_bytes("fde/transcript/v1"));
    state_.update_u64(protocol.size());
    state_.update(as_bytes(protocol));
}

void Transcript::frame(uint8_t kind, std::string_view label) {
    const uint8_t k[1] = {kind};
    state_.update(k);
    state_.update_u64(label.size());
    state_.update(as_bytes(label));
}

void Transcript::absorb(std::string_view label, ByteView data) {
    frame(kAbsorb, label);
    state_.update_u64(data.size());
    state_.update(data);
}

void Transcript::absorb_u64(std::string_view label, uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    absorb(label, b);
}

Digest Transcript::challenge_bytes(std::string_view label) {
    frame(kChallenge, label);
    Sha256 fork = state_;
    const Digest out = fork.finish();
    state_.update_u64(out.size());
    state_.update(out);
    return out;
}

std::array<uint8_t, 64> Transcript::expand(const Digest& seed, uint64_t i) {
    std::array<uint8_t, 64> out{};
    for (uint8_t half = 0; half < 2; ++half) {
        Sha256 h;
        h.update(seed).update_u64(i);
        const uint8_t tag[1] = {half};
        h.update(tag);
        const Digest d = h.finish();
        std::copy(d.begin(), d.end(), out.begin() + 32 * half);
    }
    return out;
}

std::vector<uint64_t> derive_subset(ByteView seed, uint64_t m, uint64_t k) {
    if (k < 1 || k > m) throw DomainError("derive_subset requires 1 <= k <= m");
    Sha256 base;
    base.update(as_bytes("fde/subset")).update_u64(seed.size()).update(seed).update_u64(m).update_u64(k);
    const Digest key = base.finish();

    // Largest multiple of m representable in 64 bits; draws above it are rejected.
    const uint64_t limit = m == 1 ? UINT64_MAX : UINT64_MAX - (UINT64_MAX % m + 1) % m;
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> out;
    out.reserve(k);
    uint64_t counter = 0;
    while (out.size() < k) {
        Sha256 h;
        h.update(key).update_u64(counter++);
        const Digest d = h.finish();
        for (size_t w = 0; w < 4 && out.size() < k; ++w) {
            uint64_t x = 0;
            for (int b = 0; b < 8; ++b) x |= static_cast<uint64_t>(d[8 * w + b]) << (8 * b);
            if (x > limit) continue;
            const uint64_t idx = x % m;
            if (seen.insert(idx).second) out.push_back(idx);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace fde
