#include "fde/common/random.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace fde {

Rng::Rng() = default;

Rng Rng::seeded(uint64_t seed) {
    ByteWriter w;
    w.raw(as_bytes("fde/rng/u64"));
    w.u64(seed);
    Rng r;
    r.deterministic_ = true;
    r.key_ = sha256(w.bytes());
    return r;
}

Rng Rng::seeded(std::string_view seed) {
    ByteWriter w;
    w.raw(as_bytes("fde/rng/str"));
    w.raw(as_bytes(seed));
    Rng r;
    r.deterministic_ = true;
    r.key_ = sha256(w.bytes());
    return r;
}

void Rng::fill(std::span<uint8_t> out) {
    if (!deterministic_) {
        if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
            throw std::runtime_error("system randomness unavailable");
        return;
    }
    uint8_t block[40];
    std::memcpy(block, key_.data(), 32);
    size_t off = 0;
    while (off < out.size()) {
        for (int i = 0; i < 8; ++i) block[32 + i] = static_cast<uint8_t>(counter_ >> (8 * i));
        ++counter_;
        uint8_t d[32];
        SHA256(block, sizeof block, d);
        size_t n = std::min<size_t>(32, out.size() - off);
        std::memcpy(out.data() + off, d, n);
        off += n;
    }
}

uint64_t Rng::next_u64() {
    uint8_t b[8];
    fill(b);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

uint64_t Rng::uniform(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform: zero bound");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

double Rng::unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace fde
