#include "fde/common/bytes.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <stdexcept>
#include <utility>

namespace fde {

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 15]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw FormatError("invalid hex digit");
    };
    if (hex.size() % 2) throw FormatError("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

Digest sha256(ByteView data) {
    Digest d{};
    SHA256(data.data(), data.size(), d.data());
    return d;
}

Digest hmac_sha256(ByteView key, ByteView data) {
    Digest d{};
    unsigned len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), d.data(), &len))
        throw std::runtime_error("HMAC-SHA256 failed");
    return d;
}

bool equal_ct(ByteView a, ByteView b) {
    return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

namespace {
EVP_MD_CTX* new_ctx() {
    EVP_MD_CTX* c = EVP_MD_CTX_new();
    if (!c || EVP_DigestInit_ex(c, EVP_sha256(), nullptr) != 1) throw std::runtime_error("EVP sha256 init failed");
    return c;
}
EVP_MD_CTX* ctx_of(void* p) { return static_cast<EVP_MD_CTX*>(p); }
}  // namespace

Sha256::Sha256() : ctx_(new_ctx()) {}

Sha256::Sha256(const Sha256& o) : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_MD_CTX_copy_ex(ctx_of(ctx_), ctx_of(o.ctx_)) != 1) throw std::runtime_error("EVP copy failed");
}

Sha256& Sha256::operator=(const Sha256& o) {
    if (this != &o) {
        Sha256 tmp(o);
        std::swap(ctx_, tmp.ctx_);
    }
    return *this;
}

Sha256::Sha256(Sha256&& o) noexcept : ctx_(std::exchange(o.ctx_, nullptr)) {}

Sha256& Sha256::operator=(Sha256&& o) noexcept {
    std::swap(ctx_, o.ctx_);
    return *this;
}

Sha256::~Sha256() { EVP_MD_CTX_free(ctx_of(ctx_)); }

Sha256& Sha256::update(ByteView data) {
    if (!ctx_) ctx_ = new_ctx();
    EVP_DigestUpdate(ctx_of(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::update_u64(uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
    return update(b);
}

Digest Sha256::finish() {
    if (!ctx_) ctx_ = new_ctx();
    Digest d{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_of(ctx_), d.data(), &len);
    EVP_DigestInit_ex(ctx_of(ctx_), EVP_sha256(), nullptr);
    return d;
}

}  // namespace fde
