#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fde/common/error.hpp"

namespace fde {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;
using Digest = std::array<uint8_t, 32>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

Digest sha256(ByteView data);
Digest hmac_sha256(ByteView key, ByteView data);
/// Constant-time equality for equal-length inputs.
bool equal_ct(ByteView a, ByteView b);

/// Incremental SHA-256. Copies fork the running state.
class Sha256 {
  public:
    Sha256();
    Sha256(const Sha256& o);
    Sha256& operator=(const Sha256& o);
    Sha256(Sha256&& o) noexcept;
    Sha256& operator=(Sha256&& o) noexcept;
    ~Sha256();

    Sha256& update(ByteView data);
    Sha256& update_u64(uint64_t v);
    /// Consumes the state; further updates restart from scratch.
    Digest finish();

  private:
    void* ctx_;
};

/// Little-endian append-only encoder.
class ByteWriter {
  public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u16(uint16_t v) { put_le(v, 2); }
    void u32(uint32_t v) { put_le(v, 4); }
    void u64(uint64_t v) { put_le(v, 8); }
    void i64(int64_t v) { put_le(static_cast<uint64_t>(v), 8); }
    void raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }
    /// 4-byte length prefix followed by the payload.
    void blob(ByteView data) {
        u32(static_cast<uint32_t>(data.size()));
        raw(data);
    }

    const Bytes& bytes() const& { return out_; }
    Bytes bytes() && { return std::move(out_); }
    size_t size() const { return out_.size(); }

  private:
    void put_le(uint64_t v, int n) {
        for (int i = 0; i < n; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    Bytes out_;
};

/// Bounds-checked little-endian decoder; throws FormatError on truncation.
class ByteReader {
  public:
    explicit ByteReader(ByteView data) : data_(data) {}

    uint8_t u8() { return static_cast<uint8_t>(get_le(1)); }
    uint16_t u16() { return static_cast<uint16_t>(get_le(2)); }
    uint32_t u32() { return static_cast<uint32_t>(get_le(4)); }
    uint64_t u64() { return get_le(8); }
    int64_t i64() { return static_cast<int64_t>(get_le(8)); }
    ByteView raw(size_t n) {
        need(n);
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }
    template <size_t N>
    std::array<uint8_t, N> fixed() {
        std::array<uint8_t, N> out{};
        auto v = raw(N);
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }
    ByteView blob() { return raw(u32()); }

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const {
        if (!done()) throw FormatError("trailing bytes after message");
    }

  private:
    void need(size_t n) const {
        if (n > remaining()) throw FormatError("truncated input");
    }
    uint64_t get_le(int n) {
        need(static_cast<size_t>(n));
        uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += static_cast<size_t>(n);
        return v;
    }
    ByteView data_;
    size_t pos_ = 0;
};

}  // namespace fde
