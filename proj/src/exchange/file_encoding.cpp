#include "fde/exchange/file_encoding.hpp"

#include <algorithm>

namespace fde::ex {

FileEncoding encode_file(ByteView data) {
    if (data.empty()) throw DomainError("cannot encode an empty file");
    FileEncoding enc;
    enc.byte_length = data.size();
    const size_t n = (data.size() + kBytesPerSymbol - 1) / kBytesPerSymbol;
    enc.tail_length = static_cast<uint8_t>(data.size() - (n - 1) * kBytesPerSymbol);
    enc.symbols.reserve(n);
    std::array<uint8_t, Fr::kBytes> buf{};
    for (size_t i = 0; i < n; ++i) {
        buf.fill(0);
        const size_t off = i * kBytesPerSymbol;
        const size_t len = std::min(kBytesPerSymbol, data.size() - off);
        std::copy_n(data.begin() + static_cast<ptrdiff_t>(off), len, buf.begin());
        enc.symbols.push_back(*Fr::from_bytes(buf));
    }
    return enc;
}

namespace {

void append_symbol(Bytes& out, const Fr& s, size_t len) {
    const auto b = s.to_bytes();
    if (b[kBytesPerSymbol] != 0) throw FormatError("decoded scalar out of range for 31-byte packing");
    for (size_t j = len; j < kBytesPerSymbol; ++j)
        if (b[j] != 0) throw FormatError("nonzero padding in the final block");
    out.insert(out.end(), b.begin(), b.begin() + static_cast<ptrdiff_t>(len));
}

}  // namespace

Bytes decode_file(uint64_t byte_length, uint8_t tail_length, std::span<const Fr> symbols) {
    if (symbols.empty() || tail_length == 0 || tail_length > kBytesPerSymbol ||
        byte_length != (symbols.size() - 1) * kBytesPerSymbol + tail_length)
        throw FormatError("padding descriptor does not match the symbol count");
    Bytes out;
    out.reserve(byte_length);
    for (size_t i = 0; i + 1 < symbols.size(); ++i) append_symbol(out, symbols[i], kBytesPerSymbol);
    append_symbol(out, symbols.back(), tail_length);
    return out;
}

Bytes unpack_symbols(std::span<const Fr> symbols) {
    Bytes out;
    out.reserve(symbols.size() * kBytesPerSymbol);
    for (const auto& s : symbols) append_symbol(out, s, kBytesPerSymbol);
    return out;
}

}  // namespace fde::ex
