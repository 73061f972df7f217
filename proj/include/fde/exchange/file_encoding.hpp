#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fde/algebra/fr.hpp"
#include "fde/common/bytes.hpp"

namespace fde::ex {

inline constexpr size_t kBytesPerSymbol = 31;

/// Raw bytes packed 31 per scalar, little-endian, top byte zero. The padding
/// descriptor is the byte length of the last block.
struct FileEncoding {
    std::vector<Fr> symbols;
    uint64_t byte_length = 0;
    uint8_t tail_length = 0;  // 1..31

    uint64_t ell() const { return symbols.size() - 1; }
};

/// Throws DomainError on an empty file.
FileEncoding encode_file(ByteView data);

/// Inverse of encode_file over the given evaluations. Throws FormatError when
/// a scalar does not fit in 31 bytes or the descriptor disagrees with the
/// symbol count.
Bytes decode_file(uint64_t byte_length, uint8_t tail_length, std::span<const Fr> symbols);
inline Bytes decode_file(const FileEncoding& enc, std::span<const Fr> symbols) {
    return decode_file(enc.byte_length, enc.tail_length, symbols);
}

/// Unpacks symbols without a length descriptor (all 31 bytes each).
Bytes unpack_symbols(std::span<const Fr> symbols);

}  // namespace fde::ex
