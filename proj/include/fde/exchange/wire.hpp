#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fde/common/bytes.hpp"
#include "fde/curve/groups.hpp"
#include "fde/payments/ledger.hpp"
#include "fde/veck/star.hpp"

namespace fde::ex {

enum class Scheme : uint8_t { kPlus = 0, kStar = 1 };
const char* to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view s);

/// Session parameters both parties must agree on before any data flows.
struct SessionConfig {
    Scheme scheme = Scheme::kStar;
    pay::Rail rail = pay::Rail::kContract;
    double beta = 2.0;
    unsigned lambda = 128;
    unsigned chunk_bits = 16;
    pay::Amount price = 100;
    uint64_t timeout_blocks = 6;
    veck::MaskHash mask_hash = veck::MaskHash::kTranscript;
    std::optional<std::vector<uint64_t>> subset;  // plus scheme only

    /// Throws DomainError unless lambda = 128, beta > 1, price > 0 and the
    /// subset (if any) is non-empty, ascending and used with the plus scheme.
    void validate() const;
    bool operator==(const SessionConfig&) const = default;
};

enum class MsgType : uint8_t { kOffer = 1, kBundle = 2, kPayEvidence = 3, kKeyReveal = 4, kAbort = 5 };
const char* to_string(MsgType t);

enum class Reason : uint8_t {
    kNone = 0,
    kVerCtFail = 1,
    kVerKeyFail = 2,
    kRsFail = 3,
    kTimeout = 4,
    kNegotiation = 5,
};
const char* to_string(Reason r);

inline constexpr uint8_t kWireVersion = 1;
/// sk is fed to the key hash as 32 little-endian bytes.
inline constexpr uint8_t kSkEncodingLe32 = 0;
inline constexpr uint32_t kMaxBody = 1u << 31;

/// version (u8) || type (u8) || body length (u32 LE) || body
struct WireMessage {
    uint8_t version = kWireVersion;
    MsgType type = MsgType::kAbort;
    Bytes body;

    Bytes encode() const;
    /// Exactly one frame; throws FormatError otherwise (including unknown
    /// versions and types).
    static WireMessage decode(ByteView frame);
    /// Length of the frame starting at data, or nullopt if the header is
    /// incomplete. Throws FormatError on a bad header.
    static std::optional<size_t> frame_length(ByteView data);
    bool operator==(const WireMessage&) const = default;
};

/// Client request (echo = false) or server answer (echo = true, with the
/// file description filled in).
struct Offer {
    SessionConfig config;
    Digest crs_digest{};
    uint8_t sk_encoding = kSkEncodingLe32;
    uint8_t backend_id = 0;
    bool echo = false;
    // Answer only.
    uint64_t ell = 0;
    uint64_t m = 0;
    uint64_t byte_length = 0;
    uint8_t tail_length = 0;
    G1 commitment;
    pay::Address server_address;
    Digest server_pk{};

    Bytes serialize() const;
    static Offer parse(ByteView body);
    bool operator==(const Offer& o) const;
};

/// Scheme bundle plus how the key is bound to the payment rail: a contract
/// id, or the key hash t with its bridge proof.
struct BundleEnvelope {
    Scheme scheme = Scheme::kStar;
    Bytes bundle;
    uint64_t contract_id = 0;
    Digest key_hash{};
    Bytes bridge_proof;

    Bytes serialize() const;
    static BundleEnvelope parse(ByteView body);
    bool operator==(const BundleEnvelope&) const = default;
};

struct PayEvidence {
    pay::Rail rail = pay::Rail::kContract;
    uint64_t object = 0;  // contract, HTLC output, or channel id
    uint64_t htlc = 0;    // channel HTLC id
    pay::Address client_address;

    Bytes serialize() const;
    static PayEvidence parse(ByteView body);
    bool operator==(const PayEvidence&) const = default;
};

/// Informational: the key itself is read from the rail.
struct KeyReveal {
    pay::Rail rail = pay::Rail::kContract;
    uint64_t object = 0;
    uint64_t htlc = 0;

    Bytes serialize() const;
    static KeyReveal parse(ByteView body);
    bool operator==(const KeyReveal&) const = default;
};

struct Abort {
    Reason reason = Reason::kNone;
    std::string detail;

    Bytes serialize() const;
    static Abort parse(ByteView body);
    bool operator==(const Abort&) const = default;
};

template <class T>
WireMessage make_message(MsgType type, const T& body) {
    return {kWireVersion, type, body.serialize()};
}

}  // namespace fde::ex
