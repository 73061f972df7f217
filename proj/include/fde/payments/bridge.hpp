#pragma once

#include "fde/veck/star.hpp"

namespace fde::pay {

using veck::KeyBridgeStatement;

/// Proof pi_t for vk = h^sk and t = SHA-256(sk bytes); independent of any file,
/// so the server can make it ahead of time.
Bytes bridge_prove(const veck::ConsistencyBackend& backend, const KeyBridgeStatement& st, const Fr& sk);
bool bridge_verify(const veck::ConsistencyBackend& backend, const KeyBridgeStatement& st, ByteView proof);

/// Canonical preimage for hash locks: the 32-byte little-endian scalar.
Bytes sk_preimage(const Fr& sk);
std::optional<Fr> sk_from_preimage(ByteView preimage);

}  // namespace fde::pay
