#include "fde/payments/bridge.hpp"

namespace fde::pay {

Bytes bridge_prove(const veck::ConsistencyBackend& backend, const KeyBridgeStatement& st, const Fr& sk) {
    return backend.prove_bridge(st, sk);
}

bool bridge_verify(const veck::ConsistencyBackend& backend, const KeyBridgeStatement& st, ByteView proof) {
    try {
        return backend.verify_bridge(st, proof);
    } catch (const veck::BackendError&) {
        return false;
    }
}

Bytes sk_preimage(const Fr& sk) {
    const auto b = sk.to_bytes();
    return {b.begin(), b.end()};
}

std::optional<Fr> sk_from_preimage(ByteView preimage) {
    if (preimage.size() != 32) return std::nullopt;
    return Fr::from_bytes(std::span<const uint8_t, 32>(preimage.data(), 32));
}

}  // namespace fde::pay
