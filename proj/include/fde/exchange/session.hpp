#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "fde/exchange/chain.hpp"
#include "fde/exchange/file_encoding.hpp"
#include "fde/exchange/transport.hpp"
#include "fde/exchange/wire.hpp"
#include "fde/veck/plus.hpp"
#include "fde/veck/star.hpp"

namespace fde::ex {

/// Misbehaviour a test can ask the server to exhibit.
enum class ServerFault {
    kNone,
    kTamperCiphertext,    // after proving, change one sent symbol
    kTamperProof,         // after proving, perturb a proof component
    kMismatchedRailKey,   // bind the rail to a different key than the bundle
    kCorruptBeforeProof,  // corrupt one symbol, then prove honestly
    kNeverReveal,
    kRevealWrongKey,
    kHangUpAfterBundle,
};

enum class ClientFault {
    kNone,
    kWalkAway,          // verifies, then leaves without paying
    kWithholdEvidence,  // pays but never tells the server
};

struct PhaseTimes {
    double enc_ms = 0, prove_ms = 0, verify_ms = 0, dec_ms = 0;
};

/// Seller state shared across sessions: the committed file.
struct Listing {
    const kzg::Crs* crs = nullptr;
    const veck::CommittedFile* file = nullptr;
    uint64_t byte_length = 0;
    uint8_t tail_length = 0;
};

struct ServerContext {
    Listing listing;
    SessionConfig config;  // subset is taken from the request
    Chain* chain = nullptr;
    pay::Signer signer;
    const veck::ConsistencyBackend* backend = nullptr;
    std::string pp_seed = "fde/pp/v1";
    ServerFault fault = ServerFault::kNone;
    Rng* rng = nullptr;  // null: operating system randomness
    std::chrono::milliseconds wait{std::chrono::minutes(10)};
};

enum class ServerOutcome { kPaid, kUnpaid, kAborted };
const char* to_string(ServerOutcome o);

struct ServerReport {
    ServerOutcome outcome = ServerOutcome::kUnpaid;
    Reason reason = Reason::kNone;
    std::string detail;
    PhaseTimes times;
    uint64_t bytes_sent = 0, bytes_received = 0;
    std::optional<Fr> sk;
    std::optional<SessionConfig> agreed;
    uint64_t contract_id = 0;
    Digest key_hash{};
    std::optional<PayEvidence> evidence;
};

ServerReport run_server(const ServerContext& ctx, Connection& conn);

struct ClientContext {
    const kzg::Crs* crs = nullptr;
    SessionConfig config;
    /// Commitment the buyer expects (e.g. from a catalogue); any if unset.
    std::optional<G1> expected_commitment;
    Chain* chain = nullptr;
    pay::Signer signer;
    const veck::ConsistencyBackend* backend = nullptr;
    std::string pp_seed = "fde/pp/v1";
    ClientFault fault = ClientFault::kNone;
    /// Reused for repeat purchases on the channel rail; opened on demand.
    std::optional<uint64_t> ln_channel;
    pay::Amount ln_capacity = 0;  // 0: ten times the price
    std::chrono::milliseconds wait{std::chrono::minutes(10)};
};

enum class ClientOutcome {
    kDelivered,         // paid and decoded
    kAborted,           // stopped before paying
    kRefunded,          // paid, key never came, funds back
    kWalkedAway,        // chose not to pay
    kPaidNotDelivered,  // must not happen against a verified bundle
};
const char* to_string(ClientOutcome o);

struct ClientReport {
    ClientOutcome outcome = ClientOutcome::kAborted;
    Reason reason = Reason::kNone;
    std::string detail;
    Bytes file;  // for subset purchases: the requested blocks, concatenated
    /// Ordered milestones: offer, verify_ct, verify_key, pay, key, decode.
    std::vector<std::string> trace;
    PhaseTimes times;
    uint64_t bytes_sent = 0, bytes_received = 0;
    std::optional<Offer> offer;
    std::optional<uint64_t> ln_channel;
    veck::DecodeReport decode;
};

ClientReport run_client(const ClientContext& ctx, Connection& conn);

}  // namespace fde::ex
