#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fde/common/bytes.hpp"
#include "fde/curve/groups.hpp"

namespace fde::pay {

using Address = std::string;
using Amount = uint64_t;

enum class Rail : uint8_t { kContract = 0, kHtlc = 1, kLn = 2 };
const char* to_string(Rail r);
std::optional<Rail> rail_from_string(std::string_view s);

enum class TxStatus {
    kOk,
    kUnknown,
    kWrongState,
    kInsufficientFunds,
    kInvalidKey,
    kBadPreimage,
    kBadSignature,
    kTooLate,
    kTooEarly,
    kPendingHtlcs,
};
const char* to_string(TxStatus s);

struct Event {
    uint64_t height = 0;
    uint64_t object = 0;
    std::string action;
    Bytes payload;
    bool on_chain = true;

    /// height \t object \t action \t sha256(payload) hex
    std::string to_line() const;
};

/// Authenticated signature stub: pk = SHA-256(secret), sig = HMAC(secret, msg).
/// The ledger keeps the pk -> (address, secret) registry to check signatures.
struct Signer {
    Address address;
    Digest secret{};
    Digest pk() const { return sha256(secret); }
    Digest sign(ByteView msg) const { return hmac_sha256(secret, msg); }
};

enum class ContractStatus { kOpen, kLocked, kClaimed, kRefunded };
const char* to_string(ContractStatus s);

/// On-chain escrow that pays the server against sk with h^sk = vk.
struct ContractState {
    G1 h;
    G1 vk;
    Amount price = 0;
    Address server;
    Address client;
    uint64_t timeout_blocks = 0;
    uint64_t timeout_height = 0;  // set at lock
    ContractStatus status = ContractStatus::kOpen;
    std::optional<Fr> revealed_sk;
};

/// OP_IF OP_SHA256 <t> OP_EQUALVERIFY <server_pk> OP_CHECKSIG
/// OP_ELSE <timeout> OP_CHECKLOCKTIMEVERIFY OP_DROP <client_pk> OP_CHECKSIG OP_ENDIF
struct HtlcScript {
    Digest hashlock{};
    Digest server_pk{};
    Digest client_pk{};
    uint64_t timeout = 0;

    Bytes script_bytes() const;
};

/// <sk> <sig> 1 spends the success branch, <sig> 0 the refund branch.
struct HtlcWitness {
    std::optional<Bytes> preimage;
    Digest signature{};
    uint8_t branch = 0;
};

enum class OutputStatus { kUnspent, kSpentSuccess, kSpentRefund };

struct HtlcOutput {
    HtlcScript script;
    Amount amount = 0;
    OutputStatus status = OutputStatus::kUnspent;
    std::optional<Bytes> revealed_preimage;
};

/// Message signed by a spender of an HTLC output.
Bytes htlc_spend_message(uint64_t id, uint8_t branch);

/// Shared logical chain for all rails. Every mutation is serialized by one
/// mutex; the event log is append-only.
class MockLedger {
  public:
    void mint(const Address& a, Amount amount);
    Digest register_signer(const Signer& s);

    Amount balance(const Address& a) const;
    Amount supply() const;
    /// Account balances plus everything held in escrow; equals supply().
    Amount holdings() const;
    uint64_t height() const;
    void advance_height(uint64_t n = 1);
    uint64_t onchain_tx_count() const;
    std::vector<Event> events() const;
    std::string export_log() const;

    // Contract rail.
    uint64_t contract_deploy(const Address& server, const G1& h, const G1& vk, Amount price, uint64_t timeout_blocks);
    TxStatus contract_lock(uint64_t id, const Address& client);
    TxStatus contract_claim(uint64_t id, const Fr& sk);
    TxStatus contract_refund(uint64_t id);
    std::optional<ContractState> contract(uint64_t id) const;

    // HTLC rail.
    std::optional<uint64_t> htlc_fund(const Address& client, Amount amount, const HtlcScript& script);
    TxStatus htlc_spend_success(uint64_t id, const HtlcWitness& w);
    TxStatus htlc_spend_refund(uint64_t id, const HtlcWitness& w);
    std::optional<HtlcOutput> htlc(uint64_t id) const;

    // Channel funding and settlement, used by LightningChannel.
    std::optional<uint64_t> channel_fund(const Address& funder, Amount capacity);
    void channel_settle(uint64_t id, const std::vector<std::pair<Address, Amount>>& payouts);
    void log_offchain(uint64_t object, std::string action, Bytes payload);

  private:
    uint64_t next_id_locked() { return next_id_++; }
    void emit_locked(uint64_t object, std::string action, Bytes payload, bool on_chain = true);
    bool debit_locked(const Address& a, Amount amount);

    mutable std::mutex mu_;
    uint64_t height_ = 0;
    uint64_t next_id_ = 1;
    uint64_t onchain_txs_ = 0;
    Amount supply_ = 0;
    std::map<Address, Amount> accounts_;
    std::map<Digest, Signer> signers_;
    std::map<uint64_t, ContractState> contracts_;
    std::map<uint64_t, HtlcOutput> htlcs_;
    std::map<uint64_t, Amount> channel_escrow_;
    std::vector<Event> events_;
};

}  // namespace fde::pay
