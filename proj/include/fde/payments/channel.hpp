#pragma once

#include <optional>

#include "fde/payments/ledger.hpp"

namespace fde::pay {

struct PendingHtlc {
    uint64_t id = 0;
    Amount amount = 0;
    Digest hashlock{};
    uint64_t expiry = 0;
};

/// Client-funded two-party channel. Only open and close touch the chain;
/// HTLCs move funds off-chain under a revision counter.
class LightningChannel {
  public:
    static std::optional<LightningChannel> open(MockLedger& ledger, const Address& client, const Address& server,
                                                Amount capacity);

    TxStatus add_htlc(Amount amount, const Digest& hashlock, uint64_t expiry_height, uint64_t* id_out = nullptr);
    TxStatus fulfill(uint64_t htlc_id, ByteView preimage);
    TxStatus expire(uint64_t htlc_id);
    TxStatus close();

    Amount capacity() const { return capacity_; }
    Amount client_balance() const { return client_balance_; }
    Amount server_balance() const { return server_balance_; }
    Amount pending_total() const;
    uint64_t revision() const { return revision_; }
    uint64_t id() const { return id_; }
    bool is_open() const { return open_; }
    const std::vector<PendingHtlc>& pending() const { return pending_; }
    /// Preimage learned by the client when the server fulfilled htlc_id.
    std::optional<Bytes> revealed_preimage(uint64_t htlc_id) const;

  private:
    LightningChannel(MockLedger& l, Address c, Address s, Amount cap, uint64_t id)
        : ledger_(&l), client_(std::move(c)), server_(std::move(s)), capacity_(cap), client_balance_(cap), id_(id) {}

    MockLedger* ledger_;
    Address client_, server_;
    Amount capacity_ = 0;
    Amount client_balance_ = 0;
    Amount server_balance_ = 0;
    uint64_t id_ = 0;
    uint64_t revision_ = 0;
    uint64_t next_htlc_ = 1;
    bool open_ = true;
    std::vector<PendingHtlc> pending_;
    std::vector<std::pair<uint64_t, Bytes>> fulfilled_;
};

}  // namespace fde::pay
