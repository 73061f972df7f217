#include "fde/payments/channel.hpp"

#include <algorithm>

namespace fde::pay {

std::optional<LightningChannel> LightningChannel::open(MockLedger& ledger, const Address& client,
                                                       const Address& server, Amount capacity) {
    auto id = ledger.channel_fund(client, capacity);
    if (!id) return std::nullopt;
    return LightningChannel(ledger, client, server, capacity, *id);
}

Amount LightningChannel::pending_total() const {
    Amount t = 0;
    for (const auto& h : pending_) t += h.amount;
    return t;
}

TxStatus LightningChannel::add_htlc(Amount amount, const Digest& hashlock, uint64_t expiry_height,
                                    uint64_t* id_out) {
    if (!open_) return TxStatus::kWrongState;
    if (amount == 0 || amount > client_balance_) return TxStatus::kInsufficientFunds;
    if (expiry_height <= ledger_->height()) return TxStatus::kTooLate;
    const uint64_t hid = next_htlc_++;
    client_balance_ -= amount;
    pending_.push_back({hid, amount, hashlock, expiry_height});
    ++revision_;
    ledger_->log_offchain(id_, "ln-add", Bytes(hashlock.begin(), hashlock.end()));
    if (id_out) *id_out = hid;
    return TxStatus::kOk;
}

TxStatus LightningChannel::fulfill(uint64_t htlc_id, ByteView preimage) {
    if (!open_) return TxStatus::kWrongState;
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const PendingHtlc& h) { return h.id == htlc_id; });
    if (it == pending_.end()) return TxStatus::kUnknown;
    if (ledger_->height() > it->expiry) return TxStatus::kTooLate;
    if (!(sha256(preimage) == it->hashlock)) return TxStatus::kBadPreimage;
    server_balance_ += it->amount;
    pending_.erase(it);
    fulfilled_.emplace_back(htlc_id, Bytes(preimage.begin(), preimage.end()));
    ++revision_;
    ledger_->log_offchain(id_, "ln-fulfill", Bytes(preimage.begin(), preimage.end()));
    return TxStatus::kOk;
}

TxStatus LightningChannel::expire(uint64_t htlc_id) {
    if (!open_) return TxStatus::kWrongState;
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const PendingHtlc& h) { return h.id == htlc_id; });
    if (it == pending_.end()) return TxStatus::kUnknown;
    if (ledger_->height() <= it->expiry) return TxStatus::kTooEarly;
    client_balance_ += it->amount;
    pending_.erase(it);
    ++revision_;
    ledger_->log_offchain(id_, "ln-expire", {});
    return TxStatus::kOk;
}

TxStatus LightningChannel::close() {
    if (!open_) return TxStatus::kWrongState;
    if (!pending_.empty()) return TxStatus::kPendingHtlcs;
    ledger_->channel_settle(id_, {{client_, client_balance_}, {server_, server_balance_}});
    open_ = false;
    return TxStatus::kOk;
}

std::optional<Bytes> LightningChannel::revealed_preimage(uint64_t htlc_id) const {
    for (const auto& [id, p] : fulfilled_)
        if (id == htlc_id) return p;
    return std::nullopt;
}

}  // namespace fde::pay
