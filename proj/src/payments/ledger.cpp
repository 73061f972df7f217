#include "fde/payments/ledger.hpp"

#include <sstream>

namespace fde::pay {

namespace {

constexpr uint8_t OP_IF = 0x63, OP_ELSE = 0x67, OP_ENDIF = 0x68, OP_DROP = 0x75, OP_EQUALVERIFY = 0x88,
                  OP_SHA256 = 0xa8, OP_CHECKSIG = 0xac, OP_CHECKLOCKTIMEVERIFY = 0xb1;

void push_data(Bytes& out, ByteView data) {
    out.push_back(static_cast<uint8_t>(data.size()));
    out.insert(out.end(), data.begin(), data.end());
}

/// Minimal little-endian script number encoding.
void push_number(Bytes& out, uint64_t v) {
    Bytes n;
    while (v) {
        n.push_back(static_cast<uint8_t>(v & 0xff));
        v >>= 8;
    }
    if (!n.empty() && (n.back() & 0x80)) n.push_back(0);
    push_data(out, n);
}

Bytes sk_bytes(const Fr& sk) {
    const auto b = sk.to_bytes();
    return {b.begin(), b.end()};
}

}  // namespace

const char* to_string(Rail r) {
    switch (r) {
        case Rail::kContract: return "contract";
        case Rail::kHtlc: return "htlc";
        case Rail::kLn: return "ln";
    }
    return "?";
}

std::optional<Rail> rail_from_string(std::string_view s) {
    if (s == "contract") return Rail::kContract;
    if (s == "htlc") return Rail::kHtlc;
    if (s == "ln") return Rail::kLn;
    return std::nullopt;
}

const char* to_string(TxStatus s) {
    switch (s) {
        case TxStatus::kOk: return "ok";
        case TxStatus::kUnknown: return "unknown object";
        case TxStatus::kWrongState: return "wrong state";
        case TxStatus::kInsufficientFunds: return "insufficient funds";
        case TxStatus::kInvalidKey: return "invalid key";
        case TxStatus::kBadPreimage: return "bad preimage";
        case TxStatus::kBadSignature: return "bad signature";
        case TxStatus::kTooLate: return "past timeout";
        case TxStatus::kTooEarly: return "before timeout";
        case TxStatus::kPendingHtlcs: return "pending htlcs";
    }
    return "?";
}

const char* to_string(ContractStatus s) {
    switch (s) {
        case ContractStatus::kOpen: return "OPEN";
        case ContractStatus::kLocked: return "LOCKED";
        case ContractStatus::kClaimed: return "CLAIMED";
        case ContractStatus::kRefunded: return "REFUNDED";
    }
    return "?";
}

std::string Event::to_line() const {
    std::ostringstream os;
    os << height << '\t' << object << '\t' << action << '\t' << to_hex(sha256(payload));
    return os.str();
}

Bytes HtlcScript::script_bytes() const {
    Bytes s;
    s.push_back(OP_IF);
    s.push_back(OP_SHA256);
    push_data(s, hashlock);
    s.push_back(OP_EQUALVERIFY);
    push_data(s, server_pk);
    s.push_back(OP_CHECKSIG);
    s.push_back(OP_ELSE);
    push_number(s, timeout);
    s.push_back(OP_CHECKLOCKTIMEVERIFY);
    s.push_back(OP_DROP);
    push_data(s, client_pk);
    s.push_back(OP_CHECKSIG);
    s.push_back(OP_ENDIF);
    return s;
}

Bytes htlc_spend_message(uint64_t id, uint8_t branch) {
    ByteWriter w;
    w.raw(as_bytes("fde/htlc/spend"));
    w.u64(id);
    w.u8(branch);
    return std::move(w).bytes();
}

void MockLedger::mint(const Address& a, Amount amount) {
    std::lock_guard lock(mu_);
    accounts_[a] += amount;
    supply_ += amount;
    emit_locked(0, "mint:" + a, {});
}

Digest MockLedger::register_signer(const Signer& s) {
    std::lock_guard lock(mu_);
    signers_[s.pk()] = s;
    return s.pk();
}

Amount MockLedger::balance(const Address& a) const {
    std::lock_guard lock(mu_);
    auto it = accounts_.find(a);
    return it == accounts_.end() ? 0 : it->second;
}

Amount MockLedger::supply() const {
    std::lock_guard lock(mu_);
    return supply_;
}

Amount MockLedger::holdings() const {
    std::lock_guard lock(mu_);
    Amount total = 0;
    for (const auto& [_, v] : accounts_) total += v;
    for (const auto& [_, c] : contracts_)
        if (c.status == ContractStatus::kLocked) total += c.price;
    for (const auto& [_, h] : htlcs_)
        if (h.status == OutputStatus::kUnspent) total += h.amount;
    for (const auto& [_, v] : channel_escrow_) total += v;
    return total;
}

uint64_t MockLedger::height() const {
    std::lock_guard lock(mu_);
    return height_;
}

void MockLedger::advance_height(uint64_t n) {
    std::lock_guard lock(mu_);
    height_ += n;
}

uint64_t MockLedger::onchain_tx_count() const {
    std::lock_guard lock(mu_);
    return onchain_txs_;
}

std::vector<Event> MockLedger::events() const {
    std::lock_guard lock(mu_);
    return events_;
}

std::string MockLedger::export_log() const {
    std::lock_guard lock(mu_);
    std::string out;
    for (const auto& e : events_) out += e.to_line() + '\n';
    return out;
}

void MockLedger::emit_locked(uint64_t object, std::string action, Bytes payload, bool on_chain) {
    events_.push_back({height_, object, std::move(action), std::move(payload), on_chain});
}

bool MockLedger::debit_locked(const Address& a, Amount amount) {
    auto it = accounts_.find(a);
    if (it == accounts_.end() || it->second < amount) return false;
    it->second -= amount;
    return true;
}

uint64_t MockLedger::contract_deploy(const Address& server, const G1& h, const G1& vk, Amount price,
                                     uint64_t timeout_blocks) {
    std::lock_guard lock(mu_);
    const uint64_t id = next_id_locked();
    ContractState c;
    c.h = h;
    c.vk = vk;
    c.price = price;
    c.server = server;
    c.timeout_blocks = timeout_blocks;
    contracts_[id] = c;
    ++onchain_txs_;
    const auto enc = vk.compress();
    emit_locked(id, "deploy", Bytes(enc.begin(), enc.end()));
    return id;
}

TxStatus MockLedger::contract_lock(uint64_t id, const Address& client) {
    std::lock_guard lock(mu_);
    auto it = contracts_.find(id);
    if (it == contracts_.end()) return TxStatus::kUnknown;
    auto& c = it->second;
    if (c.status != ContractStatus::kOpen) return TxStatus::kWrongState;
    if (!debit_locked(client, c.price)) return TxStatus::kInsufficientFunds;
    c.client = client;
    c.timeout_height = height_ + c.timeout_blocks;
    c.status = ContractStatus::kLocked;
    ++onchain_txs_;
    emit_locked(id, "lock", {});
    return TxStatus::kOk;
}

TxStatus MockLedger::contract_claim(uint64_t id, const Fr& sk) {
    std::lock_guard lock(mu_);
    auto it = contracts_.find(id);
    if (it == contracts_.end()) return TxStatus::kUnknown;
    auto& c = it->second;
    if (c.status != ContractStatus::kLocked) return TxStatus::kWrongState;
    if (height_ > c.timeout_height) return TxStatus::kTooLate;
    if (!(c.h * sk == c.vk)) return TxStatus::kInvalidKey;
    accounts_[c.server] += c.price;
    c.status = ContractStatus::kClaimed;
    c.revealed_sk = sk;
    ++onchain_txs_;
    emit_locked(id, "claim", sk_bytes(sk));
    return TxStatus::kOk;
}

TxStatus MockLedger::contract_refund(uint64_t id) {
    std::lock_guard lock(mu_);
    auto it = contracts_.find(id);
    if (it == contracts_.end()) return TxStatus::kUnknown;
    auto& c = it->second;
    if (c.status != ContractStatus::kLocked) return TxStatus::kWrongState;
    if (height_ <= c.timeout_height) return TxStatus::kTooEarly;
    accounts_[c.client] += c.price;
    c.status = ContractStatus::kRefunded;
    ++onchain_txs_;
    emit_locked(id, "refund", {});
    return TxStatus::kOk;
}

std::optional<ContractState> MockLedger::contract(uint64_t id) const {
    std::lock_guard lock(mu_);
    auto it = contracts_.find(id);
    if (it == contracts_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint64_t> MockLedger::htlc_fund(const Address& client, Amount amount, const HtlcScript& script) {
    std::lock_guard lock(mu_);
    if (!debit_locked(client, amount)) return std::nullopt;
    const uint64_t id = next_id_locked();
    htlcs_[id] = {script, amount, OutputStatus::kUnspent, std::nullopt};
    ++onchain_txs_;
    emit_locked(id, "htlc-fund", script.script_bytes());
    return id;
}

TxStatus MockLedger::htlc_spend_success(uint64_t id, const HtlcWitness& w) {
    std::lock_guard lock(mu_);
    auto it = htlcs_.find(id);
    if (it == htlcs_.end()) return TxStatus::kUnknown;
    auto& o = it->second;
    if (o.status != OutputStatus::kUnspent || w.branch != 1) return TxStatus::kWrongState;
    if (height_ > o.script.timeout) return TxStatus::kTooLate;
    if (!w.preimage || !(sha256(*w.preimage) == o.script.hashlock)) return TxStatus::kBadPreimage;
    auto signer = signers_.find(o.script.server_pk);
    if (signer == signers_.end() || !equal_ct(signer->second.sign(htlc_spend_message(id, 1)), w.signature))
        return TxStatus::kBadSignature;
    accounts_[signer->second.address] += o.amount;
    o.status = OutputStatus::kSpentSuccess;
    o.revealed_preimage = *w.preimage;
    ++onchain_txs_;
    emit_locked(id, "htlc-success", *w.preimage);
    return TxStatus::kOk;
}

TxStatus MockLedger::htlc_spend_refund(uint64_t id, const HtlcWitness& w) {
    std::lock_guard lock(mu_);
    auto it = htlcs_.find(id);
    if (it == htlcs_.end()) return TxStatus::kUnknown;
    auto& o = it->second;
    if (o.status != OutputStatus::kUnspent || w.branch != 0) return TxStatus::kWrongState;
    if (height_ <= o.script.timeout) return TxStatus::kTooEarly;
    auto signer = signers_.find(o.script.client_pk);
    if (signer == signers_.end() || !equal_ct(signer->second.sign(htlc_spend_message(id, 0)), w.signature))
        return TxStatus::kBadSignature;
    accounts_[signer->second.address] += o.amount;
    o.status = OutputStatus::kSpentRefund;
    ++onchain_txs_;
    emit_locked(id, "htlc-refund", {});
    return TxStatus::kOk;
}

std::optional<HtlcOutput> MockLedger::htlc(uint64_t id) const {
    std::lock_guard lock(mu_);
    auto it = htlcs_.find(id);
    if (it == htlcs_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint64_t> MockLedger::channel_fund(const Address& funder, Amount capacity) {
    std::lock_guard lock(mu_);
    if (!debit_locked(funder, capacity)) return std::nullopt;
    const uint64_t id = next_id_locked();
    channel_escrow_[id] = capacity;
    ++onchain_txs_;
    emit_locked(id, "channel-open", {});
    return id;
}

void MockLedger::channel_settle(uint64_t id, const std::vector<std::pair<Address, Amount>>& payouts) {
    std::lock_guard lock(mu_);
    auto it = channel_escrow_.find(id);
    if (it == channel_escrow_.end()) throw DomainError("unknown channel");
    Amount total = 0;
    for (const auto& [_, v] : payouts) total += v;
    if (total != it->second) throw DomainError("channel settlement does not match capacity");
    for (const auto& [a, v] : payouts) accounts_[a] += v;
    channel_escrow_.erase(it);
    ++onchain_txs_;
    emit_locked(id, "channel-close", {});
}

void MockLedger::log_offchain(uint64_t object, std::string action, Bytes payload) {
    std::lock_guard lock(mu_);
    emit_locked(object, std::move(action), std::move(payload), false);
}

}  // namespace fde::pay
