#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "fde/payments/channel.hpp"
#include "fde/payments/ledger.hpp"

namespace fde::ex {

/// Everything a session needs from the payment rails. Both parties of a
/// session talk to the same chain.
class Chain {
  public:
    virtual ~Chain() = default;

    virtual uint64_t height() = 0;
    /// Mock chains mine until the height is reached; stands in for waiting.
    virtual void wait_until(uint64_t height) = 0;
    virtual pay::Amount balance(const pay::Address& a) = 0;
    virtual void register_signer(const pay::Signer& s) = 0;
    /// Faucet; mock chains only.
    virtual void mint(const pay::Address& a, pay::Amount amount) = 0;

    virtual uint64_t contract_deploy(const pay::Address& server, const G1& h, const G1& vk, pay::Amount price,
                                     uint64_t timeout_blocks) = 0;
    virtual std::optional<pay::ContractState> contract(uint64_t id) = 0;
    virtual pay::TxStatus contract_lock(uint64_t id, const pay::Address& client) = 0;
    virtual pay::TxStatus contract_claim(uint64_t id, const Fr& sk) = 0;
    virtual pay::TxStatus contract_refund(uint64_t id) = 0;

    virtual std::optional<uint64_t> htlc_fund(const pay::Address& client, pay::Amount amount,
                                              const pay::HtlcScript& script) = 0;
    virtual std::optional<pay::HtlcOutput> htlc(uint64_t id) = 0;
    virtual pay::TxStatus htlc_spend_success(uint64_t id, const pay::HtlcWitness& w) = 0;
    virtual pay::TxStatus htlc_spend_refund(uint64_t id, const pay::HtlcWitness& w) = 0;

    virtual std::optional<uint64_t> ln_open(const pay::Address& client, const pay::Address& server,
                                            pay::Amount capacity) = 0;
    virtual pay::TxStatus ln_add(uint64_t channel, pay::Amount amount, const Digest& hashlock, uint64_t expiry,
                                 uint64_t* htlc_id) = 0;
    virtual std::optional<pay::PendingHtlc> ln_pending(uint64_t channel, uint64_t htlc_id) = 0;
    virtual pay::TxStatus ln_fulfill(uint64_t channel, uint64_t htlc_id, ByteView preimage) = 0;
    virtual std::optional<Bytes> ln_preimage(uint64_t channel, uint64_t htlc_id) = 0;
    virtual pay::TxStatus ln_expire(uint64_t channel, uint64_t htlc_id) = 0;
    virtual pay::TxStatus ln_close(uint64_t channel) = 0;
    /// (client, server) balances of an open channel.
    virtual std::optional<std::pair<pay::Amount, pay::Amount>> ln_balances(uint64_t channel) = 0;
};

/// In-process chain over a MockLedger; channels live here too.
class LocalChain final : public Chain {
  public:
    explicit LocalChain(pay::MockLedger& ledger) : ledger_(ledger) {}
    pay::MockLedger& ledger() { return ledger_; }

    uint64_t height() override { return ledger_.height(); }
    void wait_until(uint64_t height) override;
    pay::Amount balance(const pay::Address& a) override { return ledger_.balance(a); }
    void register_signer(const pay::Signer& s) override { ledger_.register_signer(s); }
    void mint(const pay::Address& a, pay::Amount amount) override { ledger_.mint(a, amount); }

    uint64_t contract_deploy(const pay::Address& server, const G1& h, const G1& vk, pay::Amount price,
                             uint64_t timeout_blocks) override {
        return ledger_.contract_deploy(server, h, vk, price, timeout_blocks);
    }
    std::optional<pay::ContractState> contract(uint64_t id) override { return ledger_.contract(id); }
    pay::TxStatus contract_lock(uint64_t id, const pay::Address& client) override {
        return ledger_.contract_lock(id, client);
    }
    pay::TxStatus contract_claim(uint64_t id, const Fr& sk) override { return ledger_.contract_claim(id, sk); }
    pay::TxStatus contract_refund(uint64_t id) override { return ledger_.contract_refund(id); }

    std::optional<uint64_t> htlc_fund(const pay::Address& client, pay::Amount amount,
                                      const pay::HtlcScript& script) override {
        return ledger_.htlc_fund(client, amount, script);
    }
    std::optional<pay::HtlcOutput> htlc(uint64_t id) override { return ledger_.htlc(id); }
    pay::TxStatus htlc_spend_success(uint64_t id, const pay::HtlcWitness& w) override {
        return ledger_.htlc_spend_success(id, w);
    }
    pay::TxStatus htlc_spend_refund(uint64_t id, const pay::HtlcWitness& w) override {
        return ledger_.htlc_spend_refund(id, w);
    }

    std::optional<uint64_t> ln_open(const pay::Address& client, const pay::Address& server,
                                    pay::Amount capacity) override;
    pay::TxStatus ln_add(uint64_t channel, pay::Amount amount, const Digest& hashlock, uint64_t expiry,
                         uint64_t* htlc_id) override;
    std::optional<pay::PendingHtlc> ln_pending(uint64_t channel, uint64_t htlc_id) override;
    pay::TxStatus ln_fulfill(uint64_t channel, uint64_t htlc_id, ByteView preimage) override;
    std::optional<Bytes> ln_preimage(uint64_t channel, uint64_t htlc_id) override;
    pay::TxStatus ln_expire(uint64_t channel, uint64_t htlc_id) override;
    pay::TxStatus ln_close(uint64_t channel) override;
    std::optional<std::pair<pay::Amount, pay::Amount>> ln_balances(uint64_t channel) override;

  private:
    pay::LightningChannel* find_locked(uint64_t channel);

    pay::MockLedger& ledger_;
    std::mutex mu_;  // guards channels_ and height advances
    std::map<uint64_t, pay::LightningChannel> channels_;
};

/// Serves a LocalChain as JSON over HTTP (POST /rpc). Runs until stop().
class ChainService {
  public:
    ChainService(LocalChain& chain, const std::string& host, uint16_t port);
    ~ChainService();
    uint16_t port() const { return port_; }
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    uint16_t port_ = 0;
};

/// Client side of ChainService.
std::unique_ptr<Chain> connect_chain(const std::string& host, uint16_t port);

}  // namespace fde::ex
