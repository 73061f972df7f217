#include "fde/payments/fairness.hpp"

#include <sstream>

#include "fde/payments/bridge.hpp"
#include "fde/payments/channel.hpp"

namespace fde::pay {

namespace {

constexpr Amount kPrice = 100;
constexpr Amount kClientFunds = 1000;
constexpr uint64_t kTimeout = 6;

struct KeyCache {
    G1 h = G1::hash_to_curve(as_bytes("fde/fairness/h"), "FDE-V01-BLS12381G1_XMD:SHA-256_SSWU_RO_FAIR_");
    std::vector<std::pair<Fr, G1>> keys;
    explicit KeyCache(Rng& rng) {
        for (int i = 0; i < 8; ++i) {
            Fr sk = Fr::random(rng);
            keys.emplace_back(sk, h * sk);
        }
    }
};

/// One trace. Step kinds are drawn uniformly; each kind is either an honest
/// protocol move, an attack, or a fault (the move is skipped).
class Trace {
  public:
    Trace(Rail rail, Rng& rng, const KeyCache& keys) : rail_(rail), rng_(rng), keys_(keys) {
        const auto& k = keys.keys[rng.uniform(keys.keys.size())];
        sk_ = k.first;
        vk_ = k.second;
        wrong_sk_ = keys.keys[(&k - keys.keys.data() + 1) % keys.keys.size()].first;
        client_ = {"client", {}};
        server_ = {"server", {}};
        mallory_ = {"mallory", {}};
        rng.fill(client_.secret);
        rng.fill(server_.secret);
        rng.fill(mallory_.secret);
        ledger_.register_signer(client_);
        ledger_.register_signer(server_);
        ledger_.register_signer(mallory_);
        ledger_.mint(client_.address, kClientFunds);
        ledger_.mint(server_.address, 10);
        ledger_.mint(mallory_.address, 10);
        server_start_ = ledger_.balance(server_.address);
        client_start_ = ledger_.balance(client_.address);
        client_will_pay_ = rng.uniform(5) != 0;
        server_will_reveal_ = rng.uniform(4) != 0;
    }

    void run(FairnessReport& rep) {
        setup();
        const uint64_t steps = 4 + rng_.uniform(12);
        for (uint64_t s = 0; s < steps; ++s) {
            step();
            check_online(rep);
        }
        quiesce();
        check_online(rep);
        check_final(rep);
    }

  private:
    void setup() {
        if (rail_ == Rail::kContract) {
            contract_ = ledger_.contract_deploy(server_.address, keys_.h, vk_, kPrice, kTimeout);
        } else if (rail_ == Rail::kLn && client_will_pay_) {
            channel_ = LightningChannel::open(ledger_, client_.address, server_.address, 500);
        }
    }

    void client_pay() {
        if (!client_will_pay_) return;
        switch (rail_) {
            case Rail::kContract:
                if (ledger_.contract_lock(contract_, client_.address) == TxStatus::kOk) paid_in_ = true;
                break;
            case Rail::kHtlc:
                if (!htlc_) {
                    HtlcScript sc{key_hash(), server_.pk(), client_.pk(), ledger_.height() + kTimeout};
                    htlc_ = ledger_.htlc_fund(client_.address, kPrice, sc);
                    if (htlc_) paid_in_ = true;
                }
                break;
            case Rail::kLn:
                if (channel_ && !ln_htlc_ &&
                    channel_->add_htlc(kPrice, key_hash(), ledger_.height() + kTimeout, &ln_id_) == TxStatus::kOk) {
                    ln_htlc_ = true;
                    paid_in_ = true;
                }
                break;
        }
    }

    void server_reveal(const Fr& sk, bool forge_sig = false) {
        switch (rail_) {
            case Rail::kContract: ledger_.contract_claim(contract_, sk); break;
            case Rail::kHtlc:
                if (htlc_) {
                    const Signer& who = forge_sig ? mallory_ : server_;
                    HtlcWitness w{sk_preimage(sk), who.sign(htlc_spend_message(*htlc_, 1)), 1};
                    ledger_.htlc_spend_success(*htlc_, w);
                }
                break;
            case Rail::kLn:
                if (channel_ && ln_htlc_) channel_->fulfill(ln_id_, sk_preimage(sk));
                break;
        }
    }

    void client_refund(bool forge_sig = false) {
        switch (rail_) {
            case Rail::kContract: ledger_.contract_refund(contract_); break;
            case Rail::kHtlc:
                if (htlc_) {
                    const Signer& who = forge_sig ? mallory_ : client_;
                    ledger_.htlc_spend_refund(*htlc_, {std::nullopt, who.sign(htlc_spend_message(*htlc_, 0)), 0});
                }
                break;
            case Rail::kLn:
                if (channel_ && ln_htlc_) channel_->expire(ln_id_);
                break;
        }
    }

    void step() {
        switch (rng_.uniform(9)) {
            case 0:
            case 1: client_pay(); break;
            case 2:
                if (server_will_reveal_ && paid_observed()) server_reveal(sk_);
                break;
            case 3: server_reveal(wrong_sk_); break;                       // wrong key
            case 4: server_reveal(sk_, /*forge_sig=*/true); break;         // third party with the key
            case 5: client_refund(); break;                                // possibly early
            case 6: client_refund(/*forge_sig=*/true); break;
            case 7: ledger_.advance_height(1 + rng_.uniform(3)); break;
            case 8:
                if (server_will_reveal_ && paid_observed()) server_reveal(sk_);  // double claim attempt
                break;
        }
    }

    bool paid_observed() const { return paid_in_; }

    void quiesce() {
        // Honest endgame: a revealing server claims while it can, then time
        // runs out and the client reclaims whatever is left.
        if (server_will_reveal_ && paid_in_) server_reveal(sk_);
        ledger_.advance_height(kTimeout + 2);
        client_refund();
        if (channel_ && channel_->is_open()) channel_->close();
    }

    bool sk_visible_to_client() const {
        switch (rail_) {
            case Rail::kContract: {
                auto c = ledger_.contract(contract_);
                return c && c->revealed_sk && *c->revealed_sk == sk_;
            }
            case Rail::kHtlc: {
                if (!htlc_) return false;
                auto o = ledger_.htlc(*htlc_);
                return o && o->revealed_preimage && sk_from_preimage(*o->revealed_preimage) == sk_;
            }
            case Rail::kLn: {
                if (!channel_ || !ln_htlc_) return false;
                auto p = channel_->revealed_preimage(ln_id_);
                return p && sk_from_preimage(*p) == sk_;
            }
        }
        return false;
    }

    bool sk_anywhere() const {
        const Bytes want = sk_preimage(sk_);
        for (const auto& e : ledger_.events())
            if (e.payload == want) return true;
        return false;
    }

    Amount server_income() const {
        Amount now = ledger_.balance(server_.address);
        if (channel_ && channel_->is_open()) now += channel_->server_balance();
        return now > server_start_ ? now - server_start_ : 0;
    }

    void violation(FairnessReport& rep, uint64_t FairnessReport::*counter, const std::string& what) {
        ++(rep.*counter);
        if (rep.examples.size() < 8) {
            std::ostringstream os;
            os << to_string(rail_) << ": " << what << " at height " << ledger_.height();
            rep.examples.push_back(os.str());
        }
    }

    void check_online(FairnessReport& rep) {
        if (ledger_.holdings() != ledger_.supply()) violation(rep, &FairnessReport::conservation, "supply drift");
        if (channel_ && channel_->is_open() &&
            channel_->client_balance() + channel_->server_balance() + channel_->pending_total() != channel_->capacity())
            violation(rep, &FairnessReport::conservation, "channel capacity drift");
        if (server_income() > 0 && !sk_visible_to_client())
            violation(rep, &FairnessReport::client_fairness, "server paid without revealing sk");
        if (!paid_in_ && sk_anywhere()) violation(rep, &FairnessReport::server_fairness, "sk revealed without payment");

        // Terminal states never change.
        const int term = terminal_state();
        if (last_terminal_ && term != last_terminal_)
            violation(rep, &FairnessReport::exactly_once, "terminal state changed");
        if (term) last_terminal_ = term;
    }

    /// 0 = not terminal, 1 = paid out to server, 2 = refunded.
    int terminal_state() const {
        switch (rail_) {
            case Rail::kContract: {
                auto c = ledger_.contract(contract_);
                if (c->status == ContractStatus::kClaimed) return 1;
                if (c->status == ContractStatus::kRefunded) return 2;
                return 0;
            }
            case Rail::kHtlc: {
                if (!htlc_) return 0;
                auto o = ledger_.htlc(*htlc_);
                if (o->status == OutputStatus::kSpentSuccess) return 1;
                if (o->status == OutputStatus::kSpentRefund) return 2;
                return 0;
            }
            case Rail::kLn: {
                if (!ln_htlc_) return 0;
                if (channel_->revealed_preimage(ln_id_)) return 1;
                for (const auto& p : channel_->pending())
                    if (p.id == ln_id_) return 0;
                return 2;
            }
        }
        return 0;
    }

    void check_final(FairnessReport& rep) {
        ++rep.traces;
        const int term = terminal_state();
        if (paid_in_ && term == 0) violation(rep, &FairnessReport::exactly_once, "escrow never settled");
        if (!paid_in_ && term != 0) violation(rep, &FairnessReport::exactly_once, "settled without escrow");
        if (term == 1) {
            ++rep.paid_traces;
            if (ledger_.balance(server_.address) != server_start_ + kPrice)
                violation(rep, &FairnessReport::exactly_once, "server paid other than once");
        } else if (term == 2) {
            ++rep.refunded_traces;
        } else {
            ++rep.unpaid_traces;
        }
        if (!paid_in_ && ledger_.balance(client_.address) != client_start_)
            violation(rep, &FairnessReport::conservation, "client lost funds without paying");
        if (term == 2 && ledger_.balance(client_.address) != client_start_)
            violation(rep, &FairnessReport::conservation, "refund incomplete");
        if (term == 1 && !sk_visible_to_client())
            violation(rep, &FairnessReport::client_fairness, "paid out without the key reaching the client");
    }

    Digest key_hash() const { return sha256(sk_preimage(sk_)); }

    Rail rail_;
    Rng& rng_;
    const KeyCache& keys_;
    MockLedger ledger_;
    Signer client_, server_, mallory_;
    Fr sk_, wrong_sk_;
    G1 vk_;
    Amount server_start_ = 0, client_start_ = 0;
    bool client_will_pay_ = true, server_will_reveal_ = true;
    bool paid_in_ = false;
    int last_terminal_ = 0;
    uint64_t contract_ = 0;
    std::optional<uint64_t> htlc_;
    std::optional<LightningChannel> channel_;
    bool ln_htlc_ = false;
    uint64_t ln_id_ = 0;
};

}  // namespace

FairnessReport check_rail_fairness(Rail rail, uint64_t traces, uint64_t seed) {
    Rng rng = Rng::seeded(seed);
    const KeyCache keys(rng);
    FairnessReport rep;
    for (uint64_t t = 0; t < traces; ++t) {
        Trace tr(rail, rng, keys);
        tr.run(rep);
    }
    return rep;
}

}  // namespace fde::pay
