#include <gtest/gtest.h>

#include "fde/payments/bridge.hpp"
#include "fde/payments/channel.hpp"
#include "fde/payments/fairness.hpp"

using namespace fde;
using namespace fde::pay;

namespace {

struct World {
    MockLedger ledger;
    G1 h = G1::generator().mul_small(7);
    Fr sk = Fr::from_u64(123456789);
    G1 vk = h * sk;
    Signer client{"client", {}}, server{"server", {}};

    World() {
        client.secret[0] = 1;
        server.secret[0] = 2;
        ledger.register_signer(client);
        ledger.register_signer(server);
        ledger.mint("client", 1000);
    }
    void conserved() const { EXPECT_EQ(ledger.holdings(), ledger.supply()); }
};

}  // namespace

TEST(Contract, HonestFlowRevealsKeyAndPays) {
    World w;
    const uint64_t id = w.ledger.contract_deploy("server", w.h, w.vk, 100, 5);
    EXPECT_EQ(w.ledger.contract_lock(id, "client"), TxStatus::kOk);
    EXPECT_EQ(w.ledger.balance("client"), 900u);
    w.conserved();
    EXPECT_EQ(w.ledger.contract_claim(id, w.sk + Fr::one()), TxStatus::kInvalidKey);
    EXPECT_EQ(w.ledger.contract(id)->status, ContractStatus::kLocked);
    EXPECT_EQ(w.ledger.contract_claim(id, w.sk), TxStatus::kOk);
    EXPECT_EQ(w.ledger.balance("server"), 100u);
    EXPECT_EQ(w.ledger.contract(id)->revealed_sk, w.sk);
    EXPECT_EQ(w.ledger.contract_claim(id, w.sk), TxStatus::kWrongState);
    w.ledger.advance_height(10);
    EXPECT_EQ(w.ledger.contract_refund(id), TxStatus::kWrongState);
    w.conserved();
    // Three on-chain transactions: register vk, lock, reveal.
    EXPECT_EQ(w.ledger.onchain_tx_count(), 3u);
    const auto ev = w.ledger.events();
    EXPECT_EQ(ev.back().action, "claim");
    EXPECT_EQ(ev.back().payload, sk_preimage(w.sk));
}

TEST(Contract, TimeoutRefunds) {
    World w;
    const uint64_t id = w.ledger.contract_deploy("server", w.h, w.vk, 100, 5);
    EXPECT_EQ(w.ledger.contract_refund(id), TxStatus::kWrongState);
    EXPECT_EQ(w.ledger.contract_lock(id, "client"), TxStatus::kOk);
    EXPECT_EQ(w.ledger.contract_lock(id, "client"), TxStatus::kWrongState);
    w.ledger.advance_height(5);
    EXPECT_EQ(w.ledger.contract_refund(id), TxStatus::kTooEarly);
    w.ledger.advance_height(1);
    EXPECT_EQ(w.ledger.contract_claim(id, w.sk), TxStatus::kTooLate);
    EXPECT_EQ(w.ledger.contract_refund(id), TxStatus::kOk);
    EXPECT_EQ(w.ledger.balance("client"), 1000u);
    EXPECT_FALSE(w.ledger.contract(id)->revealed_sk.has_value());
    w.conserved();
}

TEST(Contract, LockNeedsFunds) {
    World w;
    const uint64_t id = w.ledger.contract_deploy("server", w.h, w.vk, 5000, 5);
    EXPECT_EQ(w.ledger.contract_lock(id, "client"), TxStatus::kInsufficientFunds);
    EXPECT_EQ(w.ledger.contract_lock(999, "client"), TxStatus::kUnknown);
}

TEST(Htlc, ScriptTemplate) {
    HtlcScript s;
    s.hashlock.fill(0xaa);
    s.server_pk.fill(0xbb);
    s.client_pk.fill(0xcc);
    s.timeout = 500000;
    const Bytes b = s.script_bytes();
    // OP_IF OP_SHA256 <32> OP_EQUALVERIFY <32> OP_CHECKSIG OP_ELSE <3-byte locktime> CLTV DROP <32> CHECKSIG ENDIF
    ASSERT_EQ(b.size(), 2u + 33 + 1 + 33 + 2 + 4 + 2 + 33 + 2);
    EXPECT_EQ(b[0], 0x63);
    EXPECT_EQ(b[1], 0xa8);
    EXPECT_EQ(b[2], 32);
    EXPECT_EQ(b[35], 0x88);
    EXPECT_EQ(b[69], 0xac);
    EXPECT_EQ(b[70], 0x67);
    EXPECT_EQ(b[71], 3);  // 500000 = 0x07a120
    EXPECT_EQ(b[72], 0x20);
    EXPECT_EQ(b[73], 0xa1);
    EXPECT_EQ(b[74], 0x07);
    EXPECT_EQ(b[75], 0xb1);
    EXPECT_EQ(b[76], 0x75);
    EXPECT_EQ(b.back(), 0x68);
}

TEST(Htlc, SuccessPathIsTwoTransactions) {
    World w;
    HtlcScript s{sha256(sk_preimage(w.sk)), w.server.pk(), w.client.pk(), 10};
    auto id = w.ledger.htlc_fund("client", 100, s);
    ASSERT_TRUE(id.has_value());
    HtlcWitness bad{sk_preimage(w.sk + Fr::one()), w.server.sign(htlc_spend_message(*id, 1)), 1};
    EXPECT_EQ(w.ledger.htlc_spend_success(*id, bad), TxStatus::kBadPreimage);
    HtlcWitness forged{sk_preimage(w.sk), w.client.sign(htlc_spend_message(*id, 1)), 1};
    EXPECT_EQ(w.ledger.htlc_spend_success(*id, forged), TxStatus::kBadSignature);
    EXPECT_EQ(w.ledger.htlc_spend_refund(*id, {std::nullopt, w.client.sign(htlc_spend_message(*id, 0)), 0}),
              TxStatus::kTooEarly);
    HtlcWitness good{sk_preimage(w.sk), w.server.sign(htlc_spend_message(*id, 1)), 1};
    EXPECT_EQ(w.ledger.htlc_spend_success(*id, good), TxStatus::kOk);
    EXPECT_EQ(w.ledger.htlc_spend_success(*id, good), TxStatus::kWrongState);
    EXPECT_EQ(w.ledger.onchain_tx_count(), 2u);
    EXPECT_EQ(sk_from_preimage(*w.ledger.htlc(*id)->revealed_preimage), w.sk);
    EXPECT_EQ(w.ledger.balance("server"), 100u);
    w.conserved();
}

TEST(Htlc, RefundPathRevealsNothing) {
    World w;
    HtlcScript s{sha256(sk_preimage(w.sk)), w.server.pk(), w.client.pk(), 10};
    auto id = *w.ledger.htlc_fund("client", 100, s);
    w.ledger.advance_height(11);
    HtlcWitness late{sk_preimage(w.sk), w.server.sign(htlc_spend_message(id, 1)), 1};
    EXPECT_EQ(w.ledger.htlc_spend_success(id, late), TxStatus::kTooLate);
    EXPECT_EQ(w.ledger.htlc_spend_refund(id, {std::nullopt, w.server.sign(htlc_spend_message(id, 0)), 0}),
              TxStatus::kBadSignature);
    EXPECT_EQ(w.ledger.htlc_spend_refund(id, {std::nullopt, w.client.sign(htlc_spend_message(id, 0)), 0}),
              TxStatus::kOk);
    EXPECT_FALSE(w.ledger.htlc(id)->revealed_preimage.has_value());
    for (const auto& e : w.ledger.events()) EXPECT_NE(e.payload, sk_preimage(w.sk));
    EXPECT_EQ(w.ledger.balance("client"), 1000u);
    w.conserved();
}

TEST(Lightning, FulfillExpireAndReuse) {
    World w;
    auto ch = LightningChannel::open(w.ledger, "client", "server", 500);
    ASSERT_TRUE(ch.has_value());
    const Digest t = sha256(sk_preimage(w.sk));
    uint64_t a = 0;
    EXPECT_EQ(ch->add_htlc(100, t, 10, &a), TxStatus::kOk);
    EXPECT_EQ(ch->client_balance() + ch->server_balance() + ch->pending_total(), ch->capacity());
    EXPECT_EQ(ch->fulfill(a, sk_preimage(w.sk + Fr::one())), TxStatus::kBadPreimage);
    EXPECT_EQ(ch->close(), TxStatus::kPendingHtlcs);
    EXPECT_EQ(ch->fulfill(a, sk_preimage(w.sk)), TxStatus::kOk);
    EXPECT_EQ(sk_from_preimage(*ch->revealed_preimage(a)), w.sk);
    EXPECT_EQ(ch->server_balance(), 100u);

    // Second purchase on the open channel: no new chain transactions.
    const uint64_t txs = w.ledger.onchain_tx_count();
    uint64_t b = 0;
    EXPECT_EQ(ch->add_htlc(50, t, 12, &b), TxStatus::kOk);
    EXPECT_EQ(ch->fulfill(b, sk_preimage(w.sk)), TxStatus::kOk);
    EXPECT_EQ(w.ledger.onchain_tx_count(), txs);

    uint64_t c = 0;
    EXPECT_EQ(ch->add_htlc(70, sha256(as_bytes("other")), 12, &c), TxStatus::kOk);
    EXPECT_EQ(ch->expire(c), TxStatus::kTooEarly);
    w.ledger.advance_height(13);
    EXPECT_EQ(ch->expire(c), TxStatus::kOk);
    EXPECT_EQ(ch->client_balance(), 350u);
    EXPECT_EQ(ch->close(), TxStatus::kOk);
    EXPECT_EQ(w.ledger.onchain_tx_count(), 2u);
    EXPECT_EQ(w.ledger.balance("server"), 150u);
    EXPECT_EQ(w.ledger.balance("client"), 850u);
    w.conserved();
}

TEST(Lightning, AddHtlcLimits) {
    World w;
    auto ch = LightningChannel::open(w.ledger, "client", "server", 100);
    EXPECT_EQ(ch->add_htlc(101, {}, 5), TxStatus::kInsufficientFunds);
    EXPECT_EQ(ch->add_htlc(10, {}, 0), TxStatus::kTooLate);
    EXPECT_FALSE(LightningChannel::open(w.ledger, "client", "server", 5000).has_value());
}

TEST(Ledger, EventLogExport) {
    World w;
    const uint64_t id = w.ledger.contract_deploy("server", w.h, w.vk, 100, 5);
    w.ledger.contract_lock(id, "client");
    const std::string log = w.ledger.export_log();
    EXPECT_NE(log.find("\tdeploy\t"), std::string::npos);
    EXPECT_NE(log.find("\tlock\t" + to_hex(sha256({}))), std::string::npos);
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 3);  // mint, deploy, lock
}

TEST(Bridge, TransparentAndIdealBackends) {
    const G1 h = G1::generator().mul_small(11);
    const Fr sk = Fr::from_u64(99);
    const KeyBridgeStatement st{h, h * sk, veck::key_hash(sk)};
    const veck::TransparentBackend tb(veck::SessionMode::kTestOnly);
    Digest referee{};
    referee[3] = 9;
    const veck::IdealBackend ib(veck::SessionMode::kTestOnly, referee);
    for (const veck::ConsistencyBackend* b : {static_cast<const veck::ConsistencyBackend*>(&tb),
                                              static_cast<const veck::ConsistencyBackend*>(&ib)}) {
        const Bytes proof = bridge_prove(*b, st, sk);
        EXPECT_EQ(proof.size(), 32u);
        EXPECT_TRUE(bridge_verify(*b, st, proof));
        const KeyBridgeStatement wrong_t{h, h * sk, veck::key_hash(sk + Fr::one())};
        EXPECT_FALSE(bridge_verify(*b, wrong_t, bridge_prove(*b, wrong_t, sk)));
        const KeyBridgeStatement other_vk{h, h * (sk + Fr::one()), st.t};
        EXPECT_FALSE(bridge_verify(*b, other_vk, proof));  // transplant
    }
    const veck::IdealBackend prod(veck::SessionMode::kProduction, referee);
    EXPECT_FALSE(bridge_verify(prod, st, Bytes(32)));
}

TEST(Fairness, RandomInterleavingsAllRails) {
    for (Rail r : {Rail::kContract, Rail::kHtlc, Rail::kLn}) {
        const FairnessReport rep = check_rail_fairness(r, 500, 17 + static_cast<int>(r));
        EXPECT_EQ(rep.traces, 500u);
        EXPECT_EQ(rep.violations(), 0u) << to_string(r) << ": " << (rep.examples.empty() ? "" : rep.examples[0]) << " c=" << rep.client_fairness << " s=" << rep.server_fairness << " cons=" << rep.conservation << " once=" << rep.exactly_once;
        // The schedule mix reaches every outcome.
        EXPECT_GT(rep.paid_traces, 0u);
        EXPECT_GT(rep.refunded_traces, 0u);
        EXPECT_GT(rep.unpaid_traces, 0u);
    }
}
