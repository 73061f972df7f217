#include <gtest/gtest.h>

#include <algorithm>
#include <thread>

#include "fde/exchange/local.hpp"
#include "fde/payments/bridge.hpp"

using namespace fde;
using namespace fde::ex;

namespace {

Bytes random_bytes(Rng& rng, size_t n) {
    Bytes b(n);
    rng.fill(b);
    return b;
}

const kzg::Crs& crs() {
    static const kzg::Crs c = kzg::Crs::setup_dev(256, Fr::from_u64(0x5eed));
    return c;
}

const veck::IdealBackend& backend() {
    static const veck::IdealBackend b(veck::SessionMode::kTestOnly, sha256(as_bytes("referee")));
    return b;
}

/// One seller, one buyer, one chain.
struct Market {
    pay::MockLedger ledger;
    LocalChain chain{ledger};
    Bytes data;
    FileEncoding enc;
    veck::CommittedFile file;
    ServerContext server;
    ClientContext client;
    Rng server_rng = Rng::seeded(1);

    Market(Bytes bytes, Scheme scheme, pay::Rail rail)
        : data(std::move(bytes)), enc(encode_file(data)), file(veck::CommittedFile::from_data(crs(), enc.symbols)) {
        SessionConfig cfg;
        cfg.scheme = scheme;
        cfg.rail = rail;
        cfg.price = 100;
        cfg.timeout_blocks = 6;
        server.listing = {&crs(), &file, enc.byte_length, enc.tail_length};
        server.config = cfg;
        server.chain = &chain;
        server.signer = {"server", sha256(as_bytes("server-secret"))};
        server.backend = &backend();
        server.rng = &server_rng;
        client.crs = &crs();
        client.config = cfg;
        client.expected_commitment = file.commitment;
        client.chain = &chain;
        client.signer = {"client", sha256(as_bytes("client-secret"))};
        client.backend = &backend();
        ledger.mint("client", 10000);
    }

    bool key_on_chain(const Fr& sk) const {
        const Bytes want = pay::sk_preimage(sk);
        for (const auto& e : ledger.events())
            if (e.payload == want) return true;
        return false;
    }
    pay::Amount client_funds() {
        pay::Amount a = ledger.balance("client");
        return a;
    }
};

size_t position(const std::vector<std::string>& trace, const std::string& what) {
    return static_cast<size_t>(std::find(trace.begin(), trace.end(), what) - trace.begin());
}

}  // namespace

TEST(FileEncoding, Roundtrips) {
    const Bytes one{0x42};
    auto e1 = encode_file(one);
    EXPECT_EQ(e1.symbols.size(), 1u);
    EXPECT_EQ(e1.tail_length, 1);
    EXPECT_EQ(decode_file(e1, e1.symbols), one);

    Rng rng = Rng::seeded(3);
    const Bytes aligned = random_bytes(rng, 62);
    auto e2 = encode_file(aligned);
    EXPECT_EQ(e2.symbols.size(), 2u);  // no padding block
    EXPECT_EQ(e2.tail_length, 31);
    EXPECT_EQ(decode_file(e2, e2.symbols), aligned);

    const Bytes big = random_bytes(rng, 1 << 20);
    auto e3 = encode_file(big);
    EXPECT_EQ(e3.symbols.size(), (big.size() + 30) / 31);
    EXPECT_EQ(decode_file(e3, e3.symbols), big);

    EXPECT_THROW(encode_file({}), DomainError);
}

TEST(FileEncoding, RejectsCorruption) {
    auto e = encode_file(as_bytes("hello world"));
    auto bad = e.symbols;
    bad[0] = -Fr::one();  // does not fit in 31 bytes
    EXPECT_THROW(decode_file(e, bad), FormatError);
    bad = e.symbols;
    bad[0] += Fr::from_u64(1).pow(1) * Fr::from_u64(256).pow(20);  // byte 20 is padding here
    EXPECT_THROW(decode_file(e, bad), FormatError);
    EXPECT_THROW(decode_file(e.byte_length + 1, e.tail_length, e.symbols), FormatError);
}

TEST(Wire, MessagesRoundtrip) {
    Offer o;
    o.config.subset = std::vector<uint64_t>{1, 5, 9};
    o.config.scheme = Scheme::kPlus;
    o.echo = true;
    o.ell = 9;
    o.m = 7;
    o.byte_length = 300;
    o.tail_length = 21;
    o.commitment = G1::generator().mul_small(5);
    o.server_address = "srv";
    EXPECT_EQ(Offer::parse(o.serialize()), o);

    BundleEnvelope b{Scheme::kStar, Bytes{1, 2, 3}, 7, {}, Bytes{9}};
    EXPECT_EQ(BundleEnvelope::parse(b.serialize()), b);
    PayEvidence p{pay::Rail::kLn, 3, 4, "cli"};
    EXPECT_EQ(PayEvidence::parse(p.serialize()), p);
    KeyReveal k{pay::Rail::kHtlc, 8, 0};
    EXPECT_EQ(KeyReveal::parse(k.serialize()), k);
    Abort a{Reason::kRsFail, "x"};
    EXPECT_EQ(Abort::parse(a.serialize()), a);

    const WireMessage m = make_message(MsgType::kAbort, a);
    Bytes frame = m.encode();
    EXPECT_EQ(WireMessage::decode(frame), m);
    frame[0] = 2;
    EXPECT_THROW(WireMessage::decode(frame), FormatError);  // unknown version
    frame[0] = kWireVersion;
    frame[1] = 9;
    EXPECT_THROW(WireMessage::decode(frame), FormatError);
    frame[1] = 5;
    frame.pop_back();
    EXPECT_THROW(WireMessage::decode(frame), FormatError);
    EXPECT_THROW(PayEvidence::parse(Bytes{7}), FormatError);
}

TEST(Wire, FuzzedValidMessagesRoundtrip) {
    Rng rng = Rng::seeded(99);
    std::vector<G1> points;
    for (uint64_t i = 1; i <= 8; ++i) points.push_back(G1::generator().mul_small(i * 977));
    auto str = [&] {
        std::string s(rng.uniform(20), 'a');
        for (auto& c : s) c = static_cast<char>('a' + rng.uniform(26));
        return s;
    };
    auto digest = [&] {
        Digest d;
        rng.fill(d);
        return d;
    };
    for (int iter = 0; iter < 100000; ++iter) {
        const auto type = static_cast<MsgType>(1 + rng.uniform(5));
        Bytes body;
        switch (type) {
            case MsgType::kOffer: {
                Offer o;
                o.config.scheme = static_cast<Scheme>(rng.uniform(2));
                o.config.rail = static_cast<pay::Rail>(rng.uniform(3));
                o.config.beta = 1.0 + rng.unit() * 4;
                o.config.chunk_bits = 8 + static_cast<unsigned>(rng.uniform(17));
                o.config.mask_hash = static_cast<veck::MaskHash>(rng.uniform(2));
                o.config.price = 1 + rng.uniform(1 << 20);
                o.config.timeout_blocks = rng.uniform(100);
                if (rng.uniform(2)) {
                    std::vector<uint64_t> s(1 + rng.uniform(5));
                    for (auto& x : s) x = rng.next_u64();
                    o.config.subset = s;
                }
                o.crs_digest = digest();
                o.backend_id = static_cast<uint8_t>(rng.uniform(256));
                o.echo = rng.uniform(2);
                if (o.echo) {
                    o.ell = rng.next_u64();
                    o.m = rng.next_u64();
                    o.byte_length = rng.next_u64();
                    o.tail_length = static_cast<uint8_t>(rng.uniform(32));
                    o.commitment = points[rng.uniform(points.size())];
                    o.server_address = str();
                    o.server_pk = digest();
                }
                body = o.serialize();
                ASSERT_EQ(Offer::parse(body), o);
                break;
            }
            case MsgType::kBundle: {
                BundleEnvelope b{static_cast<Scheme>(rng.uniform(2)), {}, rng.next_u64(), digest(), {}};
                b.bundle.resize(rng.uniform(64));
                rng.fill(b.bundle);
                b.bridge_proof.resize(rng.uniform(40));
                rng.fill(b.bridge_proof);
                body = b.serialize();
                ASSERT_EQ(BundleEnvelope::parse(body), b);
                break;
            }
            case MsgType::kPayEvidence: {
                PayEvidence p{static_cast<pay::Rail>(rng.uniform(3)), rng.next_u64(), rng.next_u64(), str()};
                body = p.serialize();
                ASSERT_EQ(PayEvidence::parse(body), p);
                break;
            }
            case MsgType::kKeyReveal: {
                KeyReveal k{static_cast<pay::Rail>(rng.uniform(3)), rng.next_u64(), rng.next_u64()};
                body = k.serialize();
                ASSERT_EQ(KeyReveal::parse(body), k);
                break;
            }
            case MsgType::kAbort: {
                Abort a{static_cast<Reason>(rng.uniform(6)), str()};
                body = a.serialize();
                ASSERT_EQ(Abort::parse(body), a);
                break;
            }
        }
        const WireMessage m{kWireVersion, type, body};
        ASSERT_EQ(WireMessage::decode(m.encode()), m);
    }
}

TEST(Transport, PipeDetectsMutualWait) {
    auto [a, b] = make_pipe();
    std::thread t([&] { EXPECT_EQ(b->recv(std::chrono::minutes(1)).status, Received::Status::kTimeout); });
    EXPECT_EQ(a->recv(std::chrono::minutes(1)).status, Received::Status::kTimeout);
    t.join();
    a->send(make_message(MsgType::kAbort, Abort{}));
    EXPECT_EQ(b->recv(std::chrono::seconds(1)).status, Received::Status::kMessage);
    a->close();
    EXPECT_EQ(b->recv(std::chrono::seconds(1)).status, Received::Status::kClosed);
}

TEST(Transport, TcpCarriesFrames) {
    TcpListener l("127.0.0.1", 0);
    std::unique_ptr<Connection> server;
    std::thread t([&] { server = l.accept(std::chrono::seconds(5)); });
    auto client = tcp_connect("127.0.0.1", l.port());
    t.join();
    ASSERT_TRUE(server);
    const WireMessage big{kWireVersion, MsgType::kBundle, Bytes(300000, 7)};
    client->send(big);
    auto r = server->recv(std::chrono::seconds(5));
    ASSERT_EQ(r.status, Received::Status::kMessage);
    EXPECT_EQ(r.message, big);
    EXPECT_EQ(server->recv(std::chrono::milliseconds(20)).status, Received::Status::kTimeout);
    client->close();
    EXPECT_EQ(server->recv(std::chrono::seconds(1)).status, Received::Status::kClosed);
}

class Matrix : public ::testing::TestWithParam<std::tuple<Scheme, pay::Rail>> {};

TEST_P(Matrix, HonestExchangeDeliversAndPays) {
    const auto [scheme, rail] = GetParam();
    Rng rng = Rng::seeded(11);
    Market mk(random_bytes(rng, 700), scheme, rail);
    const auto r = exchange_in_process(mk.server, mk.client);
    ASSERT_EQ(r.client.outcome, ClientOutcome::kDelivered) << r.client.detail;
    EXPECT_EQ(r.server.outcome, ServerOutcome::kPaid) << r.server.detail;
    EXPECT_EQ(r.client.file, mk.data);
    const auto& tr = r.client.trace;
    EXPECT_LT(position(tr, "verify_ct"), position(tr, "pay"));
    EXPECT_LT(position(tr, "verify_key"), position(tr, "pay"));
    if (rail == pay::Rail::kLn) {
        // Still in the channel; settle to see it on chain.
        EXPECT_EQ(mk.chain.ln_close(*r.client.ln_channel), pay::TxStatus::kOk);
    }
    EXPECT_EQ(mk.ledger.balance("server"), 100u);
    EXPECT_EQ(mk.ledger.balance("client"), 9900u);
    EXPECT_EQ(mk.ledger.holdings(), mk.ledger.supply());
}

TEST_P(Matrix, TamperedBundleAbortsBeforePayment) {
    const auto [scheme, rail] = GetParam();
    for (auto fault : {ServerFault::kTamperCiphertext, ServerFault::kTamperProof}) {
        Rng rng = Rng::seeded(12);
        Market mk(random_bytes(rng, 400), scheme, rail);
        mk.server.fault = fault;
        const auto r = exchange_in_process(mk.server, mk.client);
        EXPECT_EQ(r.client.outcome, ClientOutcome::kAborted);
        EXPECT_EQ(r.client.reason, Reason::kVerCtFail);
        EXPECT_EQ(r.server.outcome, ServerOutcome::kAborted);
        EXPECT_EQ(r.server.reason, Reason::kVerCtFail);
        EXPECT_EQ(position(r.client.trace, "pay"), r.client.trace.size());
        EXPECT_EQ(mk.ledger.balance("client"), 10000u);
        EXPECT_FALSE(mk.key_on_chain(*r.server.sk));
    }
}

TEST_P(Matrix, RailBoundToOtherKeyAborts) {
    const auto [scheme, rail] = GetParam();
    Rng rng = Rng::seeded(13);
    Market mk(random_bytes(rng, 200), scheme, rail);
    mk.server.fault = ServerFault::kMismatchedRailKey;
    const auto r = exchange_in_process(mk.server, mk.client);
    EXPECT_EQ(r.client.outcome, ClientOutcome::kAborted);
    EXPECT_EQ(r.client.reason, Reason::kVerKeyFail);
    EXPECT_EQ(mk.ledger.balance("client"), 10000u);
}

TEST_P(Matrix, WithheldKeyIsRefunded) {
    const auto [scheme, rail] = GetParam();
    for (auto fault : {ServerFault::kNeverReveal, ServerFault::kRevealWrongKey, ServerFault::kHangUpAfterBundle}) {
        Rng rng = Rng::seeded(14);
        Market mk(random_bytes(rng, 200), scheme, rail);
        mk.server.fault = fault;
        const auto r = exchange_in_process(mk.server, mk.client);
        EXPECT_EQ(r.client.outcome, ClientOutcome::kRefunded) << r.client.detail;
        EXPECT_EQ(r.client.reason, Reason::kTimeout);
        EXPECT_NE(r.server.outcome, ServerOutcome::kPaid);
        EXPECT_FALSE(mk.key_on_chain(*r.server.sk));
        if (rail == pay::Rail::kLn) EXPECT_EQ(mk.chain.ln_close(*r.client.ln_channel), pay::TxStatus::kOk);
        EXPECT_EQ(mk.ledger.balance("client"), 10000u);
        EXPECT_EQ(mk.ledger.balance("server"), 0u);
    }
}

TEST_P(Matrix, ClientFaults) {
    const auto [scheme, rail] = GetParam();
    Rng rng = Rng::seeded(15);
    {
        Market mk(random_bytes(rng, 100), scheme, rail);
        mk.client.fault = ClientFault::kWalkAway;
        const auto r = exchange_in_process(mk.server, mk.client);
        EXPECT_EQ(r.client.outcome, ClientOutcome::kWalkedAway);
        EXPECT_EQ(r.server.outcome, ServerOutcome::kUnpaid);
        EXPECT_FALSE(mk.key_on_chain(*r.server.sk));
        EXPECT_EQ(mk.ledger.balance("client"), 10000u);
    }
    {
        Market mk(random_bytes(rng, 100), scheme, rail);
        mk.client.fault = ClientFault::kWithholdEvidence;
        const auto r = exchange_in_process(mk.server, mk.client);
        EXPECT_EQ(r.client.outcome, ClientOutcome::kRefunded);
        EXPECT_EQ(r.server.outcome, ServerOutcome::kUnpaid);
        EXPECT_EQ(r.server.reason, Reason::kTimeout);
    }
}

TEST_P(Matrix, NegotiationMismatchAbortsEarly) {
    const auto [scheme, rail] = GetParam();
    Rng rng = Rng::seeded(16);
    Market mk(random_bytes(rng, 100), scheme, rail);
    mk.client.config.price = 99;
    auto r = exchange_in_process(mk.server, mk.client);
    EXPECT_EQ(r.client.outcome, ClientOutcome::kAborted);
    EXPECT_EQ(r.client.reason, Reason::kNegotiation);
    EXPECT_EQ(r.server.reason, Reason::kNegotiation);

    Market other(random_bytes(rng, 100), scheme, rail);
    other.client.expected_commitment = G1::generator();
    r = exchange_in_process(other.server, other.client);
    EXPECT_EQ(r.client.reason, Reason::kNegotiation);
    EXPECT_EQ(other.ledger.balance("client"), 10000u);
}

INSTANTIATE_TEST_SUITE_P(Exchange, Matrix,
                         ::testing::Combine(::testing::Values(Scheme::kPlus, Scheme::kStar),
                                            ::testing::Values(pay::Rail::kContract, pay::Rail::kHtlc,
                                                              pay::Rail::kLn)),
                         [](const auto& info) {
                             return std::string(std::get<0>(info.param) == Scheme::kPlus ? "Plus" : "Star") +
                                    pay::to_string(std::get<1>(info.param));
                         });

TEST(Exchange, SubsetPurchase) {
    Rng rng = Rng::seeded(21);
    Market mk(random_bytes(rng, 31 * 40 + 5), Scheme::kPlus, pay::Rail::kHtlc);
    const std::vector<uint64_t> s{2, 7, 40};
    mk.client.config.subset = s;
    const auto r = exchange_in_process(mk.server, mk.client);
    ASSERT_EQ(r.client.outcome, ClientOutcome::kDelivered) << r.client.detail;
    Bytes want;
    for (uint64_t i : s) {
        const size_t len = i == 40 ? 5 : 31;
        want.insert(want.end(), mk.data.begin() + static_cast<ptrdiff_t>(31 * i),
                    mk.data.begin() + static_cast<ptrdiff_t>(31 * i + len));
    }
    EXPECT_EQ(r.client.file, want);

    Market star(random_bytes(rng, 100), Scheme::kStar, pay::Rail::kHtlc);
    star.client.config.subset = s;
    EXPECT_THROW(exchange_in_process(star.server, star.client), DomainError);
}

TEST(Exchange, RepeatPurchaseOnChannelNeedsNoChainTransactions) {
    Rng rng = Rng::seeded(22);
    Market mk(random_bytes(rng, 300), Scheme::kStar, pay::Rail::kLn);
    auto r1 = exchange_in_process(mk.server, mk.client);
    ASSERT_EQ(r1.client.outcome, ClientOutcome::kDelivered);
    const uint64_t txs = mk.ledger.onchain_tx_count();
    EXPECT_EQ(txs, 1u);  // channel funding
    mk.client.ln_channel = r1.client.ln_channel;
    auto r2 = exchange_in_process(mk.server, mk.client);
    ASSERT_EQ(r2.client.outcome, ClientOutcome::kDelivered);
    EXPECT_EQ(mk.ledger.onchain_tx_count(), txs);
    EXPECT_EQ(mk.chain.ln_balances(*r1.client.ln_channel)->second, 200u);
}

TEST(Exchange, CorruptionBeforeProofIsCaughtOrCorrected) {
    for (Scheme scheme : {Scheme::kPlus, Scheme::kStar}) {
        // A larger code so the sample does not cover every position.
        Rng rng = Rng::seeded(23);
        Market mk(random_bytes(rng, 31 * 120), scheme, pay::Rail::kContract);
        mk.server.config.beta = mk.client.config.beta = 1.5;
        int delivered = 0, caught = 0;
        for (int i = 0; i < 4; ++i) {
            mk.server.fault = ServerFault::kCorruptBeforeProof;
            const auto r = exchange_in_process(mk.server, mk.client);
            if (r.client.outcome == ClientOutcome::kDelivered) {
                ++delivered;
                EXPECT_EQ(r.client.file, mk.data);
                EXPECT_FALSE(r.client.decode.detector_clean);
            } else {
                ++caught;
                EXPECT_EQ(r.client.reason, Reason::kVerCtFail);
            }
        }
        EXPECT_EQ(delivered + caught, 4);
    }
}

TEST(Exchange, RandomWireFaultsStayAtomic) {
    Rng rng = Rng::seeded(31);
    for (Scheme scheme : {Scheme::kPlus, Scheme::kStar}) {
        for (pay::Rail rail : {pay::Rail::kContract, pay::Rail::kHtlc, pay::Rail::kLn}) {
            for (int run = 0; run < 20; ++run) {
                Market mk(random_bytes(rng, 1 + rng.uniform(120)), scheme, rail);
                FaultPlan sp, cp;
                auto pick = [&](FaultPlan& p) {
                    switch (rng.uniform(4)) {
                        case 0: p.drop_index = static_cast<int>(rng.uniform(3)); break;
                        case 1:
                            p.flip_index = static_cast<int>(rng.uniform(3));
                            p.flip_offset = rng.uniform(1 << 20);
                            p.flip_mask = static_cast<uint8_t>(1u << rng.uniform(8));
                            break;
                        case 2: p.close_index = static_cast<int>(rng.uniform(3)); break;
                        default: break;
                    }
                };
                pick(sp);
                pick(cp);
                const auto r = exchange_in_process(mk.server, mk.client, sp, cp);
                const auto& c = r.client;
                const bool leaked = r.server.sk && mk.key_on_chain(*r.server.sk);
                if (c.ln_channel) mk.chain.ln_close(*c.ln_channel);
                const auto client_bal = mk.ledger.balance("client");
                const auto server_bal = mk.ledger.balance("server");
                switch (c.outcome) {
                    case ClientOutcome::kDelivered:
                        EXPECT_EQ(c.file, mk.data);
                        EXPECT_EQ(server_bal, 100u);
                        EXPECT_EQ(client_bal, 9900u);
                        break;
                    case ClientOutcome::kAborted:
                    case ClientOutcome::kWalkedAway:
                    case ClientOutcome::kRefunded:
                        EXPECT_FALSE(leaked);
                        EXPECT_EQ(server_bal, 0u);
                        EXPECT_EQ(client_bal, 10000u);
                        break;
                    case ClientOutcome::kPaidNotDelivered: ADD_FAILURE() << c.detail; break;
                }
                EXPECT_EQ(mk.ledger.holdings(), mk.ledger.supply());
            }
        }
    }
}
