#include "fde/exchange/session.hpp"

#include <numeric>

#include "fde/payments/bridge.hpp"

namespace fde::ex {

using Clock = std::chrono::steady_clock;
using pay::Rail;
using pay::TxStatus;

const char* to_string(ServerOutcome o) {
    switch (o) {
        case ServerOutcome::kPaid: return "paid";
        case ServerOutcome::kUnpaid: return "unpaid";
        case ServerOutcome::kAborted: return "aborted";
    }
    return "?";
}

const char* to_string(ClientOutcome o) {
    switch (o) {
        case ClientOutcome::kDelivered: return "delivered";
        case ClientOutcome::kAborted: return "aborted";
        case ClientOutcome::kRefunded: return "refunded";
        case ClientOutcome::kWalkedAway: return "walked-away";
        case ClientOutcome::kPaidNotDelivered: return "paid-not-delivered";
    }
    return "?";
}

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool needs_backend(const SessionConfig& c) { return c.scheme == Scheme::kStar || c.rail != Rail::kContract; }

rs::CodeParams code_for(const SessionConfig& c, uint64_t ell) {
    return rs::CodeParams::from_beta(c.subset ? c.subset->size() : ell, c.beta);
}

bool same_terms(const SessionConfig& a, const SessionConfig& b) {
    SessionConfig x = a, y = b;
    x.subset.reset();
    y.subset.reset();
    return x == y;
}

void send_abort(Connection& conn, Reason r, const std::string& detail) {
    try {
        conn.send(make_message(MsgType::kAbort, Abort{r, detail}));
    } catch (const TransportError&) {
    }
}

std::optional<Abort> as_abort(const Received& in) {
    if (in.status != Received::Status::kMessage || in.message.type != MsgType::kAbort) return std::nullopt;
    try {
        return Abort::parse(in.message.body);
    } catch (const FormatError&) {
        return Abort{Reason::kNone, "malformed abort"};
    }
}

Bytes symbols_to_bytes(const Offer& offer, std::span<const Fr> symbols) {
    if (!offer.config.subset) return decode_file(offer.byte_length, offer.tail_length, symbols);
    Bytes out;
    const auto& s = *offer.config.subset;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == offer.ell) {
            const Bytes tail = decode_file(offer.tail_length, offer.tail_length, symbols.subspan(i, 1));
            out.insert(out.end(), tail.begin(), tail.end());
        } else {
            const Bytes b = unpack_symbols(symbols.subspan(i, 1));
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    return out;
}

// ------------------------------------------------------------------ server

class ServerSession {
  public:
    ServerSession(const ServerContext& ctx, Connection& conn)
        : ctx_(ctx), conn_(conn), rng_(ctx.rng ? *ctx.rng : os_rng_) {}

    ServerReport run() {
        try {
            body();
        } catch (const TransportError& e) {
            if (rep_.outcome != ServerOutcome::kPaid) {
                rep_.outcome = ServerOutcome::kUnpaid;
                rep_.reason = Reason::kTimeout;
            }
            rep_.detail = e.what();
        }
        rep_.bytes_sent = conn_.bytes_sent();
        rep_.bytes_received = conn_.bytes_received();
        return rep_;
    }

  private:
    void fail(ServerOutcome o, Reason r, std::string detail, bool tell_peer) {
        if (tell_peer) send_abort(conn_, r, detail);
        rep_.outcome = o;
        rep_.reason = r;
        rep_.detail = std::move(detail);
    }

    /// Returns false (with the report filled in) on anything but a message
    /// of the expected type.
    bool expect(MsgType type, Received& in) {
        in = conn_.recv(ctx_.wait);
        if (in.status != Received::Status::kMessage) {
            fail(ServerOutcome::kUnpaid, Reason::kTimeout, "no message from client", false);
            return false;
        }
        if (auto a = as_abort(in)) {
            fail(ServerOutcome::kAborted, a->reason, "client aborted: " + a->detail, false);
            return false;
        }
        if (in.message.type != type) {
            fail(ServerOutcome::kAborted, Reason::kNegotiation,
                 std::string("expected ") + to_string(type) + ", got " + to_string(in.message.type), true);
            return false;
        }
        return true;
    }

    void body() {
        const auto& crs = *ctx_.listing.crs;
        const auto& file = *ctx_.listing.file;
        Received in;
        if (!expect(MsgType::kOffer, in)) return;

        Offer req;
        try {
            req = Offer::parse(in.message.body);
            req.config.validate();
        } catch (const std::exception& e) {
            return fail(ServerOutcome::kAborted, Reason::kNegotiation, std::string("bad offer: ") + e.what(), true);
        }
        std::string mismatch;
        if (req.echo) mismatch = "request marked as answer";
        else if (!same_terms(req.config, ctx_.config)) mismatch = "session parameters differ";
        else if (req.crs_digest != crs.digest()) mismatch = "crs differs";
        else if (req.sk_encoding != kSkEncodingLe32) mismatch = "unsupported key encoding";
        else if (needs_backend(req.config) && (!ctx_.backend || req.backend_id != ctx_.backend->id()))
            mismatch = "proof backend differs";
        else if (req.config.subset && req.config.subset->back() > file.ell()) mismatch = "subset outside the file";
        if (!mismatch.empty()) return fail(ServerOutcome::kAborted, Reason::kNegotiation, mismatch, true);

        const SessionConfig& cfg = req.config;
        rep_.agreed = cfg;
        const rs::CodeParams code = code_for(cfg, file.ell());
        if (veck::sample_size(code.m, cfg.beta) > crs.degree() || file.ell() > crs.degree())
            return fail(ServerOutcome::kAborted, Reason::kNegotiation, "crs too small for this file", true);

        Offer echo = req;
        echo.echo = true;
        echo.backend_id = ctx_.backend ? ctx_.backend->id() : 0;
        echo.ell = file.ell();
        echo.m = code.m;
        echo.byte_length = ctx_.listing.byte_length;
        echo.tail_length = ctx_.listing.tail_length;
        echo.commitment = file.commitment;
        echo.server_address = ctx_.signer.address;
        echo.server_pk = ctx_.signer.pk();
        conn_.send(make_message(MsgType::kOffer, echo));
        ctx_.chain->register_signer(ctx_.signer);

        const veck::VeckParams pp = veck::gen(crs, code.m, cfg.chunk_bits, ctx_.pp_seed);
        const veck::Keypair key = veck::Keypair::generate(pp, rng_);
        rep_.sk = key.sk;

        BundleEnvelope env;
        env.scheme = cfg.scheme;
        env.bundle = make_bundle(crs, file, cfg, code, pp, key);

        const Fr bound_sk = ctx_.fault == ServerFault::kMismatchedRailKey ? key.sk + Fr::one() : key.sk;
        if (cfg.rail == Rail::kContract) {
            env.contract_id = ctx_.chain->contract_deploy(ctx_.signer.address, pp.h, pp.h * bound_sk, cfg.price,
                                                          cfg.timeout_blocks);
        } else {
            env.key_hash = veck::key_hash(bound_sk);
            env.bridge_proof = pay::bridge_prove(*ctx_.backend, {pp.h, key.vk, env.key_hash}, key.sk);
        }
        rep_.contract_id = env.contract_id;
        rep_.key_hash = env.key_hash;
        conn_.send(make_message(MsgType::kBundle, env));
        if (ctx_.fault == ServerFault::kHangUpAfterBundle) {
            conn_.close();
            return fail(ServerOutcome::kUnpaid, Reason::kNone, "hung up after the bundle", false);
        }

        if (!expect(MsgType::kPayEvidence, in)) return;
        PayEvidence ev;
        try {
            ev = PayEvidence::parse(in.message.body);
        } catch (const FormatError&) {
            return fail(ServerOutcome::kUnpaid, Reason::kNegotiation, "malformed payment evidence", true);
        }
        rep_.evidence = ev;
        if (!payment_in_place(cfg, env, ev))
            return fail(ServerOutcome::kUnpaid, Reason::kNegotiation, "payment evidence does not check out", true);

        if (ctx_.fault == ServerFault::kNeverReveal) {
            conn_.close();
            return fail(ServerOutcome::kUnpaid, Reason::kNone, "withheld the key", false);
        }
        const Fr reveal = ctx_.fault == ServerFault::kRevealWrongKey ? key.sk + Fr::one() : key.sk;
        const TxStatus st = claim(cfg.rail, env, ev, reveal);
        if (st != TxStatus::kOk) {
            conn_.close();
            return fail(ServerOutcome::kUnpaid, Reason::kNone, std::string("claim failed: ") + pay::to_string(st),
                        false);
        }
        rep_.outcome = ServerOutcome::kPaid;
        rep_.reason = Reason::kNone;
        try {
            conn_.send(make_message(MsgType::kKeyReveal, KeyReveal{cfg.rail, ev.object, ev.htlc}));
        } catch (const TransportError&) {
        }
    }

    Bytes make_bundle(const kzg::Crs& crs, const veck::CommittedFile& file, const SessionConfig& cfg,
                      const rs::CodeParams& code, const veck::VeckParams& pp, const veck::Keypair& key) {
        const auto fault = ctx_.fault;
        if (cfg.scheme == Scheme::kStar) {
            auto t0 = Clock::now();
            const auto codeword = rs::rs_extend<Fr>(code, file.data).symbols;
            auto masked = veck::star_mask(codeword, key.sk, cfg.mask_hash);
            if (fault == ServerFault::kCorruptBeforeProof) masked[rng_.uniform(code.m)] += Fr::one();
            rep_.times.enc_ms = ms_since(t0);
            t0 = Clock::now();
            auto bundle = veck::star_prove(crs, pp, file, code, *ctx_.backend, key, codeword, std::move(masked), rng_,
                                           cfg.mask_hash);
            rep_.times.prove_ms = ms_since(t0);
            if (fault == ServerFault::kTamperCiphertext) bundle.masked[rng_.uniform(code.m)] += Fr::one();
            if (fault == ServerFault::kTamperProof) {
                if (rng_.uniform(2) == 0 || bundle.proof.pi_z.empty())
                    bundle.proof.pi_r.z_sk += Fr::one();
                else
                    bundle.proof.pi_z[rng_.uniform(bundle.proof.pi_z.size())] ^= 1;
            }
            return bundle.serialize();
        }

        veck::PlusBundle bundle;
        if (cfg.subset) {
            const auto t0 = Clock::now();
            bundle = veck::plus_enc_subset(crs, pp, file, *cfg.subset, cfg.beta, key, rng_).bundle;
            rep_.times.prove_ms = ms_since(t0);
        } else {
            auto t0 = Clock::now();
            const auto codeword = rs::rs_extend<Fr>(code, file.data).symbols;
            auto ct = veck::plus_encrypt(pp, codeword, key);
            if (fault == ServerFault::kCorruptBeforeProof) {
                const uint64_t i = rng_.uniform(code.m);
                ct[i] = veck::encrypt_symbol(pp, key.sk, static_cast<int64_t>(i), codeword[i] + Fr::one());
            }
            rep_.times.enc_ms = ms_since(t0);
            t0 = Clock::now();
            bundle = veck::plus_prove_full(crs, pp, file, code, key, std::move(ct), rng_);
            rep_.times.prove_ms = ms_since(t0);
        }
        if (fault == ServerFault::kTamperCiphertext) {
            const uint64_t i = rng_.uniform(bundle.ct.size());
            bundle.ct[i] = veck::encrypt_symbol(pp, key.sk, bundle.ct[i].index, Fr::random(rng_));
        }
        if (fault == ServerFault::kTamperProof) bundle.pi_r.z_sk += Fr::one();
        return bundle.serialize();
    }

    bool payment_in_place(const SessionConfig& cfg, const BundleEnvelope& env, const PayEvidence& ev) {
        if (ev.rail != cfg.rail) return false;
        Chain& chain = *ctx_.chain;
        switch (cfg.rail) {
            case Rail::kContract: {
                if (ev.object != env.contract_id) return false;
                auto c = chain.contract(ev.object);
                return c && c->status == pay::ContractStatus::kLocked && c->price == cfg.price &&
                       c->server == ctx_.signer.address;
            }
            case Rail::kHtlc: {
                auto o = chain.htlc(ev.object);
                return o && o->status == pay::OutputStatus::kUnspent && o->amount >= cfg.price &&
                       o->script.hashlock == env.key_hash && o->script.server_pk == ctx_.signer.pk() &&
                       o->script.timeout > chain.height();
            }
            case Rail::kLn: {
                auto p = chain.ln_pending(ev.object, ev.htlc);
                return p && p->amount >= cfg.price && p->hashlock == env.key_hash && p->expiry > chain.height();
            }
        }
        return false;
    }

    TxStatus claim(Rail rail, const BundleEnvelope& env, const PayEvidence& ev, const Fr& sk) {
        Chain& chain = *ctx_.chain;
        switch (rail) {
            case Rail::kContract: return chain.contract_claim(env.contract_id, sk);
            case Rail::kHtlc:
                return chain.htlc_spend_success(
                    ev.object, {pay::sk_preimage(sk), ctx_.signer.sign(pay::htlc_spend_message(ev.object, 1)), 1});
            case Rail::kLn: return chain.ln_fulfill(ev.object, ev.htlc, pay::sk_preimage(sk));
        }
        return TxStatus::kUnknown;
    }

    const ServerContext& ctx_;
    Connection& conn_;
    Rng os_rng_;
    Rng& rng_;
    ServerReport rep_;
};

// ------------------------------------------------------------------ client

class ClientSession {
  public:
    ClientSession(const ClientContext& ctx, Connection& conn) : ctx_(ctx), conn_(conn) {}

    ClientReport run() {
        try {
            body();
        } catch (const TransportError& e) {
            // Only reachable before payment: later sends swallow the error.
            rep_.outcome = ClientOutcome::kAborted;
            rep_.reason = Reason::kTimeout;
            rep_.detail = e.what();
        }
        rep_.bytes_sent = conn_.bytes_sent();
        rep_.bytes_received = conn_.bytes_received();
        return rep_;
    }

  private:
    void abort(Reason r, std::string detail) {
        send_abort(conn_, r, detail);
        rep_.outcome = ClientOutcome::kAborted;
        rep_.reason = r;
        rep_.detail = std::move(detail);
    }

    bool expect(MsgType type, Received& in) {
        in = conn_.recv(ctx_.wait);
        if (in.status != Received::Status::kMessage) {
            rep_.outcome = ClientOutcome::kAborted;
            rep_.reason = Reason::kTimeout;
            rep_.detail = "no message from server";
            return false;
        }
        if (auto a = as_abort(in)) {
            rep_.outcome = ClientOutcome::kAborted;
            rep_.reason = a->reason;
            rep_.detail = "server aborted: " + a->detail;
            return false;
        }
        if (in.message.type != type) {
            abort(Reason::kNegotiation, std::string("expected ") + to_string(type));
            return false;
        }
        return true;
    }

    void body() {
        const auto& crs = *ctx_.crs;
        const SessionConfig& cfg = ctx_.config;
        cfg.validate();
        if (needs_backend(cfg) && !ctx_.backend) throw DomainError("this session needs a proof backend");

        Offer req;
        req.config = cfg;
        req.crs_digest = crs.digest();
        req.backend_id = ctx_.backend ? ctx_.backend->id() : 0;
        conn_.send(make_message(MsgType::kOffer, req));
        rep_.trace.push_back("offer");

        Received in;
        if (!expect(MsgType::kOffer, in)) return;
        Offer echo;
        try {
            echo = Offer::parse(in.message.body);
        } catch (const FormatError& e) {
            return abort(Reason::kNegotiation, std::string("bad offer: ") + e.what());
        }
        rep_.offer = echo;
        if (const std::string why = check_echo(req, echo); !why.empty()) return abort(Reason::kNegotiation, why);
        const rs::CodeParams code = code_for(cfg, echo.ell);

        if (!expect(MsgType::kBundle, in)) return;
        BundleEnvelope env;
        try {
            env = BundleEnvelope::parse(in.message.body);
        } catch (const FormatError& e) {
            return abort(Reason::kVerCtFail, std::string("malformed bundle: ") + e.what());
        }
        if (env.scheme != cfg.scheme) return abort(Reason::kVerCtFail, "bundle for another scheme");

        const veck::VeckParams pp = veck::gen(crs, code.m, cfg.chunk_bits, ctx_.pp_seed);
        std::optional<veck::StarBundle> star;
        std::optional<veck::PlusBundle> plus;
        G1 vk;
        {
            const auto t0 = Clock::now();
            std::string diag;
            bool ok = false;
            try {
                if (cfg.scheme == Scheme::kStar) {
                    star = veck::StarBundle::parse(env.bundle);
                    vk = star->vk;
                    ok = veck::star_ver(crs, pp, echo.commitment, code, *star, ctx_.backend, &diag);
                } else {
                    plus = veck::PlusBundle::parse(env.bundle);
                    vk = plus->vk;
                    if (cfg.subset)
                        ok = plus->is_subset() &&
                             veck::plus_ver_subset(crs, pp, echo.commitment, *cfg.subset, cfg.beta, *plus);
                    else
                        ok = !plus->is_subset() && veck::plus_ver_full(crs, pp, echo.commitment, code, *plus);
                }
            } catch (const std::exception& e) {
                diag = e.what();
                ok = false;
            }
            rep_.times.verify_ms = ms_since(t0);
            if (!ok) return abort(Reason::kVerCtFail, diag.empty() ? "bundle rejected" : diag);
        }
        rep_.trace.push_back("verify_ct");

        if (!key_bound(cfg, echo, env, pp, vk)) return abort(Reason::kVerKeyFail, "rail is not bound to the key");
        rep_.trace.push_back("verify_key");

        if (ctx_.fault == ClientFault::kWalkAway) {
            conn_.close();
            rep_.outcome = ClientOutcome::kWalkedAway;
            return;
        }

        PayEvidence ev;
        if (!pay(cfg, echo, env, ev)) return;
        rep_.trace.push_back("pay");
        if (ctx_.fault != ClientFault::kWithholdEvidence) {
            try {
                conn_.send(make_message(MsgType::kPayEvidence, ev));
            } catch (const TransportError&) {
            }
        }

        // Whatever arrives, the key is read from the rail.
        (void)conn_.recv(ctx_.wait);
        std::optional<Fr> sk = read_key(cfg.rail, ev);
        if (!sk) {
            if (refund(cfg.rail, ev)) {
                rep_.outcome = ClientOutcome::kRefunded;
                rep_.reason = Reason::kTimeout;
                rep_.detail = "key not revealed before the timeout";
                return;
            }
            sk = read_key(cfg.rail, ev);
            if (!sk) {
                rep_.outcome = ClientOutcome::kPaidNotDelivered;
                rep_.reason = Reason::kTimeout;
                rep_.detail = "refund failed and no key on the rail";
                return;
            }
        }
        rep_.trace.push_back("key");
        if (!veck::ver_key(pp, vk, *sk)) {
            rep_.outcome = ClientOutcome::kPaidNotDelivered;
            rep_.reason = Reason::kVerKeyFail;
            rep_.detail = "revealed key does not match vk";
            return;
        }

        const auto t0 = Clock::now();
        std::vector<uint64_t> targets;
        if (cfg.subset) {
            targets = *cfg.subset;
        } else {
            targets.resize(code.ell + 1);
            std::iota(targets.begin(), targets.end(), 0);
        }
        std::optional<std::vector<Fr>> symbols;
        if (star)
            symbols = veck::star_dec(code, *sk, star->masked, targets, cfg.mask_hash, &rep_.decode);
        else
            symbols = veck::plus_dec(pp, code, *sk, plus->ct, targets, &rep_.decode);
        if (symbols) {
            try {
                rep_.file = symbols_to_bytes(echo, *symbols);
            } catch (const FormatError&) {
                symbols.reset();
            }
        }
        rep_.times.dec_ms = ms_since(t0);
        if (!symbols) {
            rep_.outcome = ClientOutcome::kPaidNotDelivered;
            rep_.reason = Reason::kRsFail;
            rep_.detail = "decoding failed";
            return;
        }
        rep_.trace.push_back("decode");
        rep_.outcome = ClientOutcome::kDelivered;
    }

    std::string check_echo(const Offer& req, const Offer& echo) const {
        if (!echo.echo) return "answer not marked as such";
        if (!(echo.config == req.config)) return "server changed the session parameters";
        if (echo.crs_digest != req.crs_digest) return "crs differs";
        if (echo.sk_encoding != kSkEncodingLe32) return "unsupported key encoding";
        if (needs_backend(req.config) && echo.backend_id != req.backend_id) return "proof backend differs";
        if (echo.tail_length == 0 || echo.tail_length > kBytesPerSymbol ||
            echo.byte_length != echo.ell * kBytesPerSymbol + echo.tail_length)
            return "inconsistent file length";
        if (req.config.subset && req.config.subset->back() > echo.ell) return "subset outside the file";
        const rs::CodeParams code = code_for(req.config, echo.ell);
        if (echo.m != code.m) return "unexpected codeword length";
        if (veck::sample_size(code.m, req.config.beta) > ctx_.crs->degree()) return "crs too small";
        if (ctx_.expected_commitment && !(echo.commitment == *ctx_.expected_commitment))
            return "unexpected file commitment";
        if (echo.server_address.empty()) return "missing server address";
        return {};
    }

    bool key_bound(const SessionConfig& cfg, const Offer& echo, const BundleEnvelope& env,
                   const veck::VeckParams& pp, const G1& vk) const {
        if (cfg.rail == Rail::kContract) {
            auto c = ctx_.chain->contract(env.contract_id);
            return c && c->status == pay::ContractStatus::kOpen && c->h == pp.h && c->vk == vk &&
                   c->price == cfg.price && c->server == echo.server_address &&
                   c->timeout_blocks == cfg.timeout_blocks;
        }
        return pay::bridge_verify(*ctx_.backend, {pp.h, vk, env.key_hash}, env.bridge_proof);
    }

    bool pay(const SessionConfig& cfg, const Offer& echo, const BundleEnvelope& env, PayEvidence& ev) {
        Chain& chain = *ctx_.chain;
        chain.register_signer(ctx_.signer);
        ev.rail = cfg.rail;
        ev.client_address = ctx_.signer.address;
        TxStatus st = TxStatus::kOk;
        switch (cfg.rail) {
            case Rail::kContract:
                ev.object = env.contract_id;
                st = chain.contract_lock(env.contract_id, ctx_.signer.address);
                break;
            case Rail::kHtlc: {
                pay::HtlcScript script{env.key_hash, echo.server_pk, ctx_.signer.pk(),
                                       chain.height() + cfg.timeout_blocks};
                auto id = chain.htlc_fund(ctx_.signer.address, cfg.price, script);
                if (id) ev.object = *id;
                else st = TxStatus::kInsufficientFunds;
                break;
            }
            case Rail::kLn: {
                auto channel = ctx_.ln_channel;
                if (!channel) {
                    const pay::Amount cap = ctx_.ln_capacity ? ctx_.ln_capacity : 10 * cfg.price;
                    channel = chain.ln_open(ctx_.signer.address, echo.server_address, cap);
                }
                if (!channel) {
                    st = TxStatus::kInsufficientFunds;
                    break;
                }
                rep_.ln_channel = channel;
                ev.object = *channel;
                st = chain.ln_add(*channel, cfg.price, env.key_hash, chain.height() + cfg.timeout_blocks, &ev.htlc);
                break;
            }
        }
        if (st != TxStatus::kOk) {
            abort(Reason::kNegotiation, std::string("payment failed: ") + pay::to_string(st));
            return false;
        }
        return true;
    }

    std::optional<Fr> read_key(Rail rail, const PayEvidence& ev) const {
        Chain& chain = *ctx_.chain;
        switch (rail) {
            case Rail::kContract: {
                auto c = chain.contract(ev.object);
                return c ? c->revealed_sk : std::nullopt;
            }
            case Rail::kHtlc: {
                auto o = chain.htlc(ev.object);
                if (!o || !o->revealed_preimage) return std::nullopt;
                return pay::sk_from_preimage(*o->revealed_preimage);
            }
            case Rail::kLn: {
                auto p = chain.ln_preimage(ev.object, ev.htlc);
                if (!p) return std::nullopt;
                return pay::sk_from_preimage(*p);
            }
        }
        return std::nullopt;
    }

    /// Waits out the rail timeout and reclaims the payment.
    bool refund(Rail rail, const PayEvidence& ev) {
        Chain& chain = *ctx_.chain;
        switch (rail) {
            case Rail::kContract: {
                auto c = chain.contract(ev.object);
                if (!c) return false;
                chain.wait_until(c->timeout_height + 1);
                return chain.contract_refund(ev.object) == TxStatus::kOk;
            }
            case Rail::kHtlc: {
                auto o = chain.htlc(ev.object);
                if (!o) return false;
                chain.wait_until(o->script.timeout + 1);
                pay::HtlcWitness w{std::nullopt, ctx_.signer.sign(pay::htlc_spend_message(ev.object, 0)), 0};
                return chain.htlc_spend_refund(ev.object, w) == TxStatus::kOk;
            }
            case Rail::kLn: {
                auto p = chain.ln_pending(ev.object, ev.htlc);
                if (!p) return false;
                chain.wait_until(p->expiry + 1);
                return chain.ln_expire(ev.object, ev.htlc) == TxStatus::kOk;
            }
        }
        return false;
    }

    const ClientContext& ctx_;
    Connection& conn_;
    ClientReport rep_;
};

}  // namespace

ServerReport run_server(const ServerContext& ctx, Connection& conn) { return ServerSession(ctx, conn).run(); }

ClientReport run_client(const ClientContext& ctx, Connection& conn) { return ClientSession(ctx, conn).run(); }

}  // namespace fde::ex
