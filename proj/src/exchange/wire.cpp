#include "fde/exchange/wire.hpp"

#include <bit>
#include <cmath>

namespace fde::ex {

const char* to_string(Scheme s) { return s == Scheme::kPlus ? "veck+" : "veck*"; }

std::optional<Scheme> scheme_from_string(std::string_view s) {
    if (s == "veck+" || s == "plus" || s == "VECK_PLUS") return Scheme::kPlus;
    if (s == "veck*" || s == "star" || s == "VECK_STAR") return Scheme::kStar;
    return std::nullopt;
}

const char* to_string(MsgType t) {
    switch (t) {
        case MsgType::kOffer: return "OFFER";
        case MsgType::kBundle: return "BUNDLE";
        case MsgType::kPayEvidence: return "PAY_EVIDENCE";
        case MsgType::kKeyReveal: return "KEY_REVEAL";
        case MsgType::kAbort: return "ABORT";
    }
    return "?";
}

const char* to_string(Reason r) {
    switch (r) {
        case Reason::kNone: return "NONE";
        case Reason::kVerCtFail: return "VER_CT_FAIL";
        case Reason::kVerKeyFail: return "VER_KEY_FAIL";
        case Reason::kRsFail: return "RS_FAIL";
        case Reason::kTimeout: return "TIMEOUT";
        case Reason::kNegotiation: return "NEGOTIATION";
    }
    return "?";
}

void SessionConfig::validate() const {
    if (lambda != 128) throw DomainError("security parameter is fixed at 128");
    if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("beta must exceed 1");
    if (price == 0) throw DomainError("price must be positive");
    if (chunk_bits < 8 || chunk_bits > 24) throw DomainError("chunk_bits must lie in [8, 24]");
    if (subset) {
        if (scheme != Scheme::kPlus) throw DomainError("subset purchases need the plus scheme");
        if (subset->empty()) throw DomainError("empty subset request");
        for (size_t i = 1; i < subset->size(); ++i)
            if ((*subset)[i - 1] >= (*subset)[i]) throw DomainError("subset indices must be strictly ascending");
    }
}

Bytes WireMessage::encode() const {
    if (body.size() >= kMaxBody) throw DomainError("message body too large");
    ByteWriter w;
    w.u8(version);
    w.u8(static_cast<uint8_t>(type));
    w.blob(body);
    return std::move(w).bytes();
}

std::optional<size_t> WireMessage::frame_length(ByteView data) {
    if (data.size() < 6) return std::nullopt;
    if (data[0] != kWireVersion) throw FormatError("unknown wire version");
    if (data[1] < 1 || data[1] > 5) throw FormatError("unknown message type");
    ByteReader r(data.subspan(2, 4));
    const uint32_t len = r.u32();
    if (len >= kMaxBody) throw FormatError("message body too large");
    return 6 + static_cast<size_t>(len);
}

WireMessage WireMessage::decode(ByteView frame) {
    const auto len = frame_length(frame);
    if (!len || *len != frame.size()) throw FormatError("incomplete or oversized frame");
    WireMessage m;
    m.version = frame[0];
    m.type = static_cast<MsgType>(frame[1]);
    m.body.assign(frame.begin() + 6, frame.end());
    return m;
}

namespace {

void put_string(ByteWriter& w, const std::string& s) { w.blob(as_bytes(s)); }

std::string get_string(ByteReader& r) {
    auto b = r.blob();
    if (b.size() > 256) throw FormatError("string field too long");
    return {b.begin(), b.end()};
}

pay::Rail get_rail(ByteReader& r) {
    const uint8_t v = r.u8();
    if (v > 2) throw FormatError("unknown rail");
    return static_cast<pay::Rail>(v);
}

bool get_bool(ByteReader& r) {
    const uint8_t v = r.u8();
    if (v > 1) throw FormatError("bad boolean");
    return v == 1;
}

void put_config(ByteWriter& w, const SessionConfig& c) {
    w.u8(static_cast<uint8_t>(c.scheme));
    w.u8(static_cast<uint8_t>(c.rail));
    w.u64(std::bit_cast<uint64_t>(c.beta));
    w.u16(static_cast<uint16_t>(c.lambda));
    w.u8(static_cast<uint8_t>(c.chunk_bits));
    w.u8(static_cast<uint8_t>(c.mask_hash));
    w.u64(c.price);
    w.u64(c.timeout_blocks);
    w.u8(c.subset ? 1 : 0);
    if (c.subset) {
        w.u32(static_cast<uint32_t>(c.subset->size()));
        for (uint64_t i : *c.subset) w.u64(i);
    }
}

SessionConfig get_config(ByteReader& r) {
    SessionConfig c;
    const uint8_t scheme = r.u8();
    if (scheme > 1) throw FormatError("unknown scheme");
    c.scheme = static_cast<Scheme>(scheme);
    c.rail = get_rail(r);
    c.beta = std::bit_cast<double>(r.u64());
    c.lambda = r.u16();
    c.chunk_bits = r.u8();
    const uint8_t mh = r.u8();
    if (mh > 1) throw FormatError("unknown mask hash");
    c.mask_hash = static_cast<veck::MaskHash>(mh);
    c.price = r.u64();
    c.timeout_blocks = r.u64();
    if (get_bool(r)) {
        const uint32_t n = r.u32();
        if (n > r.remaining() / 8) throw FormatError("subset longer than the message");
        std::vector<uint64_t> s(n);
        for (auto& i : s) i = r.u64();
        c.subset = std::move(s);
    }
    return c;
}

}  // namespace

Bytes Offer::serialize() const {
    ByteWriter w;
    put_config(w, config);
    w.raw(crs_digest);
    w.u8(sk_encoding);
    w.u8(backend_id);
    w.u8(echo ? 1 : 0);
    if (echo) {
        w.u64(ell);
        w.u64(m);
        w.u64(byte_length);
        w.u8(tail_length);
        w.raw(commitment.compress());
        put_string(w, server_address);
        w.raw(server_pk);
    }
    return std::move(w).bytes();
}

Offer Offer::parse(ByteView body) {
    ByteReader r(body);
    Offer o;
    o.config = get_config(r);
    o.crs_digest = r.fixed<32>();
    o.sk_encoding = r.u8();
    o.backend_id = r.u8();
    o.echo = get_bool(r);
    if (o.echo) {
        o.ell = r.u64();
        o.m = r.u64();
        o.byte_length = r.u64();
        o.tail_length = r.u8();
        o.commitment = G1::decompress_checked(r.raw(G1::kCompressedBytes));
        o.server_address = get_string(r);
        o.server_pk = r.fixed<32>();
    }
    r.expect_done();
    return o;
}

bool Offer::operator==(const Offer& o) const {
    return config == o.config && crs_digest == o.crs_digest && sk_encoding == o.sk_encoding &&
           backend_id == o.backend_id && echo == o.echo && ell == o.ell && m == o.m && byte_length == o.byte_length &&
           tail_length == o.tail_length && commitment == o.commitment && server_address == o.server_address &&
           server_pk == o.server_pk;
}

Bytes BundleEnvelope::serialize() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(scheme));
    w.blob(bundle);
    w.u64(contract_id);
    w.raw(key_hash);
    w.blob(bridge_proof);
    return std::move(w).bytes();
}

BundleEnvelope BundleEnvelope::parse(ByteView body) {
    ByteReader r(body);
    BundleEnvelope e;
    const uint8_t scheme = r.u8();
    if (scheme > 1) throw FormatError("unknown scheme");
    e.scheme = static_cast<Scheme>(scheme);
    auto b = r.blob();
    e.bundle.assign(b.begin(), b.end());
    e.contract_id = r.u64();
    e.key_hash = r.fixed<32>();
    auto p = r.blob();
    e.bridge_proof.assign(p.begin(), p.end());
    r.expect_done();
    return e;
}

Bytes PayEvidence::serialize() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(rail));
    w.u64(object);
    w.u64(htlc);
    put_string(w, client_address);
    return std::move(w).bytes();
}

PayEvidence PayEvidence::parse(ByteView body) {
    ByteReader r(body);
    PayEvidence p;
    p.rail = get_rail(r);
    p.object = r.u64();
    p.htlc = r.u64();
    p.client_address = get_string(r);
    r.expect_done();
    return p;
}

Bytes KeyReveal::serialize() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(rail));
    w.u64(object);
    w.u64(htlc);
    return std::move(w).bytes();
}

KeyReveal KeyReveal::parse(ByteView body) {
    ByteReader r(body);
    KeyReveal k;
    k.rail = get_rail(r);
    k.object = r.u64();
    k.htlc = r.u64();
    r.expect_done();
    return k;
}

Bytes Abort::serialize() const {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(reason));
    put_string(w, detail.substr(0, 256));
    return std::move(w).bytes();
}

Abort Abort::parse(ByteView body) {
    ByteReader r(body);
    Abort a;
    const uint8_t v = r.u8();
    if (v > 5) throw FormatError("unknown abort reason");
    a.reason = static_cast<Reason>(v);
    a.detail = get_string(r);
    r.expect_done();
    return a;
}

}  // namespace fde::ex
