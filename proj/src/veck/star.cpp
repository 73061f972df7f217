#include "fde/veck/star.hpp"

#include <bit>

#include "fde/algebra/transcript.hpp"

namespace fde::veck {

namespace {

constexpr std::string_view kMagic = "FDEV*1";
enum Section : uint8_t { kParams = 1, kVk = 2, kCt = 3, kProof = 4 };
constexpr size_t kMimcRounds = 110;  // ceil(255 / log2(5))

Digest mask_seed(const Fr& sk) {
    Sha256 h;
    h.update(as_bytes("fde/mask")).update(sk.to_bytes());
    return h.finish();
}

const std::vector<Fr>& mimc_constants() {
    static const std::vector<Fr> c = [] {
        const Digest seed = sha256(as_bytes("fde/mask/mimc-constants"));
        std::vector<Fr> out(kMimcRounds);
        for (size_t r = 1; r < kMimcRounds; ++r) out[r] = Fr::from_wide_bytes(Transcript::expand(seed, r));
        return out;
    }();
    return c;
}

Fr mimc(const Fr& key, const Fr& x0) {
    const auto& c = mimc_constants();
    Fr x = x0;
    for (size_t r = 0; r < kMimcRounds; ++r) {
        const Fr t = x + key + c[r];
        const Fr t2 = t * t;
        x = t2 * t2 * t;
    }
    return x + key;
}

Bytes star_context(const rs::CodeParams& code, uint64_t k, MaskHash hash, const Digest& masked) {
    ByteWriter w;
    w.raw(as_bytes("fde/veck*"));
    w.u64(code.ell);
    w.u64(code.m);
    w.u64(k);
    w.u8(static_cast<uint8_t>(hash));
    w.raw(masked);
    return std::move(w).bytes();
}

std::vector<uint64_t> star_sample(const kzg::Crs& crs, const G1& c_phi, const G1& vk, const Digest& masked,
                                  uint64_t m, uint64_t k, MaskHash hash) {
    const uint8_t id[1] = {static_cast<uint8_t>(hash)};
    return sample_positions("veck*", crs.digest(), c_phi, vk, masked, m, k, id);
}

}  // namespace

Fr mask_at(const Fr& sk, uint64_t i, MaskHash hash) {
    if (hash == MaskHash::kAlgebraic) return mimc(sk, Fr::from_u64(i)) + Fr::from_u64(i);
    return Fr::from_wide_bytes(Transcript::expand(mask_seed(sk), i));
}

std::vector<Fr> mask_stream(const Fr& sk, uint64_t begin, uint64_t count, MaskHash hash) {
    std::vector<Fr> out(count);
    if (hash == MaskHash::kAlgebraic) {
        for (uint64_t k = 0; k < count; ++k) out[k] = mask_at(sk, begin + k, hash);
        return out;
    }
    // Same bytes as Transcript::expand, with one reused hasher.
    const Digest seed = mask_seed(sk);
    Sha256 h;
    std::array<uint8_t, 64> wide;
    for (uint64_t k = 0; k < count; ++k) {
        for (uint8_t half = 0; half < 2; ++half) {
            const uint8_t tag[1] = {half};
            h.update(seed).update_u64(begin + k).update(tag);
            const Digest d = h.finish();
            std::copy(d.begin(), d.end(), wide.begin() + 32 * half);
        }
        out[k] = Fr::from_wide_bytes(wide);
    }
    return out;
}

Digest key_hash(const Fr& sk) { return sha256(sk.to_bytes()); }

bool consistency_relation_holds(const ConsistencyStatement& st, const ConsistencyWitness& w) {
    if (!st.pp) throw BackendError("statement lacks public parameters");
    const size_t k = st.sampled.size();
    if (st.masked.size() != k || st.ct_prime.size() != k || w.x.size() != k) return false;
    if (!(st.pp->h * w.sk == st.vk)) return false;
    for (size_t i = 0; i < k; ++i) {
        if (!(st.masked[i] == w.x[i] + mask_at(w.sk, st.sampled[i], st.hash))) return false;
        const auto& blk = st.ct_prime[i];
        if (blk.index != static_cast<int64_t>(st.sampled[i])) return false;
        // encrypt_symbol splits x_i into chunks, so this also checks recomposition.
        if (!(encrypt_symbol(*st.pp, w.sk, blk.index, w.x[i]) == blk)) return false;
    }
    return true;
}

bool bridge_relation_holds(const KeyBridgeStatement& st, const Fr& sk) {
    return st.h * sk == st.vk && key_hash(sk) == st.t;
}

Digest statement_digest(const ConsistencyStatement& st) {
    if (!st.pp) throw BackendError("statement lacks public parameters");
    Sha256 h;
    h.update(as_bytes("fde/backend/consistency")).update(st.pp->serialize()).update(st.vk.compress());
    const uint8_t id[1] = {static_cast<uint8_t>(st.hash)};
    h.update(id).update_u64(st.sampled.size());
    for (size_t i = 0; i < st.sampled.size(); ++i) h.update_u64(st.sampled[i]);
    for (const Fr& x : st.masked) h.update(x.to_bytes());
    for (const auto& b : st.ct_prime) {
        h.update_u64(static_cast<uint64_t>(b.index)).update_u64(b.chunks.size());
        for (const auto& c : b.chunks) h.update(c);
    }
    return h.finish();
}

Digest statement_digest(const KeyBridgeStatement& st) {
    Sha256 h;
    h.update(as_bytes("fde/backend/bridge")).update(st.h.compress()).update(st.vk.compress()).update(st.t);
    return h.finish();
}

void TransparentBackend::require_test_session() const {
    if (mode_ != SessionMode::kTestOnly)
        throw BackendError("transparent backend reveals the witness; refusing outside a test-only session");
}

Bytes TransparentBackend::prove(const ConsistencyStatement& st, const ConsistencyWitness& w) const {
    require_test_session();
    if (w.x.size() != st.sampled.size()) throw DomainError("witness does not match the statement");
    ByteWriter out;
    out.raw(w.sk.to_bytes());
    out.u64(w.x.size());
    for (const Fr& x : w.x) out.raw(x.to_bytes());
    return std::move(out).bytes();
}

bool TransparentBackend::verify(const ConsistencyStatement& st, ByteView proof) const {
    require_test_session();
    try {
        ByteReader r(proof);
        ConsistencyWitness w;
        w.sk = Fr::from_bytes_checked(r.raw(32));
        const uint64_t k = r.u64();
        if (k != st.sampled.size()) return false;
        std::vector<Fr> x(k);
        for (auto& v : x) v = Fr::from_bytes_checked(r.raw(32));
        r.expect_done();
        w.x = x;
        return consistency_relation_holds(st, w);
    } catch (const FormatError&) {
        return false;
    }
}

Bytes TransparentBackend::prove_bridge(const KeyBridgeStatement&, const Fr& sk) const {
    require_test_session();
    const auto b = sk.to_bytes();
    return Bytes(b.begin(), b.end());
}

bool TransparentBackend::verify_bridge(const KeyBridgeStatement& st, ByteView proof) const {
    require_test_session();
    try {
        return proof.size() == 32 && bridge_relation_holds(st, Fr::from_bytes_checked(proof));
    } catch (const FormatError&) {
        return false;
    }
}

void IdealBackend::require_test_session() const {
    if (mode_ != SessionMode::kTestOnly)
        throw BackendError("ideal backend relies on a trusted referee; refusing outside a test-only session");
}

Bytes IdealBackend::attest(const Digest& statement, bool holds) const {
    if (!holds) return Bytes(32, 0);  // a prover cannot make a false statement verify
    const Digest mac = hmac_sha256(key_, statement);
    return Bytes(mac.begin(), mac.end());
}

Bytes IdealBackend::prove(const ConsistencyStatement& st, const ConsistencyWitness& w) const {
    require_test_session();
    return attest(statement_digest(st), consistency_relation_holds(st, w));
}

bool IdealBackend::verify(const ConsistencyStatement& st, ByteView proof) const {
    require_test_session();
    const Digest mac = hmac_sha256(key_, statement_digest(st));
    return equal_ct(mac, proof);
}

Bytes IdealBackend::prove_bridge(const KeyBridgeStatement& st, const Fr& sk) const {
    require_test_session();
    return attest(statement_digest(st), bridge_relation_holds(st, sk));
}

bool IdealBackend::verify_bridge(const KeyBridgeStatement& st, ByteView proof) const {
    require_test_session();
    const Digest mac = hmac_sha256(key_, statement_digest(st));
    return equal_ct(mac, proof);
}

Digest masked_digest(std::span<const Fr> masked) {
    Sha256 h;
    h.update_u64(masked.size());
    for (const Fr& x : masked) h.update(x.to_bytes());
    return h.finish();
}

std::vector<Fr> star_mask(std::span<const Fr> codeword, const Fr& sk, MaskHash hash) {
    std::vector<Fr> masked = mask_stream(sk, 0, codeword.size(), hash);
    for (size_t i = 0; i < codeword.size(); ++i) masked[i] += codeword[i];
    return masked;
}

StarBundle star_prove(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                      const rs::CodeParams& code, const ConsistencyBackend& backend, const Keypair& key,
                      std::span<const Fr> codeword, std::vector<Fr> masked, Rng& rng, MaskHash hash) {
    if (code.ell != file.ell()) throw DomainError("code does not match the file length");
    if (masked.size() != code.m || codeword.size() != code.m)
        throw DomainError("codeword has the wrong length");
    StarBundle b;
    b.code = code;
    b.sample_count = sample_size(code.ell + 1, code.beta);
    b.mask_hash = hash;
    b.vk = key.vk;
    b.vk2 = key.vk2;
    b.masked = std::move(masked);

    const Digest md = masked_digest(b.masked);
    const auto sampled = star_sample(crs, file.commitment, key.vk, md, code.m, b.sample_count, hash);
    std::vector<Fr> x(sampled.size()), masked_s(sampled.size());
    std::vector<int64_t> idx(sampled.size());
    for (size_t i = 0; i < sampled.size(); ++i) {
        x[i] = codeword[sampled[i]];
        masked_s[i] = b.masked[sampled[i]];
        idx[i] = static_cast<int64_t>(sampled[i]);
    }

    const VeckParams ppm = pp.for_length(code.m);
    b.proof.backend_id = backend.id();
    b.proof.ct_prime = enc1(ppm, idx, x, key);
    const Bytes ctx = star_context(code, b.sample_count, hash, md);
    const ElStatement st{sampled, file.commitment, key.vk, key.vk2, b.proof.ct_prime, ctx};
    b.proof.pi_r = enc2(ppm, crs, st, file.phi, key, rng);
    const ConsistencyStatement cs{&ppm, key.vk, hash, sampled, masked_s, b.proof.ct_prime};
    b.proof.pi_z = backend.prove(cs, {key.sk, x});
    return b;
}

StarEncOutput star_enc(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                       const ConsistencyBackend& backend, const Keypair& key, Rng& rng, MaskHash hash) {
    const auto code = rs::CodeParams::from_beta(file.ell(), beta);
    const auto word = rs::rs_extend<Fr>(code, file.data);
    auto masked = star_mask(word.symbols, key.sk, hash);
    return {star_prove(crs, pp, file, code, backend, key, word.symbols, std::move(masked), rng, hash), key};
}

StarEncOutput star_enc(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                       const ConsistencyBackend& backend, Rng& rng, MaskHash hash) {
    return star_enc(crs, pp, file, beta, backend, Keypair::generate(pp, rng), rng, hash);
}

bool star_ver(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, const rs::CodeParams& expected,
              const StarBundle& b, const ConsistencyBackend* backend, std::string* diagnostic) {
    auto reject = [&](std::string why) {
        if (diagnostic) *diagnostic = std::move(why);
        return false;
    };
    if (!backend) return reject("no consistency backend available");
    if (b.proof.backend_id != backend->id()) return reject("proof was made for a different backend");
    if (b.code.ell != expected.ell || b.code.m != expected.m) return reject("code parameters differ from the offer");
    if (b.sample_count != sample_size(expected.ell + 1, expected.beta)) return reject("wrong sample size");
    if (b.masked.size() != b.code.m) return reject("masked codeword has the wrong length");
    if (b.proof.ct_prime.size() != b.sample_count) return reject("ct' does not cover the sample");

    const Digest md = masked_digest(b.masked);
    const auto sampled = star_sample(crs, c_phi, b.vk, md, b.code.m, b.sample_count, b.mask_hash);
    const VeckParams ppm = pp.for_length(b.code.m);
    const Bytes ctx = star_context(b.code, b.sample_count, b.mask_hash, md);
    const ElStatement st{sampled, c_phi, b.vk, b.vk2, b.proof.ct_prime, ctx};
    if (!ver_ct(ppm, crs, st, b.proof.pi_r)) return reject("ciphertext consistency proof failed");

    std::vector<Fr> masked_s(sampled.size());
    for (size_t i = 0; i < sampled.size(); ++i) masked_s[i] = b.masked[sampled[i]];
    const ConsistencyStatement cs{&ppm, b.vk, b.mask_hash, sampled, masked_s, b.proof.ct_prime};
    try {
        if (!backend->verify(cs, b.proof.pi_z)) return reject("mask consistency proof failed");
    } catch (const BackendError& e) {
        return reject(std::string("backend unavailable: ") + e.what());
    }
    return true;
}

std::optional<std::vector<Fr>> star_dec(const rs::CodeParams& code, const Fr& sk, std::span<const Fr> masked,
                                        std::span<const uint64_t> targets, MaskHash hash, DecodeReport* report) {
    if (masked.size() != code.m) return std::nullopt;
    rs::Codeword<Fr> word;
    word.symbols = mask_stream(sk, 0, code.m, hash);
    for (uint64_t i = 0; i < code.m; ++i) word.symbols[i] = masked[i] - word.symbols[i];
    word.erased.assign(code.m, false);
    return detect_then_correct(code, word, targets, report);
}

Bytes StarBundle::serialize() const {
    ByteWriter out;
    out.raw(as_bytes(kMagic));
    auto section = [&](Section tag, const Bytes& body) {
        out.u8(tag);
        out.u32(static_cast<uint32_t>(body.size()));
        out.raw(body);
    };
    {
        ByteWriter w;
        w.u64(code.ell);
        w.u64(code.m);
        w.u64(std::bit_cast<uint64_t>(code.beta));
        w.u64(sample_count);
        w.u8(static_cast<uint8_t>(mask_hash));
        section(kParams, w.bytes());
    }
    {
        ByteWriter w;
        w.raw(vk.compress());
        w.raw(vk2.compress());
        section(kVk, w.bytes());
    }
    {
        Bytes body(masked.size() * 32);
        for (size_t i = 0; i < masked.size(); ++i) {
            const auto x = masked[i].to_bytes();
            std::copy(x.begin(), x.end(), body.begin() + 32 * i);
        }
        section(kCt, body);
    }
    {
        ByteWriter w;
        w.u8(proof.backend_id);
        w.blob(proof.pi_z);
        w.blob(proof.pi_r.serialize());
        w.raw(serialize_blocks(proof.ct_prime));
        section(kProof, w.bytes());
    }
    return std::move(out).bytes();
}

StarBundle StarBundle::parse(ByteView data) {
    ByteReader r(data);
    auto magic = r.raw(kMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw FormatError("bundle: bad magic");
    auto section = [&](Section tag) {
        if (r.u8() != tag) throw FormatError("bundle: unexpected section");
        return r.raw(r.u32());
    };
    StarBundle b;
    {
        ByteReader p(section(kParams));
        b.code.ell = p.u64();
        b.code.m = p.u64();
        b.code.beta = std::bit_cast<double>(p.u64());
        b.sample_count = p.u64();
        const uint8_t h = p.u8();
        if (h > 1) throw FormatError("bundle: unknown mask hash");
        b.mask_hash = static_cast<MaskHash>(h);
        p.expect_done();
    }
    {
        ByteReader p(section(kVk));
        b.vk = G1::decompress_checked(p.fixed<G1::kCompressedBytes>());
        b.vk2 = G2::decompress_checked(p.fixed<G2::kCompressedBytes>());
        p.expect_done();
    }
    {
        ByteView body = section(kCt);
        if (body.size() % 32) throw FormatError("bundle: ragged masked section");
        b.masked.resize(body.size() / 32);
        for (size_t i = 0; i < b.masked.size(); ++i) b.masked[i] = Fr::from_bytes_checked(body.subspan(32 * i, 32));
    }
    {
        ByteReader p(section(kProof));
        b.proof.backend_id = p.u8();
        auto z = p.blob();
        b.proof.pi_z.assign(z.begin(), z.end());
        b.proof.pi_r = ProofEl::parse(p.blob());
        b.proof.ct_prime = parse_blocks(p.raw(p.remaining()));
    }
    r.expect_done();
    return b;
}

}  // namespace fde::veck
