#include "fde/veck/plus.hpp"

#include <bit>

namespace fde::veck {

namespace {

constexpr std::string_view kMagic = "FDEV+1";
enum Section : uint8_t { kParams = 1, kVk = 2, kCt = 3, kProof = 4 };

Bytes full_context(const rs::CodeParams& code, uint64_t k) {
    ByteWriter w;
    w.raw(as_bytes("fde/veck+/full"));
    w.u64(code.ell);
    w.u64(code.m);
    w.u64(k);
    return std::move(w).bytes();
}

Bytes subset_context(const rs::CodeParams& code, uint64_t k, const G1& c_phi, std::span<const uint64_t> s,
                     const G1& pi_s) {
    ByteWriter w;
    w.raw(as_bytes("fde/veck+/subset"));
    w.u64(code.ell);
    w.u64(code.m);
    w.u64(k);
    w.raw(c_phi.compress());
    w.raw(pi_s.compress());
    w.u64(s.size());
    for (uint64_t i : s) w.u64(i);
    return std::move(w).bytes();
}

std::vector<CtBlock> pick_blocks(const ChunkedCiphertext& ct, std::span<const uint64_t> sampled) {
    std::vector<CtBlock> out;
    out.reserve(sampled.size());
    for (uint64_t i : sampled) out.push_back(ct[i]);
    return out;
}

bool well_formed(const VeckParams& pp, const PlusBundle& b) {
    if (b.ct.size() != b.code.m) return false;
    for (uint64_t i = 0; i < b.code.m; ++i)
        if (b.ct[i].index != static_cast<int64_t>(i) || b.ct[i].chunks.size() != pp.chunks) return false;
    return true;
}

void check_subset(const CommittedFile& file, std::span<const uint64_t> s) {
    if (s.empty()) throw DomainError("subset must be non-empty");
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] > file.ell()) throw DomainError("subset index outside the file");
        if (i && s[i - 1] >= s[i]) throw DomainError("subset indices must be strictly ascending");
    }
}

}  // namespace

Digest ciphertext_digest(const ChunkedCiphertext& ct) {
    Sha256 h;
    h.update_u64(ct.size());
    for (const auto& b : ct) {
        h.update_u64(static_cast<uint64_t>(b.index)).update_u64(b.chunks.size());
        for (const auto& c : b.chunks) h.update(c);
    }
    return h.finish();
}

ChunkedCiphertext plus_encrypt(const VeckParams& pp, std::span<const Fr> codeword, const Keypair& key) {
    std::vector<int64_t> idx(codeword.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int64_t>(i);
    return enc1(pp, idx, codeword, key);
}

PlusBundle plus_prove_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                           const rs::CodeParams& code, const Keypair& key, ChunkedCiphertext ct, Rng& rng) {
    if (code.ell != file.ell()) throw DomainError("code does not match the file length");
    if (ct.size() != code.m) throw DomainError("ciphertext does not cover the codeword");
    const VeckParams ppm = pp.for_length(code.m);
    PlusBundle b;
    b.code = code;
    b.sample_count = sample_size(code.ell + 1, code.beta);
    b.vk = key.vk;
    b.vk2 = key.vk2;
    b.ct = std::move(ct);
    const auto sampled = sample_positions("veck+/full", crs.digest(), file.commitment, key.vk,
                                          ciphertext_digest(b.ct), code.m, b.sample_count);
    const auto blocks = pick_blocks(b.ct, sampled);
    const Bytes ctx = full_context(code, b.sample_count);
    const ElStatement st{sampled, file.commitment, key.vk, key.vk2, blocks, ctx};
    b.pi_r = enc2(ppm, crs, st, file.phi, key, rng);
    return b;
}

PlusEncOutput plus_enc_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                            const Keypair& key, Rng& rng) {
    const auto code = rs::CodeParams::from_beta(file.ell(), beta);
    const auto word = rs::rs_extend<Fr>(code, file.data);
    auto ct = plus_encrypt(pp.for_length(code.m), word.symbols, key);
    return {plus_prove_full(crs, pp, file, code, key, std::move(ct), rng), key};
}

PlusEncOutput plus_enc_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                            Rng& rng) {
    return plus_enc_full(crs, pp, file, beta, Keypair::generate(pp, rng), rng);
}

bool plus_ver_full(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, const rs::CodeParams& expected,
                   const PlusBundle& b) {
    if (b.is_subset() || b.code.ell != expected.ell || b.code.m != expected.m) return false;
    if (b.sample_count != sample_size(expected.ell + 1, expected.beta)) return false;
    if (!well_formed(pp, b)) return false;
    const VeckParams ppm = pp.for_length(b.code.m);
    const auto sampled = sample_positions("veck+/full", crs.digest(), c_phi, b.vk, ciphertext_digest(b.ct),
                                          b.code.m, b.sample_count);
    const auto blocks = pick_blocks(b.ct, sampled);
    const Bytes ctx = full_context(b.code, b.sample_count);
    const ElStatement st{sampled, c_phi, b.vk, b.vk2, blocks, ctx};
    return ver_ct(ppm, crs, st, b.pi_r);
}

PlusEncOutput plus_enc_subset(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                              std::span<const uint64_t> s, double beta, const Keypair& key, Rng& rng) {
    check_subset(file, s);
    const auto dom = kzg::Domain::from_indices(s);
    const kzg::Poly vs = vanishing(dom);
    auto [quot, phi_s] = div_rem(file.phi, vs);
    Fr t = Fr::random(rng);
    while (t.is_zero()) t = Fr::random(rng);
    const kzg::Poly blinded = phi_s + vs * t;
    std::vector<Fr> q = quot.coeffs();
    if (q.empty()) q.push_back(Fr::zero());
    q[0] -= t;

    PlusBundle b;
    b.code = rs::CodeParams::from_beta(s.size(), beta);
    b.sample_count = sample_size(s.size() + 1, beta);
    b.vk = key.vk;
    b.vk2 = key.vk2;
    b.c_s = kzg::commit(crs, blinded);
    b.pi_s = kzg::commit(crs, kzg::Poly(q));

    std::vector<Fr> head(b.code.ell + 1);
    for (uint64_t i = 0; i <= b.code.ell; ++i) head[i] = blinded.eval(Fr::from_u64(i));
    const auto word = rs::rs_extend<Fr>(b.code, head);
    const VeckParams ppm = pp.for_length(b.code.m);
    b.ct = plus_encrypt(ppm, word.symbols, key);

    const Bytes ctx = subset_context(b.code, b.sample_count, file.commitment, s, *b.pi_s);
    const auto sampled = sample_positions("veck+/subset", crs.digest(), *b.c_s, key.vk, ciphertext_digest(b.ct),
                                          b.code.m, b.sample_count, ctx);
    const auto blocks = pick_blocks(b.ct, sampled);
    const ElStatement st{sampled, *b.c_s, key.vk, key.vk2, blocks, ctx};
    b.pi_r = enc2(ppm, crs, st, blinded, key, rng);
    return {std::move(b), key};
}

PlusEncOutput plus_enc_subset(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                              std::span<const uint64_t> s, double beta, Rng& rng) {
    return plus_enc_subset(crs, pp, file, s, beta, Keypair::generate(pp, rng), rng);
}

bool plus_ver_subset(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, std::span<const uint64_t> s,
                     double beta, const PlusBundle& b, const VanishingSource& src) {
    if (!b.is_subset() || !b.pi_s || s.empty()) return false;
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i]) return false;
    const auto code = rs::CodeParams::from_beta(s.size(), beta);
    if (b.code.ell != code.ell || b.code.m != code.m || b.sample_count != sample_size(s.size() + 1, beta))
        return false;
    if (!well_formed(pp, b)) return false;

    // b1: phi - phi'_S vanishes on S.
    const auto dom = kzg::Domain::from_indices(s);
    G2 w;
    if (src.precomputed) {
        w = *src.precomputed;
    } else if (src.hint) {
        if (!kzg::check_vanishing_hint(crs, dom, *src.hint)) return false;
        w = src.hint->w;
    } else {
        w = kzg::vanishing_g2(crs, dom);
    }
    if (!kzg::batch_verify_zero(c_phi - *b.c_s, *b.pi_s, w)) return false;

    // b2: ciphertexts consistent with C_S on the sample.
    const VeckParams ppm = pp.for_length(b.code.m);
    const Bytes ctx = subset_context(b.code, b.sample_count, c_phi, s, *b.pi_s);
    const auto sampled = sample_positions("veck+/subset", crs.digest(), *b.c_s, b.vk, ciphertext_digest(b.ct),
                                          b.code.m, b.sample_count, ctx);
    const auto blocks = pick_blocks(b.ct, sampled);
    const ElStatement st{sampled, *b.c_s, b.vk, b.vk2, blocks, ctx};
    return ver_ct(ppm, crs, st, b.pi_r);
}

std::optional<std::vector<Fr>> detect_then_correct(const rs::CodeParams& code, const rs::Codeword<Fr>& word,
                                                   std::span<const uint64_t> targets, DecodeReport* report) {
    DecodeReport local;
    DecodeReport& rep = report ? *report : local;
    rep = {};
    rep.erasures = word.erasure_count();
    if (rep.erasures == 0) {
        Rng rng;
        Digest seed;
        rng.fill(seed);
        const auto key = rs::build_detector<Fr>(code, seed);
        rep.detector_clean = rs::rs_detect(key, word);
    }
    if (rep.detector_clean) {
        std::vector<Fr> out;
        out.reserve(targets.size());
        if (std::all_of(targets.begin(), targets.end(), [&](uint64_t t) { return t < code.m; })) {
            for (uint64_t t : targets) out.push_back(word.symbols[t]);
        } else {
            const kzg::Poly f(interpolate_consecutive<Fr>(std::span(word.symbols).first(code.ell + 1)));
            for (uint64_t t : targets) out.push_back(f.eval(Fr::from_u64(t)));
        }
        return out;
    }
    rep.decode_path = true;
    return rs::rs_decode(code, kzg::Domain::from_indices(targets), word);
}

std::optional<std::vector<Fr>> plus_dec(const VeckParams& pp, const rs::CodeParams& code, const Fr& sk,
                                        const ChunkedCiphertext& ct, std::span<const uint64_t> targets,
                                        DecodeReport* report) {
    if (ct.size() != code.m) return std::nullopt;
    const VeckParams ppm = pp.for_length(code.m);
    rs::Codeword<Fr> word;
    word.symbols.assign(code.m, Fr::zero());
    word.erased.assign(code.m, false);
    for (uint64_t i = 0; i < code.m; ++i) {
        auto v = ct[i].index == static_cast<int64_t>(i) ? dec_block(ppm, sk, ct[i]) : std::nullopt;
        if (v)
            word.symbols[i] = *v;
        else
            word.erased[i] = true;
    }
    return detect_then_correct(code, word, targets, report);
}

Bytes PlusBundle::serialize() const {
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
        w.u8(is_subset() ? 1 : 0);
        section(kParams, w.bytes());
    }
    {
        ByteWriter w;
        w.raw(vk.compress());
        w.raw(vk2.compress());
        section(kVk, w.bytes());
    }
    section(kCt, serialize_blocks(ct));
    {
        ByteWriter w;
        if (is_subset()) {
            w.raw(c_s->compress());
            w.raw(pi_s->compress());
        }
        w.raw(pi_r.serialize());
        section(kProof, w.bytes());
    }
    return std::move(out).bytes();
}

PlusBundle PlusBundle::parse(ByteView data) {
    ByteReader r(data);
    auto magic = r.raw(kMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw FormatError("bundle: bad magic");
    auto section = [&](Section tag) {
        if (r.u8() != tag) throw FormatError("bundle: unexpected section");
        return r.raw(r.u32());
    };
    PlusBundle b;
    bool subset = false;
    {
        ByteReader p(section(kParams));
        b.code.ell = p.u64();
        b.code.m = p.u64();
        b.code.beta = std::bit_cast<double>(p.u64());
        b.sample_count = p.u64();
        subset = p.u8() != 0;
        p.expect_done();
    }
    {
        ByteReader p(section(kVk));
        b.vk = G1::decompress_checked(p.fixed<G1::kCompressedBytes>());
        b.vk2 = G2::decompress_checked(p.fixed<G2::kCompressedBytes>());
        p.expect_done();
    }
    b.ct = parse_blocks(section(kCt));
    {
        ByteReader p(section(kProof));
        if (subset) {
            b.c_s = G1::decompress_checked(p.fixed<G1::kCompressedBytes>());
            b.pi_s = G1::decompress_checked(p.fixed<G1::kCompressedBytes>());
        }
        b.pi_r = ProofEl::parse(p.raw(p.remaining()));
    }
    r.expect_done();
    return b;
}

}  // namespace fde::veck
