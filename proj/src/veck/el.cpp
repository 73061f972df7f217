#include "fde/veck/el.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "fde/algebra/transcript.hpp"

namespace fde::veck {

namespace {

constexpr std::string_view kBaseDst = "FDE-V01-BLS12381G1_XMD:SHA-256_SSWU_RO_BASE_";

/// g1^x for x < 2^bits, and the inverse map keyed by compressed encoding.
class SmallTable {
  public:
    explicit SmallTable(unsigned bits) {
        const size_t n = size_t{1} << bits;
        std::vector<G1> proj(n);
        for (size_t x = 1; x < n; ++x) proj[x] = proj[x - 1] + G1::generator();
        pts_ = batch_affine(proj);
        enc_.resize(n);
        index_.reserve(n);
        for (size_t x = 0; x < n; ++x) {
            blst_p1_affine_compress(enc_[x].data(), &pts_[x]);
            index_.emplace(key(enc_[x]), static_cast<uint32_t>(x));
        }
    }

    const blst_p1_affine& point(uint32_t x) const { return pts_[x]; }

    std::optional<uint32_t> lookup(const G1::Compressed& c) const {
        auto [lo, hi] = index_.equal_range(key(c));
        for (auto it = lo; it != hi; ++it)
            if (enc_[it->second] == c) return it->second;
        return std::nullopt;
    }

    static const SmallTable& get(unsigned bits) {
        static std::mutex mu;
        static std::map<unsigned, std::unique_ptr<SmallTable>> tables;
        std::lock_guard lock(mu);
        auto& slot = tables[bits];
        if (!slot) slot = std::make_unique<SmallTable>(bits);
        return *slot;
    }

  private:
    static uint64_t key(const G1::Compressed& c) {
        uint64_t k = 0;
        for (int i = 0; i < 8; ++i) k |= uint64_t{c[40 + i]} << (8 * i);
        return k;
    }

    std::vector<blst_p1_affine> pts_;
    std::vector<G1::Compressed> enc_;
    std::unordered_multimap<uint64_t, uint32_t> index_;
};

std::vector<G1::Compressed> compress_all(std::span<const G1> pts) {
    auto aff = batch_affine(pts);
    std::vector<G1::Compressed> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) blst_p1_affine_compress(out[i].data(), &aff[i]);
    return out;
}

std::optional<blst_p1_affine> decode_point(const G1::Compressed& c) {
    blst_p1_affine a;
    if (blst_p1_uncompress(&a, c.data()) != BLST_SUCCESS) return std::nullopt;
    if (!blst_p1_affine_in_g1(&a)) return std::nullopt;
    return a;
}

std::vector<Fr> chunk_weights(unsigned bits, unsigned chunks) {
    std::vector<Fr> w(chunks);
    const Fr step = Fr::from_u64(uint64_t{1} << bits);
    w[0] = Fr::one();
    for (unsigned j = 1; j < chunks; ++j) w[j] = w[j - 1] * step;
    return w;
}

Fr eval_at(std::span<const Fr> coeffs, const Fr& x) {
    Fr acc = Fr::zero();
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

Fr random_nonzero(Rng& rng) {
    for (;;) {
        Fr x = Fr::random(rng);
        if (!x.is_zero()) return x;
    }
}

void absorb_statement(Transcript& t, const VeckParams& pp, const ElStatement& st) {
    t.absorb("params", pp.serialize());
    t.absorb_u64("sampled-count", st.sampled.size());
    for (uint64_t i : st.sampled) t.absorb_u64("sampled", i);
    t.absorb("C", st.commitment.compress());
    t.absorb("vk", st.vk.compress());
    t.absorb("vk2", st.vk2.compress());
    Sha256 ct_hash;
    for (const auto& b : st.ct) {
        ct_hash.update_u64(static_cast<uint64_t>(b.index)).update_u64(b.chunks.size());
        for (const auto& c : b.chunks) ct_hash.update(c);
    }
    t.absorb("ct", ct_hash.finish());
    t.absorb("context", st.context);
}

Fr sigma_challenge(const VeckParams& pp, const ElStatement& st, const ProofEl& p) {
    Transcript t("fde/veck-el/consistency");
    absorb_statement(t, pp, st);
    t.absorb("C''", p.c_sub);
    t.absorb("pi''", p.pi_sub);
    for (const auto& c : p.ct_minus.chunks) t.absorb("ct-", c);
    t.absorb("R_vk", p.r_vk);
    t.absorb("R_C", p.r_c);
    Sha256 rh;
    for (const auto& row : p.r_ct)
        for (const auto& c : row) rh.update(c);
    for (const auto& c : p.r_minus) rh.update(c);
    t.absorb("R_ct", rh.finish());
    return t.challenge_scalar<Fr>("c");
}

}  // namespace

G1 VeckParams::chunk_base(int64_t index, unsigned j) const {
    ByteWriter w;
    w.raw(as_bytes("fde/base"));
    w.blob(as_bytes(seed));
    w.raw(crs_digest);
    w.i64(index);
    w.u32(j);
    return G1::hash_to_curve(w.bytes(), kBaseDst);
}

std::vector<G1> VeckParams::bases(int64_t index) const {
    std::vector<G1> out(chunks);
    for (unsigned j = 0; j < chunks; ++j) out[j] = chunk_base(index, j);
    return out;
}

Bytes VeckParams::serialize() const {
    ByteWriter w;
    w.blob(as_bytes(seed));
    w.raw(crs_digest);
    w.u64(m);
    w.u8(static_cast<uint8_t>(chunk_bits));
    return std::move(w).bytes();
}

VeckParams gen(const kzg::Crs& crs, uint64_t m, unsigned chunk_bits, std::string_view seed) {
    if (chunk_bits < 8 || chunk_bits > 24) throw DomainError("chunk_bits must lie in [8, 24]");
    VeckParams pp;
    pp.seed = std::string(seed);
    pp.crs_digest = crs.digest();
    pp.m = m;
    pp.chunk_bits = chunk_bits;
    pp.chunks = (255 + chunk_bits - 1) / chunk_bits;
    ByteWriter w;
    w.raw(as_bytes("fde/base/h"));
    w.blob(as_bytes(seed));
    w.raw(pp.crs_digest);
    pp.h = G1::hash_to_curve(w.bytes(), kBaseDst);
    return pp;
}

Keypair Keypair::from_sk(const VeckParams& pp, const Fr& sk) {
    if (sk.is_zero() || sk == Fr::one()) throw DomainError("degenerate secret key");
    return {sk, pp.h * sk, G2::generator() * sk};
}

Keypair Keypair::generate(const VeckParams& pp, Rng& rng) {
    for (;;) {
        Fr sk = Fr::random(rng);
        if (!sk.is_zero() && !(sk == Fr::one())) return from_sk(pp, sk);
    }
}

bool ver_key(const VeckParams& pp, const G1& vk, const Fr& sk) { return pp.h * sk == vk; }

bool ver_key_pair(const VeckParams& pp, const G1& vk, const G2& vk2) {
    const std::pair<G1, G2> terms[] = {{pp.h, vk2}, {-vk, G2::generator()}};
    return pairing_product_is_one(terms);
}

void write_block(ByteWriter& w, const CtBlock& b) {
    w.i64(b.index);
    w.u16(static_cast<uint16_t>(b.chunks.size()));
    for (const auto& c : b.chunks) w.raw(c);
}

CtBlock read_block(ByteReader& r) {
    CtBlock b;
    b.index = r.i64();
    const uint16_t n = r.u16();
    b.chunks.resize(n);
    for (auto& c : b.chunks) c = r.fixed<G1::kCompressedBytes>();
    return b;
}

Bytes serialize_blocks(const ChunkedCiphertext& ct) {
    ByteWriter w;
    w.u64(ct.size());
    for (const auto& b : ct) write_block(w, b);
    return std::move(w).bytes();
}

ChunkedCiphertext parse_blocks(ByteView data) {
    ByteReader r(data);
    const uint64_t n = r.u64();
    if (n > data.size() / 10) throw FormatError("ciphertext: implausible block count");
    ChunkedCiphertext ct(n);
    for (auto& b : ct) b = read_block(r);
    r.expect_done();
    return ct;
}

std::vector<uint32_t> split_chunks(const Fr& x, unsigned bits, unsigned chunks) {
    const auto limbs = x.to_limbs();
    std::vector<uint32_t> out(chunks);
    const uint32_t mask = (uint32_t{1} << bits) - 1;
    for (unsigned j = 0; j < chunks; ++j) {
        const unsigned bit = j * bits;
        if (bit >= 256) break;
        const unsigned limb = bit / 64, off = bit % 64;
        uint64_t v = limbs[limb] >> off;
        if (off + bits > 64 && limb + 1 < 4) v |= limbs[limb + 1] << (64 - off);
        out[j] = static_cast<uint32_t>(v) & mask;
    }
    return out;
}

Fr join_chunks(std::span<const uint32_t> digits, unsigned bits) {
    Fr acc = Fr::zero();
    const Fr step = Fr::from_u64(uint64_t{1} << bits);
    for (size_t j = digits.size(); j-- > 0;) acc = acc * step + Fr::from_u64(digits[j]);
    return acc;
}

std::optional<Fr> join_chunks_canonical(std::span<const uint32_t> digits, unsigned bits) {
    std::array<uint8_t, 32> le{};
    size_t bit = 0;
    for (uint32_t d : digits) {
        for (unsigned k = 0; k < bits; ++k, ++bit) {
            if (!((d >> k) & 1)) continue;
            if (bit >= 256) return std::nullopt;
            le[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
        }
    }
    return Fr::from_bytes(le);
}

CtBlock encrypt_symbol(const VeckParams& pp, const Fr& sk, int64_t index, const Fr& value) {
    const SmallTable& table = SmallTable::get(pp.chunk_bits);
    const auto digits = split_chunks(value, pp.chunk_bits, pp.chunks);
    std::vector<G1> pts(pp.chunks);
    for (unsigned j = 0; j < pp.chunks; ++j) {
        G1 p = pp.chunk_base(index, j) * sk;
        if (digits[j]) blst_p1_add_or_double_affine(&p.raw(), &p.raw(), &table.point(digits[j]));
        pts[j] = p;
    }
    return {index, compress_all(pts)};
}

ChunkedCiphertext enc1(const VeckParams& pp, std::span<const int64_t> indices, std::span<const Fr> values,
                       const Keypair& key) {
    if (indices.size() != values.size()) throw DomainError("enc1: length mismatch");
    ChunkedCiphertext ct;
    ct.reserve(indices.size());
    for (size_t k = 0; k < indices.size(); ++k) ct.push_back(encrypt_symbol(pp, key.sk, indices[k], values[k]));
    return ct;
}

ChunkedCiphertext enc1(const VeckParams& pp, std::span<const int64_t> indices, const kzg::Poly& phi,
                       const Keypair& key) {
    std::vector<Fr> vals;
    vals.reserve(indices.size());
    for (int64_t i : indices) vals.push_back(phi.eval(Fr::from_i64(i)));
    return enc1(pp, indices, vals, key);
}

Enc1Output enc1(const VeckParams& pp, std::span<const int64_t> indices, const kzg::Poly& phi, Rng& rng) {
    Enc1Output out{Keypair::generate(pp, rng), {}};
    out.ct = enc1(pp, indices, phi, out.key);
    return out;
}

std::optional<Fr> dec_block(const VeckParams& pp, const Fr& sk, const CtBlock& block) {
    if (block.chunks.size() != pp.chunks) return std::nullopt;
    const SmallTable& table = SmallTable::get(pp.chunk_bits);
    std::vector<G1> masked(pp.chunks);
    for (unsigned j = 0; j < pp.chunks; ++j) {
        auto p = G1::decompress(block.chunks[j], false);
        if (!p) return std::nullopt;
        masked[j] = *p - pp.chunk_base(block.index, j) * sk;
    }
    const auto enc = compress_all(masked);
    std::vector<uint32_t> digits(pp.chunks);
    for (unsigned j = 0; j < pp.chunks; ++j) {
        auto x = table.lookup(enc[j]);
        if (!x) return std::nullopt;
        digits[j] = *x;
    }
    return join_chunks_canonical(digits, pp.chunk_bits);
}

std::vector<std::optional<Fr>> dec(const VeckParams& pp, const Fr& sk, const ChunkedCiphertext& ct) {
    std::vector<std::optional<Fr>> out;
    out.reserve(ct.size());
    for (const auto& b : ct) out.push_back(dec_block(pp, sk, b));
    return out;
}

ProofEl enc2(const VeckParams& pp, const kzg::Crs& crs, const ElStatement& st, const kzg::Poly& phi,
             const Keypair& key, Rng& rng) {
    const size_t k = st.sampled.size();
    const unsigned nc = pp.chunks;
    if (k == 0) throw DomainError("enc2: empty sample set");
    if (st.ct.size() != k) throw DomainError("enc2: ciphertext does not cover the sample set");
    if (k > crs.degree()) throw DomainError("enc2: sample set exceeds crs degree");

    const auto dom = kzg::Domain::from_indices(st.sampled);
    const kzg::Poly vs = vanishing(dom);
    auto [quot, phi_s] = div_rem(phi, vs);

    ProofEl p;
    const Fr t = random_nonzero(rng);
    std::vector<Fr> a = (phi_s + vs * t).coeffs();
    a.resize(k + 1);
    p.c_sub = msm(std::span(crs.g1_powers()).first(k + 1), a).compress();
    std::vector<Fr> q = quot.coeffs();
    if (q.empty()) q.push_back(Fr::zero());
    q[0] -= t;
    p.pi_sub = kzg::commit(crs, kzg::Poly(q)).compress();
    p.ct_minus = encrypt_symbol(pp, key.sk, kBlindingSlot, t);

    const auto pow2 = chunk_weights(pp.chunk_bits, nc);
    std::vector<std::vector<uint32_t>> x(k);
    for (size_t i = 0; i < k; ++i) x[i] = split_chunks(phi_s.eval(Fr::from_u64(st.sampled[i])), pp.chunk_bits, nc);
    const auto y = split_chunks(t, pp.chunk_bits, nc);

    const Fr rho_sk = Fr::random(rng);
    std::vector<Fr> rho_a(k + 1);
    for (auto& r : rho_a) r = Fr::random(rng);
    std::vector<std::vector<Fr>> rho_x(k, std::vector<Fr>(nc));
    for (size_t i = 0; i < k; ++i) {
        Fr rest = Fr::zero();
        for (unsigned j = 1; j < nc; ++j) {
            rho_x[i][j] = Fr::random(rng);
            rest += pow2[j] * rho_x[i][j];
        }
        rho_x[i][0] = eval_at(rho_a, Fr::from_u64(st.sampled[i])) - rest;
    }
    std::vector<Fr> rho_y(nc);
    {
        Fr rest = Fr::zero();
        for (unsigned j = 1; j < nc; ++j) {
            rho_y[j] = Fr::random(rng);
            rest += pow2[j] * rho_y[j];
        }
        rho_y[0] = rho_a[k] - rest;
    }

    const G1FixedBase g1_table(G1::generator());
    p.r_vk = (pp.h * rho_sk).compress();
    p.r_c = msm(std::span(crs.g1_powers()).first(k + 1), rho_a).compress();
    p.r_ct.resize(k);
    for (size_t i = 0; i < k; ++i) {
        std::vector<G1> row(nc);
        for (unsigned j = 0; j < nc; ++j)
            row[j] = pp.chunk_base(static_cast<int64_t>(st.sampled[i]), j) * rho_sk + g1_table.mul(rho_x[i][j]);
        p.r_ct[i] = compress_all(row);
    }
    {
        std::vector<G1> row(nc);
        for (unsigned j = 0; j < nc; ++j) row[j] = pp.chunk_base(kBlindingSlot, j) * rho_sk + g1_table.mul(rho_y[j]);
        p.r_minus = compress_all(row);
    }

    const Fr c = sigma_challenge(pp, st, p);
    p.z_sk = rho_sk + c * key.sk;
    p.z_a.resize(k + 1);
    for (size_t r = 0; r <= k; ++r) p.z_a[r] = rho_a[r] + c * a[r];
    p.z_x.assign(k, std::vector<Fr>(nc - 1));
    for (size_t i = 0; i < k; ++i)
        for (unsigned j = 1; j < nc; ++j) p.z_x[i][j - 1] = rho_x[i][j] + c * Fr::from_u64(x[i][j]);
    p.z_y.resize(nc - 1);
    for (unsigned j = 1; j < nc; ++j) p.z_y[j - 1] = rho_y[j] + c * Fr::from_u64(y[j]);
    return p;
}

bool ver_ct(const VeckParams& pp, const kzg::Crs& crs, const ElStatement& st, const ProofEl& p,
            const std::optional<G2>& g2_vanishing) {
    if (!ver_key_pair(pp, st.vk, st.vk2)) return false;
    const size_t k = st.sampled.size();
    if (k == 0) return true;
    const unsigned nc = pp.chunks;

    // Shape.
    if (k > crs.degree() || st.ct.size() != k) return false;
    for (size_t i = 0; i < k; ++i) {
        if (st.sampled[i] >= pp.m || (i && st.sampled[i - 1] >= st.sampled[i])) return false;
        if (st.ct[i].index != static_cast<int64_t>(st.sampled[i]) || st.ct[i].chunks.size() != nc) return false;
    }
    if (p.ct_minus.index != kBlindingSlot || p.ct_minus.chunks.size() != nc) return false;
    if (p.r_ct.size() != k || p.r_minus.size() != nc || p.z_a.size() != k + 1 || p.z_x.size() != k ||
        p.z_y.size() != nc - 1)
        return false;
    for (size_t i = 0; i < k; ++i)
        if (p.r_ct[i].size() != nc || p.z_x[i].size() != nc - 1) return false;

    // Decode every point with a subgroup check.
    auto c_sub = decode_point(p.c_sub);
    auto pi_sub = decode_point(p.pi_sub);
    auto r_vk = decode_point(p.r_vk);
    auto r_c = decode_point(p.r_c);
    if (!c_sub || !pi_sub || !r_vk || !r_c) return false;

    // (2) phi - phi'' vanishes on S_R.
    const auto dom = kzg::Domain::from_indices(st.sampled);
    const G2 w = g2_vanishing ? *g2_vanishing : kzg::vanishing_g2(crs, dom);
    if (!kzg::batch_verify_zero(st.commitment - G1::from_affine(*c_sub), G1::from_affine(*pi_sub), w)) return false;

    // (3) Sigma equations, batched under random weights into one MSM.
    const Fr c = sigma_challenge(pp, st, p);
    const auto pow2 = chunk_weights(pp.chunk_bits, nc);
    Rng rng;
    std::vector<blst_p1_affine> pts;
    std::vector<Fr> sc;
    const size_t total = 6 + (k + 1) + 3 * nc * (k + 1);
    pts.reserve(total);
    sc.reserve(total);
    std::vector<G1> hashed;
    hashed.reserve(nc * (k + 1));
    auto push = [&](const blst_p1_affine& a, const Fr& s) {
        pts.push_back(a);
        sc.push_back(s);
    };
    Fr g1_coeff = Fr::zero();

    // z_sk h = R_vk + c vk
    {
        const Fr gam = Fr::random(rng);
        push(pp.h.to_affine(), gam * p.z_sk);
        push(*r_vk, -gam);
        push(st.vk.to_affine(), -(gam * c));
    }
    // sum_r z_a[r] G_r = R_C + c C''
    {
        const Fr gam = Fr::random(rng);
        for (size_t r = 0; r <= k; ++r) push(crs.g1_powers()[r], gam * p.z_a[r]);
        push(*r_c, -gam);
        push(*c_sub, -(gam * c));
    }
    auto chunk_rows = [&](int64_t index, const std::vector<G1::Compressed>& r_row,
                          const std::vector<G1::Compressed>& ct_row, std::span<const Fr> z_tail, const Fr& z_head) {
        for (unsigned j = 0; j < nc; ++j) {
            auto rj = decode_point(r_row[j]);
            auto cj = decode_point(ct_row[j]);
            if (!rj || !cj) return false;
            const Fr gam = Fr::random(rng);
            const Fr zx = j == 0 ? z_head : z_tail[j - 1];
            hashed.push_back(pp.chunk_base(index, j));
            sc.push_back(gam * p.z_sk);
            pts.push_back(blst_p1_affine{});  // placeholder, filled after batch conversion
            g1_coeff += gam * zx;
            push(*rj, -gam);
            push(*cj, -(gam * c));
        }
        return true;
    };
    std::vector<size_t> placeholder_at;
    for (size_t i = 0; i < k; ++i) {
        Fr head = eval_at(p.z_a, Fr::from_u64(st.sampled[i]));
        for (unsigned j = 1; j < nc; ++j) head -= pow2[j] * p.z_x[i][j - 1];
        const size_t before = pts.size();
        if (!chunk_rows(static_cast<int64_t>(st.sampled[i]), p.r_ct[i], st.ct[i].chunks, p.z_x[i], head)) return false;
        for (size_t q = before; q < pts.size(); q += 3) placeholder_at.push_back(q);
    }
    {
        Fr head = p.z_a[k];
        for (unsigned j = 1; j < nc; ++j) head -= pow2[j] * p.z_y[j - 1];
        const size_t before = pts.size();
        if (!chunk_rows(kBlindingSlot, p.r_minus, p.ct_minus.chunks, p.z_y, head)) return false;
        for (size_t q = before; q < pts.size(); q += 3) placeholder_at.push_back(q);
    }
    const auto hashed_aff = batch_affine(hashed);
    for (size_t q = 0; q < placeholder_at.size(); ++q) pts[placeholder_at[q]] = hashed_aff[q];
    push(G1::generator().to_affine(), g1_coeff);

    return msm(std::span<const blst_p1_affine>(pts), sc).is_identity();
}

Bytes ProofEl::serialize() const {
    ByteWriter w;
    const uint32_t k = static_cast<uint32_t>(r_ct.size());
    const uint16_t nc = static_cast<uint16_t>(r_minus.size());
    w.u32(k);
    w.u16(nc);
    w.raw(c_sub);
    w.raw(pi_sub);
    write_block(w, ct_minus);
    w.raw(r_vk);
    w.raw(r_c);
    for (const auto& row : r_ct)
        for (const auto& c : row) w.raw(c);
    for (const auto& c : r_minus) w.raw(c);
    w.raw(z_sk.to_bytes());
    for (const auto& z : z_a) w.raw(z.to_bytes());
    for (const auto& row : z_x)
        for (const auto& z : row) w.raw(z.to_bytes());
    for (const auto& z : z_y) w.raw(z.to_bytes());
    return std::move(w).bytes();
}

ProofEl ProofEl::parse(ByteView data) {
    ByteReader r(data);
    ProofEl p;
    const uint32_t k = r.u32();
    const uint16_t nc = r.u16();
    if (nc < 2 || static_cast<uint64_t>(k) * nc * 80 > data.size()) throw FormatError("proof: implausible shape");
    p.c_sub = r.fixed<48>();
    p.pi_sub = r.fixed<48>();
    p.ct_minus = read_block(r);
    p.r_vk = r.fixed<48>();
    p.r_c = r.fixed<48>();
    p.r_ct.assign(k, std::vector<G1::Compressed>(nc));
    for (auto& row : p.r_ct)
        for (auto& c : row) c = r.fixed<48>();
    p.r_minus.resize(nc);
    for (auto& c : p.r_minus) c = r.fixed<48>();
    p.z_sk = Fr::from_bytes_checked(r.raw(32));
    p.z_a.resize(k + 1);
    for (auto& z : p.z_a) z = Fr::from_bytes_checked(r.raw(32));
    p.z_x.assign(k, std::vector<Fr>(nc - 1));
    for (auto& row : p.z_x)
        for (auto& z : row) z = Fr::from_bytes_checked(r.raw(32));
    p.z_y.resize(nc - 1);
    for (auto& z : p.z_y) z = Fr::from_bytes_checked(r.raw(32));
    r.expect_done();
    return p;
}

}  // namespace fde::veck
