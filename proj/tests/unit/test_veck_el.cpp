#include <gtest/gtest.h>

#include <set>

#include "fde/veck/el.hpp"

using namespace fde;
using namespace fde::veck;

namespace {

const kzg::Crs& crs() {
    static const kzg::Crs c = kzg::Crs::setup_dev(64, Fr::from_u64(0xfeed));
    return c;
}

kzg::Poly random_poly(Rng& rng, size_t n) {
    std::vector<Fr> c(n);
    for (auto& x : c) x = Fr::random(rng);
    return kzg::Poly(c);
}

std::vector<int64_t> as_indices(std::span<const uint64_t> s) { return {s.begin(), s.end()}; }

G1::Compressed add_g1(const G1::Compressed& c) {
    return (*G1::decompress(c) + G1::generator()).compress();
}

struct Fixture {
    VeckParams pp = gen(crs(), 64);
    Rng rng = Rng::seeded(77);
    kzg::Poly phi;
    G1 commitment;
    Keypair key;
    std::vector<uint64_t> sampled{1, 5, 9, 20, 33, 40, 41, 63};
    ChunkedCiphertext ct;
    ProofEl proof;
    Bytes context = Bytes{1, 2, 3};

    Fixture() {
        phi = random_poly(rng, 41);
        commitment = kzg::commit(crs(), phi);
        key = Keypair::generate(pp, rng);
        ct = enc1(pp, as_indices(sampled), phi, key);
        proof = enc2(pp, crs(), statement(), phi, key, rng);
    }

    ElStatement statement() const { return {sampled, commitment, key.vk, key.vk2, ct, context}; }
    bool verify() const { return ver_ct(pp, crs(), statement(), proof); }
};

}  // namespace

TEST(VeckEl, GenIsDeterministicAndBasesDistinct) {
    VeckParams a = gen(crs(), 32), b = gen(crs(), 32);
    EXPECT_EQ(a.h, b.h);
    EXPECT_EQ(a.chunks, 16u);
    EXPECT_EQ(a.chunk_base(3, 7), b.chunk_base(3, 7));
    EXPECT_NE(gen(crs(), 32, 16, "other").h, a.h);

    std::set<G1::Compressed> seen{a.h.compress()};
    for (int64_t i = kBlindingSlot; i < 32; ++i)
        for (const auto& base : a.bases(i)) {
            EXPECT_FALSE(base.is_identity());
            EXPECT_TRUE(seen.insert(base.compress()).second) << "collision at index " << i;
        }
    EXPECT_EQ(seen.size(), 1u + 33u * 16u);

    EXPECT_THROW(gen(crs(), 32, 7), DomainError);
    EXPECT_THROW(gen(crs(), 32, 25), DomainError);
    EXPECT_EQ(gen(crs(), 32, 8).chunks, 32u);
    EXPECT_EQ(gen(crs(), 32, 24).chunks, 11u);
}

TEST(VeckEl, KeyChecks) {
    VeckParams pp = gen(crs(), 16);
    Rng rng = Rng::seeded(3);
    EXPECT_THROW(Keypair::from_sk(pp, Fr::zero()), DomainError);
    EXPECT_THROW(Keypair::from_sk(pp, Fr::one()), DomainError);
    Keypair k = Keypair::generate(pp, rng);
    EXPECT_TRUE(ver_key(pp, k.vk, k.sk));
    EXPECT_FALSE(ver_key(pp, k.vk, k.sk + Fr::one()));
    EXPECT_TRUE(ver_key_pair(pp, k.vk, k.vk2));
    EXPECT_FALSE(ver_key_pair(pp, k.vk, k.vk2 + G2::generator()));
    EXPECT_FALSE(ver_key_pair(pp, k.vk + G1::generator(), k.vk2));
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) accepted += ver_key(pp, k.vk, Fr::random(rng));
    EXPECT_EQ(accepted, 0);
}

TEST(VeckEl, ChunkAlgebra) {
    Rng rng = Rng::seeded(4);
    for (unsigned b : {8u, 12u, 16u, 24u}) {
        const unsigned n = (255 + b - 1) / b;
        for (int t = 0; t < 200; ++t) {
            Fr x = Fr::random(rng);
            auto d = split_chunks(x, b, n);
            for (uint32_t v : d) EXPECT_LT(v, 1u << b);
            EXPECT_EQ(join_chunks(d, b), x);
            EXPECT_EQ(join_chunks_canonical(d, b), x);
        }
    }
    // -1 = r - 1 has the modulus' digit pattern minus one; r itself is non-canonical.
    auto d = split_chunks(-Fr::one(), 16, 16);
    d[0] += 1;
    EXPECT_FALSE(join_chunks_canonical(d, 16).has_value());
    EXPECT_EQ(join_chunks(d, 16), Fr::zero());
    std::vector<uint32_t> all_ones(16, 0xffff);
    EXPECT_FALSE(join_chunks_canonical(all_ones, 16).has_value());
}

TEST(VeckEl, ZeroPolynomialEncryptsToBasePowers) {
    VeckParams pp = gen(crs(), 8);
    Rng rng = Rng::seeded(5);
    std::vector<int64_t> idx{0, 3, 7};
    auto a = enc1(pp, idx, kzg::Poly{}, rng);
    auto b = enc1(pp, idx, kzg::Poly{}, rng);
    EXPECT_NE(a.key.sk, b.key.sk);
    for (const auto& blk : a.ct)
        for (unsigned j = 0; j < pp.chunks; ++j)
            EXPECT_EQ(blk.chunks[j], (pp.chunk_base(blk.index, j) * a.key.sk).compress());
}

TEST(VeckEl, DecryptRoundtrip) {
    Rng rng = Rng::seeded(6);
    for (unsigned b : {8u, 16u}) {
        VeckParams pp = gen(crs(), 64, b);
        auto phi = random_poly(rng, 50);
        std::vector<int64_t> idx(64);
        for (int i = 0; i < 64; ++i) idx[i] = i;
        auto out = enc1(pp, idx, phi, rng);
        auto plain = dec(pp, out.key.sk, out.ct);
        ASSERT_EQ(plain.size(), 64u);
        for (int i = 0; i < 64; ++i) {
            ASSERT_TRUE(plain[i].has_value());
            EXPECT_EQ(*plain[i], phi.eval(Fr::from_i64(i)));
        }
    }
    EXPECT_TRUE(dec(gen(crs(), 4), Fr::from_u64(9), {}).empty());
}

TEST(VeckEl, CorruptedChunkErasesOnlyThatPosition) {
    VeckParams pp = gen(crs(), 16);
    Rng rng = Rng::seeded(7);
    auto phi = random_poly(rng, 10);
    std::vector<int64_t> idx{0, 1, 2, 3, 4, 5};
    auto out = enc1(pp, idx, phi, rng);
    out.ct[2].chunks[5] = (G1::generator() * Fr::random(rng)).compress();
    out.ct[4].chunks[0].fill(0xff);  // not a curve point
    out.ct[5].chunks[1] = add_g1(out.ct[5].chunks[1]);  // digit shifts by one, still decodes
    auto plain = dec(pp, out.key.sk, out.ct);
    for (size_t i = 0; i < idx.size(); ++i) {
        if (i == 2 || i == 4) {
            EXPECT_FALSE(plain[i].has_value());
        } else {
            ASSERT_TRUE(plain[i].has_value());
        }
    }
    EXPECT_EQ(*plain[0], phi.eval(Fr::from_u64(0)));
    // Wrong key erases everything.
    for (const auto& v : dec(pp, out.key.sk + Fr::one(), out.ct)) EXPECT_FALSE(v.has_value());
}

TEST(VeckEl, BlockWireFormat) {
    VeckParams pp = gen(crs(), 4);
    CtBlock b = encrypt_symbol(pp, Fr::from_u64(11), 3, Fr::from_u64(99));
    ChunkedCiphertext ct{b, encrypt_symbol(pp, Fr::from_u64(11), kBlindingSlot, Fr::from_u64(1))};
    Bytes w = serialize_blocks(ct);
    EXPECT_EQ(w.size(), 8u + 2 * (8 + 2 + 16 * 48));
    EXPECT_EQ(w[8], 3);  // index, little-endian
    EXPECT_EQ(w[16], 16);
    EXPECT_EQ(parse_blocks(w), ct);
    w.pop_back();
    EXPECT_THROW(parse_blocks(w), FormatError);
}

TEST(VeckEl, HonestProofVerifies) {
    Fixture f;
    EXPECT_TRUE(f.verify());
    auto w = kzg::vanishing_g2(crs(), kzg::Domain::from_indices(f.sampled));
    EXPECT_TRUE(ver_ct(f.pp, crs(), f.statement(), f.proof, w));
    EXPECT_FALSE(ver_ct(f.pp, crs(), f.statement(), f.proof, w + G2::generator()));
    // ct_- carries an encryption of the blinding scalar.
    EXPECT_TRUE(dec_block(f.pp, f.key.sk, f.proof.ct_minus).has_value());
    EXPECT_EQ(ProofEl::parse(f.proof.serialize()), f.proof);
}

TEST(VeckEl, TamperedInputsReject) {
    Fixture f;
    {
        auto ct = f.ct;
        ct[3].chunks[2] = add_g1(ct[3].chunks[2]);
        ElStatement st = f.statement();
        st.ct = ct;
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
    }
    {
        ElStatement st = f.statement();
        st.commitment = kzg::commit(crs(), f.phi + kzg::Poly::constant(Fr::one()));
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
    }
    {
        Keypair other = Keypair::generate(f.pp, f.rng);
        ElStatement st = f.statement();
        st.vk = other.vk;
        st.vk2 = other.vk2;
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
        st.vk2 = f.key.vk2;
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
    }
    {
        ElStatement st = f.statement();
        Bytes ctx{9};
        st.context = ctx;
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
    }
    {
        ElStatement st = f.statement();
        std::vector<uint64_t> s2 = f.sampled;
        s2[0] = 2;
        st.sampled = s2;
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, f.proof));
    }
}

TEST(VeckEl, TamperedProofRejects) {
    Fixture f;
    auto check = [&](auto mutate) {
        ProofEl p = f.proof;
        mutate(p);
        return ver_ct(f.pp, crs(), f.statement(), p);
    };
    EXPECT_FALSE(check([](ProofEl& p) { p.z_sk += Fr::one(); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.z_a[2] += Fr::one(); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.z_x[1][4] += Fr::one(); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.z_y[0] += Fr::one(); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.c_sub = add_g1(p.c_sub); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.pi_sub = add_g1(p.pi_sub); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.r_vk = add_g1(p.r_vk); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.r_c = add_g1(p.r_c); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.r_ct[0][0] = add_g1(p.r_ct[0][0]); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.r_minus[3] = add_g1(p.r_minus[3]); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.ct_minus.chunks[0] = add_g1(p.ct_minus.chunks[0]); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.ct_minus.index = 0; }));
    EXPECT_FALSE(check([](ProofEl& p) { p.z_x.pop_back(); }));
    EXPECT_FALSE(check([](ProofEl& p) { p.r_vk.fill(0xff); }));
    Bytes wire = f.proof.serialize();
    wire.pop_back();
    EXPECT_THROW(ProofEl::parse(wire), FormatError);
}

TEST(VeckEl, RandomizedSingleTamperSuite) {
    Fixture f;
    Rng pick = Rng::seeded(99);
    for (int trial = 0; trial < 24; ++trial) {
        ElStatement st = f.statement();
        ProofEl p = f.proof;
        auto ct = f.ct;
        switch (trial % 4) {
            case 0: {
                auto& blk = ct[pick.uniform(ct.size())];
                auto& c = blk.chunks[pick.uniform(blk.chunks.size())];
                c = (*G1::decompress(c) + G1::generator() * Fr::random(pick)).compress();
                st.ct = ct;
                break;
            }
            case 1: st.commitment = st.commitment + G1::generator() * Fr::random(pick); break;
            case 2: st.vk = st.vk + G1::generator() * Fr::random(pick); break;
            case 3: p.z_a[pick.uniform(p.z_a.size())] += Fr::random(pick); break;
        }
        EXPECT_FALSE(ver_ct(f.pp, crs(), st, p)) << "trial " << trial;
    }
}

TEST(VeckEl, EmptySampleSetChecksOnlyKey) {
    VeckParams pp = gen(crs(), 8);
    Rng rng = Rng::seeded(8);
    Keypair k = Keypair::generate(pp, rng);
    ElStatement st{{}, G1::generator(), k.vk, k.vk2, {}, {}};
    EXPECT_TRUE(ver_ct(pp, crs(), st, ProofEl{}));
    st.vk2 = st.vk2 + G2::generator();
    EXPECT_FALSE(ver_ct(pp, crs(), st, ProofEl{}));
}
