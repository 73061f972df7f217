#include <gtest/gtest.h>

#include <algorithm>

#include "fde/veck/plus.hpp"

using namespace fde;
using namespace fde::veck;

namespace {

const kzg::Crs& crs() {
    static const kzg::Crs c = kzg::Crs::setup_dev(64, Fr::from_u64(0xabcdef));
    return c;
}

const VeckParams& params() {
    static const VeckParams pp = gen(crs(), 0);
    return pp;
}

CommittedFile random_file(Rng& rng, size_t n) {
    std::vector<Fr> d(n);
    for (auto& x : d) x = Fr::random(rng);
    return CommittedFile::from_data(crs(), std::move(d));
}

std::vector<uint64_t> iota(uint64_t n) {
    std::vector<uint64_t> v(n);
    for (uint64_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

G1::Compressed add_g1(const G1::Compressed& c) { return (*G1::decompress(c) + G1::generator()).compress(); }

struct FullSale {
    Rng rng = Rng::seeded(1234);
    CommittedFile file = random_file(rng, 32);
    rs::CodeParams code = rs::CodeParams::from_beta(31, 2.0);
    PlusEncOutput out = plus_enc_full(crs(), params(), file, 2.0, rng);

    std::vector<uint64_t> sampled() const {
        return sample_positions("veck+/full", crs().digest(), file.commitment, out.bundle.vk,
                                ciphertext_digest(out.bundle.ct), code.m, out.bundle.sample_count);
    }
    bool verify(const PlusBundle& b) const { return plus_ver_full(crs(), params(), file.commitment, code, b); }
};

}  // namespace

TEST(VeckPlus, SampleSize) {
    EXPECT_EQ(sample_size(1u << 16, 2.0), 128u);
    EXPECT_EQ(sample_size(129, 2.0), 128u);
    EXPECT_EQ(sample_size(11, 2.0), 11u);
    EXPECT_EQ(sample_size(1000, 1.5), 256u);
    EXPECT_EQ(sample_size(1000, 3.0), 64u);
    EXPECT_EQ(sample_size(1000, 2.5), 86u);  // ceil(85.33)
    EXPECT_THROW(sample_size(10, 1.0), DomainError);
}

TEST(VeckPlus, FullHonestVerifiesAndDecrypts) {
    FullSale s;
    EXPECT_EQ(s.code.m, 64u);
    EXPECT_EQ(s.out.bundle.sample_count, 32u);
    EXPECT_TRUE(s.verify(s.out.bundle));

    PlusBundle parsed = PlusBundle::parse(s.out.bundle.serialize());
    EXPECT_TRUE(s.verify(parsed));

    DecodeReport rep;
    auto got = plus_dec(params(), s.code, s.out.key.sk, s.out.bundle.ct, iota(32), &rep);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s.file.data);
    EXPECT_FALSE(rep.decode_path);
    EXPECT_TRUE(rep.detector_clean);
}

TEST(VeckPlus, FullRejectsTampering) {
    FullSale s;
    const auto sampled = s.sampled();
    {
        PlusBundle b = s.out.bundle;
        b.ct[sampled[3]].chunks[0] = add_g1(b.ct[sampled[3]].chunks[0]);
        EXPECT_FALSE(s.verify(b));
    }
    {
        PlusBundle b = s.out.bundle;
        b.vk = b.vk + G1::generator();
        EXPECT_FALSE(s.verify(b));
    }
    {
        PlusBundle b = s.out.bundle;
        b.pi_r.z_sk += Fr::one();
        EXPECT_FALSE(s.verify(b));
    }
    {
        PlusBundle b = s.out.bundle;
        b.ct.pop_back();
        EXPECT_FALSE(s.verify(b));
    }
    const G1 other = s.file.commitment + G1::generator();
    EXPECT_FALSE(plus_ver_full(crs(), params(), other, s.code, s.out.bundle));
    EXPECT_FALSE(plus_ver_full(crs(), params(), s.file.commitment, rs::CodeParams::from_beta(31, 3.0), s.out.bundle));
}

TEST(VeckPlus, NonSampledTamperPassesThenDecodes) {
    // A cheating seller corrupts one ciphertext before proving. When the
    // sample misses it the proof is valid; the buyer repairs it after paying.
    FullSale s;
    const auto word = rs::rs_extend<Fr>(s.code, s.file.data);
    auto ct = plus_encrypt(params().for_length(s.code.m), word.symbols, s.out.key);
    const uint64_t sample_count = sample_size(32, 2.0);
    uint64_t victim = 0;
    for (;; ++victim) {
        auto trial = ct;
        trial[victim].chunks[4] = add_g1(trial[victim].chunks[4]);  // a wrong symbol, not an erasure
        const auto sampled = sample_positions("veck+/full", crs().digest(), s.file.commitment, s.out.key.vk,
                                              ciphertext_digest(trial), s.code.m, sample_count);
        if (!std::binary_search(sampled.begin(), sampled.end(), victim)) {
            ct = std::move(trial);
            break;
        }
    }
    PlusBundle b = plus_prove_full(crs(), params(), s.file, s.code, s.out.key, ct, s.rng);
    EXPECT_TRUE(s.verify(b));

    DecodeReport rep;
    auto got = plus_dec(params(), s.code, s.out.key.sk, b.ct, iota(32), &rep);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s.file.data);
    EXPECT_TRUE(rep.decode_path);
    EXPECT_EQ(rep.erasures, 0u);

    // Tampering after the proof moves the sample and breaks the proof.
    uint64_t other = (victim + 1) % s.code.m;
    b.ct[other].chunks[0] = add_g1(b.ct[other].chunks[0]);
    EXPECT_FALSE(s.verify(b));
}

TEST(VeckPlus, DecodeWithinAndBeyondRadius) {
    FullSale s;
    Rng rng = Rng::seeded(5);
    const uint64_t radius = s.code.radius();  // 16
    {
        auto ct = s.out.bundle.ct;
        for (uint64_t i = 0; i < radius; ++i) ct[2 * i + 1] = encrypt_symbol(params(), s.out.key.sk, 2 * i + 1, Fr::random(rng));
        DecodeReport rep;
        auto got = plus_dec(params(), s.code, s.out.key.sk, ct, iota(32), &rep);
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, s.file.data);
        EXPECT_TRUE(rep.decode_path);
    }
    {
        auto ct = s.out.bundle.ct;
        for (uint64_t i = 0; i < 2 * radius; ++i) ct[i].chunks[0].fill(0);  // erasures, 2*radius + 0 errors ok
        auto got = plus_dec(params(), s.code, s.out.key.sk, ct, iota(32));
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, s.file.data);
    }
    {
        auto ct = s.out.bundle.ct;
        for (uint64_t i = 0; i < 2 * radius + 2; ++i) ct[i] = encrypt_symbol(params(), s.out.key.sk, i, Fr::random(rng));
        EXPECT_FALSE(plus_dec(params(), s.code, s.out.key.sk, ct, iota(32)).has_value());
    }
}

TEST(VeckPlus, SubsetHonestAndPaths) {
    Rng rng = Rng::seeded(77);
    CommittedFile file = random_file(rng, 41);
    const std::vector<uint64_t> s{3, 7, 19, 30, 40};
    PlusEncOutput out = plus_enc_subset(crs(), params(), file, s, 2.0, rng);
    EXPECT_EQ(out.bundle.code.m, 12u);
    EXPECT_EQ(out.bundle.sample_count, 6u);

    const auto dom = kzg::Domain::from_indices(s);
    const G2 w = kzg::vanishing_g2(crs(), dom);
    const auto hint = kzg::make_vanishing_hint(crs(), dom);
    EXPECT_TRUE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle));
    EXPECT_TRUE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle, {w, {}}));
    EXPECT_TRUE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle, {{}, hint}));
    EXPECT_TRUE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, PlusBundle::parse(out.bundle.serialize())));

    auto bad_hint = hint;
    bad_hint.w = bad_hint.w + G2::generator();
    EXPECT_FALSE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle, {{}, bad_hint}));
    EXPECT_FALSE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle, {w + G2::generator(), {}}));

    // phi'_S agrees with phi on S, so decryption at S returns the purchased symbols.
    DecodeReport rep;
    auto got = plus_dec(params(), out.bundle.code, out.key.sk, out.bundle.ct, s, &rep);
    ASSERT_TRUE(got.has_value());
    for (size_t i = 0; i < s.size(); ++i) EXPECT_EQ((*got)[i], file.data[s[i]]);
    EXPECT_FALSE(rep.decode_path);
}

TEST(VeckPlus, SubsetRejections) {
    Rng rng = Rng::seeded(78);
    CommittedFile file = random_file(rng, 41);
    const std::vector<uint64_t> s{2, 9, 33};
    PlusEncOutput out = plus_enc_subset(crs(), params(), file, s, 2.0, rng);
    {
        PlusBundle b = out.bundle;
        b.c_s = kzg::commit(crs(), kzg::Poly(std::vector<Fr>{Fr::from_u64(1), Fr::from_u64(2)}));
        EXPECT_FALSE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, b));
    }
    const std::vector<uint64_t> other{2, 9, 34};
    EXPECT_FALSE(plus_ver_subset(crs(), params(), file.commitment, other, 2.0, out.bundle));
    EXPECT_FALSE(plus_ver_full(crs(), params(), file.commitment, out.bundle.code, out.bundle));
    const std::vector<uint64_t> outside{2, 41};
    EXPECT_THROW(plus_enc_subset(crs(), params(), file, outside, 2.0, rng), DomainError);
    const std::vector<uint64_t> unsorted{9, 2};
    EXPECT_THROW(plus_enc_subset(crs(), params(), file, unsorted, 2.0, rng), DomainError);
}

TEST(VeckPlus, SingletonSubset) {
    Rng rng = Rng::seeded(79);
    CommittedFile file = random_file(rng, 20);
    const std::vector<uint64_t> s{13};
    PlusEncOutput out = plus_enc_subset(crs(), params(), file, s, 2.0, rng);
    EXPECT_EQ(out.bundle.code.m, 4u);
    EXPECT_TRUE(plus_ver_subset(crs(), params(), file.commitment, s, 2.0, out.bundle));
    auto got = plus_dec(params(), out.bundle.code, out.key.sk, out.bundle.ct, s);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(got->front(), file.data[13]);
}

TEST(VeckPlus, BundleParseRejectsGarbage) {
    FullSale s;
    Bytes w = s.out.bundle.serialize();
    Bytes bad = w;
    bad[0] = 'X';
    EXPECT_THROW(PlusBundle::parse(bad), FormatError);
    bad = w;
    bad.push_back(0);
    EXPECT_THROW(PlusBundle::parse(bad), FormatError);
    bad = w;
    bad.resize(w.size() / 2);
    EXPECT_THROW(PlusBundle::parse(bad), FormatError);
}
