#include <gtest/gtest.h>

#include <algorithm>

#include "fde/veck/star.hpp"

using namespace fde;
using namespace fde::veck;

namespace {

const kzg::Crs& crs() {
    static const kzg::Crs c = kzg::Crs::setup_dev(512, Fr::from_u64(0x5151));
    return c;
}

const VeckParams& params() {
    static const VeckParams pp = gen(crs(), 0);
    return pp;
}

const TransparentBackend& backend() {
    static const TransparentBackend b(SessionMode::kTestOnly);
    return b;
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

std::vector<uint64_t> sample_of(const StarBundle& b, const G1& c_phi) {
    const uint8_t id[1] = {static_cast<uint8_t>(b.mask_hash)};
    return sample_positions("veck*", crs().digest(), c_phi, b.vk, masked_digest(b.masked), b.code.m, b.sample_count,
                            id);
}

struct Sale {
    Rng rng;
    CommittedFile file;
    rs::CodeParams code;
    StarEncOutput out;

    explicit Sale(size_t n, uint64_t seed = 42, MaskHash hash = MaskHash::kTranscript)
        : rng(Rng::seeded(seed)),
          file(random_file(rng, n)),
          code(rs::CodeParams::from_beta(n - 1, 2.0)),
          out(star_enc(crs(), params(), file, 2.0, backend(), rng, hash)) {}

    bool verify(const StarBundle& b, std::string* why = nullptr) const {
        return star_ver(crs(), params(), file.commitment, code, b, &backend(), why);
    }
};

}  // namespace

TEST(VeckStar, MaskMatchesFrozenOracle) {
    // SHA-256 expansion reduced mod r, computed independently in Python.
    const Bytes raw = from_hex("8787a87edc2471b1bb0f2bee7c914917553bf313973a06fa74d656bbdf958d4a");
    const auto want = Fr::from_bytes(std::span<const uint8_t, 32>(raw.data(), 32));
    ASSERT_TRUE(want.has_value());
    EXPECT_EQ(mask_at(Fr::from_u64(5), 7), *want);
    auto stream = mask_stream(Fr::from_u64(5), 5, 4);
    EXPECT_EQ(stream[2], *want);
    for (uint64_t k = 0; k < 4; ++k) EXPECT_EQ(stream[k], mask_at(Fr::from_u64(5), 5 + k));
}

TEST(VeckStar, MaskStreamsAreKeyed) {
    Rng rng = Rng::seeded(1);
    const Fr sk = Fr::random(rng);
    EXPECT_EQ(mask_stream(sk, 0, 10), mask_stream(sk, 0, 10));
    const auto a = mask_stream(sk, 0, 1000), b = mask_stream(sk + Fr::one(), 0, 1000);
    size_t same = 0;
    for (size_t i = 0; i < 1000; ++i) same += a[i] == b[i];
    EXPECT_EQ(same, 0u);

    const auto alg = mask_stream(sk, 0, 100, MaskHash::kAlgebraic);
    EXPECT_EQ(alg, mask_stream(sk, 0, 100, MaskHash::kAlgebraic));
    std::vector<Fr> sorted(alg);
    std::sort(sorted.begin(), sorted.end(), [](const Fr& x, const Fr& y) { return x.to_bytes() < y.to_bytes(); });
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    for (size_t i = 0; i < 100; ++i) EXPECT_NE(alg[i], a[i]);
}

TEST(VeckStar, HonestRoundtrip) {
    Sale s(200);
    EXPECT_EQ(s.out.bundle.sample_count, 128u);
    EXPECT_EQ(s.out.bundle.masked.size(), s.code.m);
    std::string why;
    EXPECT_TRUE(s.verify(s.out.bundle, &why)) << why;
    EXPECT_TRUE(s.verify(StarBundle::parse(s.out.bundle.serialize())));

    DecodeReport rep;
    auto got = star_dec(s.code, s.out.key.sk, s.out.bundle.masked, iota(200), MaskHash::kTranscript, &rep);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s.file.data);
    EXPECT_TRUE(rep.detector_clean);
    EXPECT_FALSE(rep.decode_path);

    // Two layers agree: the unmasked symbol at each sampled position equals
    // the ElGamal decryption of ct'.
    const auto sampled = sample_of(s.out.bundle, s.file.commitment);
    const VeckParams ppm = params().for_length(s.code.m);
    for (size_t i = 0; i < sampled.size(); ++i) {
        const Fr unmasked = s.out.bundle.masked[sampled[i]] - mask_at(s.out.key.sk, sampled[i]);
        EXPECT_EQ(dec_block(ppm, s.out.key.sk, s.out.bundle.proof.ct_prime[i]), unmasked);
    }
}

TEST(VeckStar, AlgebraicMaskHashRoundtrip) {
    Sale s(40, 9, MaskHash::kAlgebraic);
    EXPECT_TRUE(s.verify(s.out.bundle));
    auto got = star_dec(s.code, s.out.key.sk, s.out.bundle.masked, iota(40), MaskHash::kAlgebraic);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s.file.data);
    EXPECT_FALSE(star_dec(s.code, s.out.key.sk, s.out.bundle.masked, iota(40), MaskHash::kTranscript).has_value());
    StarBundle b = s.out.bundle;
    b.mask_hash = MaskHash::kTranscript;
    EXPECT_FALSE(s.verify(b));
}

TEST(VeckStar, BandwidthIsAboutBeta) {
    Sale s(200);
    const double plain = 200.0 * 32;
    const double masked = s.code.m * 32.0;
    EXPECT_DOUBLE_EQ(masked / plain, 2.0);
}

TEST(VeckStar, SampledMaskPerturbationRejectedByBackend) {
    // A seller who corrupts a masked symbol before proving, where the sample
    // then lands on it: the ElGamal layer is honest, the mask layer is not.
    Sale s(60);
    const auto word = rs::rs_extend<Fr>(s.code, s.file.data);
    const auto masked = star_mask(word.symbols, s.out.key.sk);
    bool caught = false;
    for (uint64_t victim = 0; victim < s.code.m && !caught; ++victim) {
        auto cheat = masked;
        cheat[victim] += Fr::one();
        const uint8_t id[1] = {0};
        const auto sampled = sample_positions("veck*", crs().digest(), s.file.commitment, s.out.key.vk,
                                              masked_digest(cheat), s.code.m, sample_size(60, 2.0), id);
        if (!std::binary_search(sampled.begin(), sampled.end(), victim)) continue;
        StarBundle b = star_prove(crs(), params(), s.file, s.code, backend(), s.out.key, word.symbols, cheat, s.rng);
        std::string why;
        EXPECT_FALSE(s.verify(b, &why));
        EXPECT_EQ(why, "mask consistency proof failed");
        caught = true;
    }
    EXPECT_TRUE(caught);
}

TEST(VeckStar, NonSampledMaskPerturbationAcceptedThenCorrected) {
    Sale s(200);
    const auto word = rs::rs_extend<Fr>(s.code, s.file.data);
    const auto masked = star_mask(word.symbols, s.out.key.sk);
    for (uint64_t victim = 0;; ++victim) {
        auto cheat = masked;
        cheat[victim] += Fr::one();
        const uint8_t id[1] = {0};
        const auto sampled = sample_positions("veck*", crs().digest(), s.file.commitment, s.out.key.vk,
                                              masked_digest(cheat), s.code.m, 128, id);
        if (std::binary_search(sampled.begin(), sampled.end(), victim)) continue;
        StarBundle b = star_prove(crs(), params(), s.file, s.code, backend(), s.out.key, word.symbols, cheat, s.rng);
        EXPECT_TRUE(s.verify(b));
        DecodeReport rep;
        auto got = star_dec(s.code, s.out.key.sk, b.masked, iota(200), MaskHash::kTranscript, &rep);
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, s.file.data);
        EXPECT_TRUE(rep.decode_path);
        break;
    }
}

TEST(VeckStar, PostProofTamperingRejected) {
    Sale s(60);
    const auto sampled = sample_of(s.out.bundle, s.file.commitment);
    {
        StarBundle b = s.out.bundle;
        b.masked[sampled[0]] += Fr::one();
        EXPECT_FALSE(s.verify(b));
    }
    {
        StarBundle b = s.out.bundle;
        b.proof.ct_prime[1].chunks[0] = (*G1::decompress(b.proof.ct_prime[1].chunks[0]) + G1::generator()).compress();
        EXPECT_FALSE(s.verify(b));
    }
    {
        StarBundle b = s.out.bundle;
        b.vk = b.vk + G1::generator();
        EXPECT_FALSE(s.verify(b));
    }
    {
        StarBundle b = s.out.bundle;
        b.proof.pi_z[40] ^= 1;
        EXPECT_FALSE(s.verify(b));
    }
    EXPECT_FALSE(star_ver(crs(), params(), s.file.commitment + G1::generator(), s.code, s.out.bundle, &backend()));
}

TEST(VeckStar, DecodeCorrectionsAndZeroFile) {
    Sale s(60);
    Rng rng = Rng::seeded(3);
    auto masked = s.out.bundle.masked;
    for (uint64_t i = 0; i < s.code.radius(); ++i) masked[3 * i] = Fr::random(rng);
    auto got = star_dec(s.code, s.out.key.sk, masked, iota(60));
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s.file.data);
    for (uint64_t i = 0; i < s.code.m - s.code.ell; ++i) masked[i] = Fr::random(rng);
    EXPECT_FALSE(star_dec(s.code, s.out.key.sk, masked, iota(60)).has_value());

    auto zero = CommittedFile::from_data(crs(), std::vector<Fr>(30, Fr::zero()));
    auto out = star_enc(crs(), params(), zero, 2.0, backend(), rng);
    DecodeReport rep;
    auto z = star_dec(out.bundle.code, out.key.sk, out.bundle.masked, iota(30), MaskHash::kTranscript, &rep);
    ASSERT_TRUE(z.has_value());
    EXPECT_EQ(*z, zero.data);
    EXPECT_TRUE(rep.detector_clean);
}

TEST(VeckStar, TransparentBackendRefusesProduction) {
    Sale s(20);
    TransparentBackend prod(SessionMode::kProduction);
    std::string why;
    EXPECT_FALSE(star_ver(crs(), params(), s.file.commitment, s.code, s.out.bundle, &prod, &why));
    EXPECT_NE(why.find("backend unavailable"), std::string::npos);
    EXPECT_FALSE(star_ver(crs(), params(), s.file.commitment, s.code, s.out.bundle, nullptr, &why));
    EXPECT_THROW(star_enc(crs(), params(), s.file, 2.0, prod, s.rng), BackendError);
}

TEST(VeckStar, TransparentBackendChecksRelation) {
    const VeckParams pp = params().for_length(16);
    Rng rng = Rng::seeded(4);
    const Keypair key = Keypair::generate(pp, rng);
    const std::vector<uint64_t> sampled{2, 5, 11};
    std::vector<Fr> x{Fr::from_u64(7), Fr::random(rng), Fr::zero()};
    std::vector<Fr> masked(3);
    std::vector<int64_t> idx{2, 5, 11};
    for (size_t i = 0; i < 3; ++i) masked[i] = x[i] + mask_at(key.sk, sampled[i]);
    const auto ct = enc1(pp, idx, x, key);
    const ConsistencyStatement st{&pp, key.vk, MaskHash::kTranscript, sampled, masked, ct};
    EXPECT_TRUE(backend().verify(st, backend().prove(st, {key.sk, x})));
    auto off = x;
    off[1] += Fr::one();
    EXPECT_FALSE(backend().verify(st, backend().prove(st, {key.sk, off})));
    EXPECT_FALSE(backend().verify(st, backend().prove(st, {key.sk + Fr::one(), x})));
}

TEST(VeckStar, BulkPathUsesNoGroupOperations) {
    Sale small(200, 5), large(400, 6);
    const uint64_t before_dec = CurveOpCounter::get();
    auto got = star_dec(large.code, large.out.key.sk, large.out.bundle.masked, iota(400));
    EXPECT_EQ(CurveOpCounter::get(), before_dec);
    ASSERT_TRUE(got.has_value());

    auto count_enc = [](Sale& s) {
        const uint64_t before = CurveOpCounter::get();
        star_enc(crs(), params(), s.file, 2.0, backend(), s.out.key, s.rng);
        return CurveOpCounter::get() - before;
    };
    const uint64_t ops_small = count_enc(small), ops_large = count_enc(large);
    EXPECT_EQ(ops_small, ops_large);
    EXPECT_LT(ops_small, 128u * 16 * 8);

    // Proof bytes do not depend on the file size.
    auto proof_bytes = [](const StarBundle& b) { return b.serialize().size() - 32 * b.masked.size(); };
    EXPECT_EQ(proof_bytes(small.out.bundle), proof_bytes(large.out.bundle));
}
