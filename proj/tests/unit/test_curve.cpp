#include <gtest/gtest.h>

#include "fde/curve/groups.hpp"

using namespace fde;

TEST(Curve, GeneratorEncodings) {
    EXPECT_EQ(to_hex(G1::generator().compress()),
              "97f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb");
    EXPECT_EQ(to_hex(G2::generator().compress()),
              "93e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049334cf11213945d57e5ac7d055d042b7e"
              "024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8");
}

TEST(Curve, HashToCurveRfc9380Vector) {
    // BLS12381G1_XMD:SHA-256_SSWU_RO_, msg = "" (RFC 9380, appendix J.9.1)
    G1 p = G1::hash_to_curve({}, "QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_");
    EXPECT_EQ(to_hex(p.compress()),
              "852926add2207b76ca4fa57a8734416c8dc95e24501772c814278700eed6d1e4e8cf62d9c09db0fac349612b759e79a1");
}

TEST(Curve, CompressRoundTripAndIdentity) {
    Rng rng = Rng::seeded(11);
    for (int i = 0; i < 20; ++i) {
        G1 p = G1::generator() * Fr::random(rng);
        EXPECT_EQ(*G1::decompress(p.compress()), p);
        G2 q = G2::generator() * Fr::random(rng);
        EXPECT_EQ(*G2::decompress(q.compress()), q);
    }
    EXPECT_TRUE(G1::decompress(G1::identity().compress())->is_identity());
    EXPECT_FALSE(G1::decompress(std::vector<uint8_t>(47, 0)).has_value());
}

TEST(Curve, RejectsPointOutsideSubgroup) {
    int found = 0;
    for (uint8_t x = 1; x < 50 && found < 3; ++x) {
        std::array<uint8_t, 48> enc{};
        enc[0] = 0x80;
        enc[47] = x;
        blst_p1_affine a;
        if (blst_p1_uncompress(&a, enc.data()) != BLST_SUCCESS) continue;
        if (blst_p1_affine_in_g1(&a)) continue;
        ++found;
        EXPECT_FALSE(G1::decompress(enc).has_value());
        EXPECT_TRUE(G1::decompress(enc, false).has_value());
    }
    EXPECT_GT(found, 0);
}

TEST(Curve, Bilinearity) {
    Rng rng = Rng::seeded(12);
    Fr a = Fr::random(rng), b = Fr::random(rng);
    EXPECT_EQ(pairing(G1::generator() * a, G2::generator() * b), pairing(G1::generator() * (a * b), G2::generator()));
    EXPECT_FALSE(pairing(G1::generator(), G2::generator()).is_one());
    const std::pair<G1, G2> terms[] = {{G1::generator() * a, G2::generator() * b},
                                       {-(G1::generator() * b), G2::generator() * a}};
    EXPECT_TRUE(pairing_product_is_one(terms));
}

TEST(Curve, MsmMatchesNaive) {
    Rng rng = Rng::seeded(13);
    for (size_t n : {1, 2, 7, 40, 300}) {
        std::vector<G1> pts;
        std::vector<Fr> ks;
        G1 naive;
        for (size_t i = 0; i < n; ++i) {
            pts.push_back(G1::generator() * Fr::random(rng));
            ks.push_back(i % 5 == 3 ? Fr::zero() : Fr::random(rng));
            naive += pts.back() * ks.back();
        }
        EXPECT_EQ(msm(std::span<const G1>(pts), ks), naive) << n;
    }
    std::vector<G1> with_inf{G1::identity(), G1::generator()};
    std::vector<Fr> ks{Fr::from_u64(5), Fr::from_u64(3)};
    EXPECT_EQ(msm(std::span<const G1>(with_inf), ks), G1::generator().mul_small(3));

    std::vector<G2> q2;
    std::vector<Fr> k2;
    G2 naive2;
    for (int i = 0; i < 50; ++i) {
        q2.push_back(G2::generator() * Fr::random(rng));
        k2.push_back(Fr::random(rng));
        naive2 += q2.back() * k2.back();
    }
    auto aff = batch_affine(std::span<const G2>(q2));
    EXPECT_EQ(msm(std::span<const blst_p2_affine>(aff), k2), naive2);
}

TEST(Curve, FixedBaseMatchesVariableBase) {
    Rng rng = Rng::seeded(14);
    G1 base = G1::hash_to_curve(as_bytes("x"), "test");
    G1FixedBase t1(base);
    G2FixedBase t2(G2::generator());
    for (int i = 0; i < 20; ++i) {
        Fr k = Fr::random(rng);
        EXPECT_EQ(t1.mul(k), base * k);
        EXPECT_EQ(t2.mul(k), G2::generator() * k);
    }
    EXPECT_TRUE(t1.mul(Fr::zero()).is_identity());
    EXPECT_EQ(t1.mul(-Fr::one()), -base);
}
