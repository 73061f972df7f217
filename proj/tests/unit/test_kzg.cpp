#include <gtest/gtest.h>

#include "fde/kzg/kzg.hpp"

using namespace fde;
using namespace fde::kzg;

namespace {

Poly random_poly(Rng& rng, size_t n) {
    std::vector<Fr> c(n);
    for (auto& x : c) x = Fr::random(rng);
    return Poly(c);
}

const Crs& dev_crs() {
    static const Crs crs = Crs::setup_dev(64, Fr::from_u64(0x1234567));
    return crs;
}

}  // namespace

TEST(Kzg, SetupDegreeOneIsDirectDefinition) {
    Crs crs = Crs::setup_dev(1, Fr::from_u64(5));
    EXPECT_EQ(crs.g1(0), G1::generator());
    EXPECT_EQ(crs.g1(1), G1::generator().mul_small(5));
    EXPECT_EQ(crs.g2(1), G2::generator() * Fr::from_u64(5));
    EXPECT_THROW(Crs::setup_dev(0, Fr::one()), DomainError);
}

TEST(Kzg, SpotCheckAcceptsHonestAndRejectsSwapped) {
    Rng rng = Rng::seeded(20);
    Crs crs = Crs::setup(16, rng);
    EXPECT_FALSE(crs.insecure_tau().has_value());
    EXPECT_TRUE(crs.spot_check(rng));
    Crs bad = crs;
    bad.swap_g1_powers_for_testing(3, 9);
    EXPECT_FALSE(bad.spot_check(rng));
}

TEST(Kzg, SerializationRoundTrip) {
    const Crs& crs = dev_crs();
    Bytes b = crs.serialize();
    EXPECT_EQ(b.size(), 7 + 8 + 65 * (48 + 96));
    Crs back = Crs::deserialize(b);
    EXPECT_EQ(back.digest(), crs.digest());
    b[0] = 'X';
    EXPECT_THROW(Crs::deserialize(b), FormatError);

    Crs swapped = Crs::setup_dev(8, Fr::from_u64(77));
    swapped.swap_g1_powers_for_testing(2, 5);
    EXPECT_THROW(Crs::deserialize(swapped.serialize()), FormatError);
}

TEST(Kzg, CommitExamples) {
    const Crs& crs = dev_crs();
    EXPECT_TRUE(commit(crs, Poly()).is_identity());
    EXPECT_EQ(commit(crs, Poly::constant(Fr::from_u64(42))), G1::generator().mul_small(42));
    Rng rng = Rng::seeded(21);
    for (int i = 0; i < 10; ++i) {
        Poly p = random_poly(rng, 1 + i * 6);
        EXPECT_EQ(commit(crs, p), G1::generator() * p.eval(*crs.insecure_tau()));
    }
    EXPECT_THROW(commit(crs, random_poly(rng, 66)), DomainError);
}

TEST(Kzg, OpenVerifyCompleteness) {
    const Crs& crs = dev_crs();
    Rng rng = Rng::seeded(22);
    for (int trial = 0; trial < 1000; ++trial) {
        Poly p = random_poly(rng, 1 + rng.uniform(12));
        Fr i = Fr::random(rng);
        G1 c = commit(crs, p);
        auto op = open(crs, p, i);
        ASSERT_EQ(op.value, p.eval(i));
        ASSERT_TRUE(verify(crs, c, i, op.value, op.proof));
        if (trial % 20 == 0) {
            EXPECT_FALSE(verify(crs, c, i, op.value + Fr::one(), op.proof));
            if (p.degree() >= 1) EXPECT_FALSE(verify(crs, c, i + Fr::one(), op.value, op.proof));
            EXPECT_FALSE(verify(crs, c, i, op.value, op.proof + G1::generator()));
        }
    }
}

TEST(Kzg, OpenEdgeCases) {
    const Crs& crs = dev_crs();
    auto op = open(crs, Poly::constant(Fr::from_u64(9)), Fr::from_u64(3));
    EXPECT_TRUE(op.proof.is_identity());
    EXPECT_TRUE(verify(crs, G1::identity(), Fr::from_u64(5), Fr::zero(), G1::identity()));
}

TEST(Kzg, BatchOpenVerify) {
    const Crs& crs = dev_crs();
    Rng rng = Rng::seeded(23);

    Poly p = random_poly(rng, 40);
    G1 c = commit(crs, p);
    // |S| = 1 reduces to open
    auto one = Domain::from_indices(std::vector<uint64_t>{7});
    EXPECT_EQ(batch_open(crs, p, one), open(crs, p, Fr::from_u64(7)).proof);

    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Fr> pts(16);
        for (auto& x : pts) x = Fr::random(rng);
        Domain s(pts);
        auto vals = evaluate(p, s);
        G1 proof = batch_open(crs, p, s);
        ASSERT_TRUE(batch_verify(crs, c, s, vals, proof));
        G2 w = vanishing_g2(crs, s);
        ASSERT_TRUE(batch_verify(crs, c, s, vals, proof, w));
        vals[trial % 16] += Fr::one();
        ASSERT_FALSE(batch_verify(crs, c, s, vals, proof));
        ASSERT_FALSE(batch_verify(crs, c, s, vals, proof, w));
    }
    EXPECT_THROW(batch_verify(crs, c, one, std::vector<Fr>{}, G1()), DomainError);
}

TEST(Kzg, BatchProofOfVanishingPolynomial) {
    const Crs& crs = dev_crs();
    Rng rng = Rng::seeded(24);
    auto s = Domain::from_indices(std::vector<uint64_t>{1, 4, 9, 16, 25});
    Poly r = random_poly(rng, 10);
    Poly p = r * vanishing(s);
    G1 proof = batch_open(crs, p, s);
    EXPECT_EQ(proof, commit(crs, r));
    std::vector<Fr> zeros(5);
    G1 c = commit(crs, p);
    EXPECT_TRUE(batch_verify(crs, c, s, zeros, proof));
    EXPECT_TRUE(batch_verify_zero(c, proof, vanishing_g2(crs, s)));
    EXPECT_FALSE(batch_verify_zero(c + G1::generator(), proof, vanishing_g2(crs, s)));
}

TEST(Kzg, VanishingHint) {
    const Crs& crs = dev_crs();
    auto s = Domain::from_indices(std::vector<uint64_t>{2, 3, 5, 7, 11, 13});
    auto hint = make_vanishing_hint(crs, s);
    EXPECT_EQ(hint.w, G2::generator() * vanishing(s).eval(*crs.insecure_tau()));
    EXPECT_TRUE(check_vanishing_hint(crs, s, hint));
    auto forged = hint;
    forged.w = forged.w + G2::generator();
    EXPECT_FALSE(check_vanishing_hint(crs, s, forged));
    auto other = Domain::from_indices(std::vector<uint64_t>{2, 3, 5, 7, 11, 17});
    EXPECT_FALSE(check_vanishing_hint(crs, other, hint));
}
