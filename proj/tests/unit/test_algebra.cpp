#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fde/algebra/consecutive.hpp"
#include "fde/algebra/domain.hpp"
#include "fde/algebra/ntt.hpp"
#include "fde/algebra/polynomial.hpp"
#include "fde/algebra/transcript.hpp"

using namespace fde;

namespace {

template <class F>
std::vector<F> random_vec(Rng& rng, size_t n) {
    std::vector<F> v(n);
    for (auto& x : v) x = F::random(rng);
    return v;
}

template <class F>
Polynomial<F> poly(std::initializer_list<int64_t> c) {
    std::vector<F> v;
    for (auto x : c) v.push_back(F::from_i64(x));
    return Polynomial<F>(v);
}

// Independent oracle: naive O(n*m) product.
template <class F>
std::vector<F> naive_mul(const std::vector<F>& a, const std::vector<F>& b) {
    std::vector<F> out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

}  // namespace

TEST(Fr, WideReductionOfAllOnes) {
    std::vector<uint8_t> ff(64, 0xff);
    // (2^512 - 1) mod r, computed with Python big integers.
    EXPECT_EQ(to_hex(Fr::from_wide_bytes(ff).to_bytes()),
              "6c9cf2f390e999c9235c9287cbed6c2b8f3954729614d30511ff599fd9d94807");
}

TEST(Fr, CanonicalDecodingRejectsModulus) {
    auto r = from_hex("01000000fffffffffe5bfeff02a4bd5305d8a10908d83933487d9d2953a7ed73");
    EXPECT_THROW(Fr::from_bytes_checked(r), FormatError);
    r[0] = 0;
    EXPECT_NO_THROW(Fr::from_bytes_checked(r));
}

TEST(Fr, InverseAndNegatives) {
    Rng rng = Rng::seeded(1);
    for (int i = 0; i < 100; ++i) {
        Fr a = Fr::random(rng);
        if (a.is_zero()) continue;
        EXPECT_EQ(a * a.inverse(), Fr::one());
    }
    EXPECT_EQ(Fr::from_i64(-3) + Fr::from_u64(3), Fr::zero());
    EXPECT_THROW(Fr::zero().inverse(), DomainError);
}

TEST(Fr, RootOfUnityHasExactOrder) {
    for (unsigned k : {1u, 5u, 20u, 32u}) {
        Fr w = Fr::root_of_unity(k);
        Fr x = w;
        for (unsigned i = 1; i < k; ++i) x = x.square();
        EXPECT_EQ(x, -Fr::one()) << k;
    }
    Toy65537 w = Toy65537::root_of_unity(16);
    Toy65537 x = w;
    for (int i = 1; i < 16; ++i) x = x * x;
    EXPECT_EQ(x, -Toy65537::one());
}

TEST(PolyEval, Examples) {
    EXPECT_EQ(Polynomial<Fr>(std::vector<Fr>{Fr::zero()}).eval(Fr::from_u64(7)), Fr::zero());
    EXPECT_EQ(poly<Fr>({1, 1}).eval(Fr::from_u64(4)), Fr::from_u64(5));
    EXPECT_EQ(poly<Fr>({2, 0, 3}).eval(Fr::from_u64(5)), Fr::from_u64(2 + 3 * 25));
}

TEST(Ntt, RoundTripAndConvolutionMatchesNaive) {
    Rng rng = Rng::seeded(2);
    auto a = random_vec<Fr>(rng, 256);
    auto b = a;
    ntt<Fr>(std::span<Fr>(b), false);
    ntt<Fr>(std::span<Fr>(b), true);
    EXPECT_EQ(a, b);
    for (size_t n : {1, 5, 64, 100, 300}) {
        auto x = random_vec<Fr>(rng, n), y = random_vec<Fr>(rng, n + 7);
        EXPECT_EQ(convolve<Fr>(x, y), naive_mul(x, y)) << n;
        auto tx = random_vec<Toy65537>(rng, n), ty = random_vec<Toy65537>(rng, 2 * n);
        EXPECT_EQ(convolve<Toy65537>(tx, ty), naive_mul(tx, ty)) << n;
    }
}

TEST(Interpolate, Examples) {
    auto one = EvalDomain<Fr>::from_indices(std::vector<uint64_t>{3});
    std::vector<Fr> v{Fr::from_u64(9)};
    EXPECT_EQ(interpolate(one, std::span<const Fr>(v)), poly<Fr>({9}));
    auto two = EvalDomain<Fr>::from_indices(std::vector<uint64_t>{0, 1});
    std::vector<Fr> v2{Fr::from_u64(1), Fr::from_u64(2)};
    EXPECT_EQ(interpolate(two, std::span<const Fr>(v2)), poly<Fr>({1, 1}));
    EXPECT_THROW(EvalDomain<Fr>::from_indices(std::vector<uint64_t>{4, 2, 4}), DomainError);
}

TEST(Interpolate, RoundTripArbitraryAndConsecutive) {
    Rng rng = Rng::seeded(3);
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial<Fr> p(random_vec<Fr>(rng, 8));
        auto d = EvalDomain<Fr>(random_vec<Fr>(rng, 8));
        auto vals = evaluate(p, d);
        EXPECT_EQ(interpolate(d, std::span<const Fr>(vals)), p);
    }
    for (size_t k : {1, 2, 3, 31, 32, 33, 64, 65, 200, 700}) {
        Polynomial<Fr> p(random_vec<Fr>(rng, k));
        auto d = EvalDomain<Fr>::range(k);
        auto vals = evaluate(p, d);
        EXPECT_EQ(Polynomial<Fr>(interpolate_consecutive<Fr>(vals)), p) << k;
        Polynomial<Toy65537> tp(random_vec<Toy65537>(rng, k));
        auto td = EvalDomain<Toy65537>::range(k);
        auto tv = evaluate(tp, td);
        EXPECT_EQ(Polynomial<Toy65537>(interpolate_consecutive<Toy65537>(tv)), tp) << k;
    }
}

TEST(ExtendConsecutive, MatchesHornerAfterAndBefore) {
    Rng rng = Rng::seeded(4);
    for (size_t k : {1, 2, 17, 100, 129}) {
        Polynomial<Fr> p(random_vec<Fr>(rng, k));
        for (int64_t a : {0, 5, 300}) {
            std::vector<Fr> src;
            for (size_t j = 0; j < k; ++j) src.push_back(p.eval(Fr::from_i64(a + j)));
            const int64_t after = a + static_cast<int64_t>(k) + 3;
            auto out = extend_consecutive<Fr>(src, a, after, 50);
            for (size_t t = 0; t < 50; ++t) ASSERT_EQ(out[t], p.eval(Fr::from_i64(after + t)));
            const int64_t before = a - 60;
            auto out2 = extend_consecutive<Fr>(src, a, before, 60);
            for (size_t t = 0; t < 60; ++t) ASSERT_EQ(out2[t], p.eval(Fr::from_i64(before + t)));
        }
    }
    std::vector<Fr> src(4, Fr::one());
    EXPECT_THROW(extend_consecutive<Fr>(src, 0, 2, 5), DomainError);
}

TEST(Vanishing, Examples) {
    auto d0 = EvalDomain<Fr>::from_indices(std::vector<uint64_t>{0});
    EXPECT_EQ(vanishing(d0), poly<Fr>({0, 1}));
    auto d12 = EvalDomain<Fr>::from_indices(std::vector<uint64_t>{1, 2});
    EXPECT_EQ(vanishing(d12), poly<Fr>({2, -3, 1}));
    Rng rng = Rng::seeded(5);
    for (size_t n : {10, 150}) {
        auto d = EvalDomain<Fr>(random_vec<Fr>(rng, n));
        auto v = vanishing(d);
        EXPECT_EQ(v.degree(), static_cast<long>(n));
        EXPECT_EQ(v.leading(), Fr::one());
        for (const auto& x : d.points()) EXPECT_TRUE(v.eval(x).is_zero());
    }
}

TEST(DivideExact, Examples) {
    EXPECT_EQ(divide_exact(poly<Fr>({-1, 0, 1}), poly<Fr>({-1, 1})), poly<Fr>({1, 1}));
    EXPECT_THROW(divide_exact(poly<Fr>({1, 0, 1}), poly<Fr>({0, 1})), DomainError);
    EXPECT_THROW(divide_exact(poly<Fr>({1}), Polynomial<Fr>()), DomainError);
    Rng rng = Rng::seeded(6);
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial<Fr> r(random_vec<Fr>(rng, 1 + trial));
        Fr a = Fr::random(rng), b = Fr::random(rng);
        auto den = Polynomial<Fr>::linear_root(a) * Polynomial<Fr>::linear_root(b);
        EXPECT_EQ(divide_exact(r * den, den), r);
        Polynomial<Fr> big(random_vec<Fr>(rng, 3 + trial));
        EXPECT_EQ(divide_exact(big * r, r), big);
    }
}

TEST(DivRem, ReconstructsNumerator) {
    Rng rng = Rng::seeded(7);
    Polynomial<Fr> n(random_vec<Fr>(rng, 40)), d(random_vec<Fr>(rng, 9));
    auto [q, r] = div_rem(n, d);
    EXPECT_LT(r.degree(), d.degree());
    EXPECT_EQ(q * d + r, n);
}

TEST(Transcript, DeterministicAndSensitive) {
    auto make = [](uint8_t last) {
        Transcript t("test");
        std::vector<uint8_t> msg{1, 2, 3, last};
        t.absorb("msg", msg);
        return t.challenge_scalars<Fr>("c", 3);
    };
    EXPECT_EQ(make(0), make(0));
    EXPECT_TRUE(Transcript("x").challenge_scalars<Fr>("c", 0).empty());

    std::set<std::array<uint8_t, 32>> seen;
    for (uint32_t i = 0; i < 10000; ++i) {
        Transcript t("test");
        uint8_t b[4] = {uint8_t(i), uint8_t(i >> 8), 0, 0};
        t.absorb("msg", b);
        seen.insert(t.challenge_scalar<Fr>("c").to_bytes());
    }
    EXPECT_EQ(seen.size(), 10000u);
}

TEST(Transcript, FramingSeparatesLabelAndData) {
    Transcript a("p"), b("p");
    a.absorb("ab", as_bytes("c"));
    b.absorb("a", as_bytes("bc"));
    EXPECT_NE(a.challenge_bytes("x"), b.challenge_bytes("x"));
    Transcript c("p"), d("p");
    EXPECT_NE(c.challenge_bytes("x"), d.challenge_bytes("y"));
    // successive challenges under the same label differ
    EXPECT_NE(c.challenge_bytes("x"), c.challenge_bytes("x"));
}

TEST(DeriveSubset, FullSetAndDeterminism) {
    std::vector<uint8_t> seed{9, 9};
    auto all = derive_subset(seed, 37, 37);
    for (uint64_t i = 0; i < 37; ++i) EXPECT_EQ(all[i], i);
    EXPECT_EQ(derive_subset(seed, 1000, 20), derive_subset(seed, 1000, 20));
    EXPECT_THROW(derive_subset(seed, 5, 6), DomainError);
    EXPECT_THROW(derive_subset(seed, 5, 0), DomainError);
}

TEST(DeriveSubset, DistinctInRangeSorted) {
    Rng rng = Rng::seeded(8);
    for (int trial = 0; trial < 500; ++trial) {
        uint64_t m = 1 + rng.uniform(300), k = 1 + rng.uniform(m);
        auto seed = Fr::random(rng).to_bytes();
        auto s = derive_subset(seed, m, k);
        ASSERT_EQ(s.size(), k);
        for (size_t i = 0; i < k; ++i) {
            ASSERT_LT(s[i], m);
            if (i) ASSERT_LT(s[i - 1], s[i]);
        }
    }
}

TEST(DeriveSubset, InclusionFrequencyIsUniform) {
    constexpr int kTrials = 10000;
    constexpr uint64_t m = 1024, k = 128;
    std::vector<int> hits(m);
    for (uint32_t t = 0; t < kTrials; ++t) {
        uint8_t seed[4] = {uint8_t(t), uint8_t(t >> 8), uint8_t(t >> 16), 0x5a};
        for (auto i : derive_subset(seed, m, k)) ++hits[i];
    }
    const double p = double(k) / m, mean = kTrials * p, sigma = std::sqrt(kTrials * p * (1 - p));
    int outside = 0;
    double worst = 0;
    for (int h : hits) {
        const double z = std::abs(h - mean) / sigma;
        worst = std::max(worst, z);
        if (z > 3) ++outside;
    }
    // 1024 simultaneous 3-sigma tests: ~2.8 exceedances expected by chance.
    EXPECT_LE(outside, 10);
    EXPECT_LT(worst, 5.0);
}
