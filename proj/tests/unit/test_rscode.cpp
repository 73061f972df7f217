#include <gtest/gtest.h>

#include <cmath>

#include "fde/rscode/rscode.hpp"

using namespace fde;
using namespace fde::rs;

namespace {

template <class F>
std::vector<F> rand_symbols(Rng& rng, size_t n) {
    std::vector<F> v(n);
    for (auto& x : v) x = F::random(rng);
    return v;
}

template <class F>
F nonzero(Rng& rng) {
    for (;;) {
        F x = F::random(rng);
        if (!x.is_zero()) return x;
    }
}

// Independent oracle: Horner evaluation of the Lagrange interpolant.
template <class F>
std::vector<F> oracle_codeword(const CodeParams& p, const std::vector<F>& data) {
    auto poly = interpolate(EvalDomain<F>::range(p.data_len()), std::span<const F>(data));
    return evaluate(poly, EvalDomain<F>::range(p.m));
}

template <class F>
std::vector<size_t> distinct_positions(Rng& rng, size_t m, size_t count) {
    std::vector<size_t> all(m);
    for (size_t i = 0; i < m; ++i) all[i] = i;
    for (size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.uniform(m - i)]);
    all.resize(count);
    return all;
}

}  // namespace

TEST(CodeParams, LengthFromBeta) {
    EXPECT_EQ(CodeParams::from_beta(10, 2.0).m, 22u);
    EXPECT_EQ(CodeParams::from_beta(65535, 2.0).m, 131072u);
    EXPECT_EQ(CodeParams::from_beta(9, 1.5).m, 15u);
    EXPECT_EQ(CodeParams::from_beta(0, 1.5).m, 2u);
    EXPECT_THROW(CodeParams::from_beta(5, 1.0), DomainError);
    auto p = CodeParams::from_beta(7, 2.0);
    EXPECT_EQ(p.radius(), 4u);
    EXPECT_EQ(p.min_distance(), 9u);
}

TEST(RsExtend, Examples) {
    auto p = CodeParams::explicit_length(1, 4);
    std::vector<Fr> d{Fr::from_u64(1), Fr::from_u64(2)};
    auto w = rs_extend<Fr>(p, d);
    for (uint64_t i = 0; i < 4; ++i) EXPECT_EQ(w.symbols[i], Fr::from_u64(i + 1));

    auto p2 = CodeParams::from_beta(15, 2.0);
    std::vector<Fr> zeros(16);
    for (auto& s : rs_extend<Fr>(p2, zeros).symbols) EXPECT_TRUE(s.is_zero());

    Rng rng = Rng::seeded(30);
    for (uint64_t ell : {0, 1, 5, 63, 200}) {
        auto q = CodeParams::from_beta(ell, 2.0);
        auto data = rand_symbols<Fr>(rng, ell + 1);
        auto cw = rs_extend<Fr>(q, data);
        EXPECT_EQ(cw.symbols, oracle_codeword(q, data)) << ell;
        auto tdata = rand_symbols<Toy65537>(rng, ell + 1);
        EXPECT_EQ(rs_extend<Toy65537>(q, tdata).symbols, oracle_codeword(q, tdata)) << ell;
    }
}

TEST(Detector, CompressedRowIsVTimesH) {
    auto p = CodeParams::from_beta(5, 2.0);  // m = 12
    auto key = build_detector<Fr>(p, as_bytes("seed"));
    auto v = key.v_coefficients();
    ASSERT_EQ(v.size(), p.parity_len());
    for (uint64_t j = 0; j < p.m; ++j) {
        // eta_j = prod_{i != j} (j - i)^{-1}, computed directly
        Fr prod = Fr::one();
        for (uint64_t i = 0; i < p.m; ++i)
            if (i != j) prod *= Fr::from_i64(int64_t(j) - int64_t(i));
        EXPECT_EQ(key.eta[j], prod.inverse());
        Fr expect = Fr::zero(), pw = Fr::one();
        for (const auto& vr : v) {
            expect += vr * key.eta[j] * pw;
            pw *= Fr::from_u64(j);
        }
        EXPECT_EQ(key.w[j], expect);
    }
    auto again = build_detector<Fr>(p, as_bytes("seed"));
    EXPECT_EQ(again.w, key.w);
}

TEST(Detector, HonestCodewordsHaveZeroSyndrome) {
    Rng rng = Rng::seeded(31);
    auto p = CodeParams::from_beta(7, 2.0);
    auto eta = dual_multipliers<Fr>(p.m);
    for (int trial = 0; trial < 1000; ++trial) {
        auto cw = rs_extend<Fr>(p, rand_symbols<Fr>(rng, p.data_len()));
        for (auto& s : syndrome<Fr>(p, eta, cw.symbols)) ASSERT_TRUE(s.is_zero());
        cw.symbols[rng.uniform(p.m)] += nonzero<Fr>(rng);
        auto s = syndrome<Fr>(p, eta, cw.symbols);
        ASSERT_FALSE(std::all_of(s.begin(), s.end(), [](const Fr& x) { return x.is_zero(); }));
    }
}

TEST(Detect, Examples) {
    Rng rng = Rng::seeded(32);
    auto p = CodeParams::from_beta(31, 2.0);
    auto key = build_detector<Fr>(p, as_bytes("k"));
    auto cw = rs_extend<Fr>(p, rand_symbols<Fr>(rng, 32));
    EXPECT_TRUE(rs_detect(key, cw));
    EXPECT_TRUE(rs_detect(key, Codeword<Fr>::full(std::vector<Fr>(p.m))));
    for (int i = 0; i < 100; ++i) {
        auto bad = cw;
        bad.symbols[rng.uniform(p.m)] += nonzero<Fr>(rng);
        EXPECT_FALSE(rs_detect(key, bad));
    }
    auto erased = cw;
    erased.erase(3);
    EXPECT_THROW(rs_detect(key, erased), DomainError);
}

TEST(Detect, ToyFieldFalseAcceptRateIsOneOverP) {
    constexpr int kKeys = 1000, kWords = 1000;
    const double n = double(kKeys) * kWords, prob = 1.0 / Toy65537::kModulus;
    Rng rng = Rng::seeded(33);
    auto p = CodeParams::from_beta(7, 2.0);
    uint64_t accepts = 0;
    for (int k = 0; k < kKeys; ++k) {
        auto seed = Fr::random(rng).to_bytes();
        auto key = build_detector<Toy65537>(p, seed);
        for (int t = 0; t < kWords; ++t) {
            auto word = rand_symbols<Toy65537>(rng, p.m);
            accepts += freivalds_accumulator(key, std::span<const Toy65537>(word)).is_zero();
        }
    }
    const double sigma = std::sqrt(n * prob * (1 - prob));
    EXPECT_LE(std::abs(double(accepts) - n * prob), 3 * sigma) << accepts;
}

TEST(Decode, CleanWordAndExactRadius) {
    Rng rng = Rng::seeded(34);
    auto p = CodeParams::from_beta(15, 2.0);  // m = 32, radius 8
    auto targets = EvalDomain<Fr>::range(p.data_len());
    for (int trial = 0; trial < 1000; ++trial) {
        auto data = rand_symbols<Fr>(rng, p.data_len());
        auto cw = rs_extend<Fr>(p, data);
        if (trial == 0) EXPECT_EQ(*rs_decode(p, targets, cw), data);
        for (auto pos : distinct_positions<Fr>(rng, p.m, p.radius())) cw.symbols[pos] += nonzero<Fr>(rng);
        auto out = rs_decode(p, targets, cw);
        ASSERT_TRUE(out.has_value());
        ASSERT_EQ(*out, data);
    }
}

TEST(Decode, MaximumErasures) {
    Rng rng = Rng::seeded(35);
    auto p = CodeParams::from_beta(15, 2.0);
    auto targets = EvalDomain<Fr>::range(p.data_len());
    for (int trial = 0; trial < 200; ++trial) {
        auto data = rand_symbols<Fr>(rng, p.data_len());
        auto cw = rs_extend<Fr>(p, data);
        for (auto pos : distinct_positions<Fr>(rng, p.m, p.parity_len())) cw.erase(pos);
        ASSERT_EQ(*rs_decode(p, targets, cw), data);
        cw.erase(std::find(cw.erased.begin(), cw.erased.end(), 0) - cw.erased.begin());
        ASSERT_FALSE(rs_decode(p, targets, cw).has_value());
    }
}

TEST(Decode, AllErrorErasureMixesWithinBound) {
    Rng rng = Rng::seeded(36);
    auto p = CodeParams::from_beta(9, 2.0);  // m = 20, m - ell - 1 = 10
    auto targets = EvalDomain<Toy65537>::range(p.data_len());
    const uint64_t budget = p.parity_len();
    for (int trial = 0; trial < 1000; ++trial) {
        for (uint64_t e = 0; 2 * e <= budget; ++e) {
            const uint64_t s = budget - 2 * e - rng.uniform(2 * e == budget ? 1 : 2);
            auto data = rand_symbols<Toy65537>(rng, p.data_len());
            auto cw = rs_extend<Toy65537>(p, data);
            std::vector<size_t> pos;
            if (trial % 2 == 0) {
                pos = distinct_positions<Toy65537>(rng, p.m, e + s);
            } else {  // contiguous burst
                const size_t start = rng.uniform(p.m - (e + s) + 1);
                for (size_t i = 0; i < e + s; ++i) pos.push_back(start + i);
            }
            for (size_t i = 0; i < e; ++i) cw.symbols[pos[i]] += nonzero<Toy65537>(rng);
            for (size_t i = e; i < e + s; ++i) cw.erase(pos[i]);
            auto out = rs_decode(p, targets, cw);
            ASSERT_TRUE(out.has_value()) << "e=" << e << " s=" << s;
            ASSERT_EQ(*out, data);
        }
    }
}

TEST(Decode, BeyondRadiusNeverSilentlyWrong) {
    Rng rng = Rng::seeded(37);
    auto p = CodeParams::from_beta(3, 2.0);  // m = 8, radius 2
    auto all = EvalDomain<Toy65537>::range(p.m);
    uint64_t failures = 0, miscorrections = 0;
    for (int trial = 0; trial < 1000000; ++trial) {
        auto data = rand_symbols<Toy65537>(rng, p.data_len());
        auto cw = rs_extend<Toy65537>(p, data);
        const size_t e = p.radius() + 1 + rng.uniform(p.m - p.radius() - 1);
        for (auto pos : distinct_positions<Toy65537>(rng, p.m, e)) cw.symbols[pos] += nonzero<Toy65537>(rng);
        auto f = rs_decode_poly(p, cw);
        if (!f) {
            ++failures;
            continue;
        }
        // Accepted output must be a codeword within the radius of the received word.
        ASSERT_LE(f->degree(), static_cast<long>(p.ell));
        auto vals = evaluate(*f, all);
        size_t dist = 0;
        for (size_t j = 0; j < p.m; ++j) dist += !(vals[j] == cw.symbols[j]);
        ASSERT_LE(dist, p.radius());
        if (!(std::vector<Toy65537>(vals.begin(), vals.begin() + 4) == data)) ++miscorrections;
    }
    EXPECT_GT(failures, 0u);
    RecordProperty("miscorrections_onto_other_codewords", std::to_string(miscorrections));
}

TEST(CodewordDump, RoundTrip) {
    Rng rng = Rng::seeded(38);
    auto p = CodeParams::from_beta(4, 2.5);
    auto cw = rs_extend<Fr>(p, rand_symbols<Fr>(rng, 5));
    cw.erase(2);
    auto bytes = dump_codeword(p, cw);
    EXPECT_EQ(bytes.size(), 6 + 24 + p.m * 33);
    auto [p2, cw2] = load_codeword<Fr>(bytes);
    EXPECT_EQ(p2.m, p.m);
    EXPECT_EQ(p2.beta, p.beta);
    EXPECT_EQ(cw2.symbols, cw.symbols);
    EXPECT_EQ(cw2.erased, cw.erased);
    bytes[0] = 'x';
    EXPECT_THROW(load_codeword<Fr>(bytes), FormatError);
}
