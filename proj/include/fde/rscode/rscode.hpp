#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fde/algebra/consecutive.hpp"
#include "fde/algebra/domain.hpp"
#include "fde/algebra/polynomial.hpp"
#include "fde/algebra/transcript.hpp"

namespace fde::rs {

/// Code over the points 0..m-1. Data symbols sit at 0..ell (ell+1 of them),
/// parity symbols at ell+1..m-1.
struct CodeParams {
    uint64_t ell = 0;
    uint64_t m = 0;
    double beta = 2.0;

    /// m = ceil(beta * (ell + 1)); throws unless beta > 1 and m >= ell + 2.
    static CodeParams from_beta(uint64_t ell, double beta) {
        if (!(beta > 1.0)) throw DomainError("rate expansion beta must exceed 1");
        const long double exact = static_cast<long double>(beta) * static_cast<long double>(ell + 1);
        auto m = static_cast<uint64_t>(std::ceil(exact - 1e-9L));
        if (m < ell + 2) m = ell + 2;
        return {ell, m, beta};
    }
    static CodeParams explicit_length(uint64_t ell, uint64_t m) {
        if (m < ell + 2) throw DomainError("codeword length must be at least ell + 2");
        return {ell, m, static_cast<double>(m) / static_cast<double>(ell + 1)};
    }

    uint64_t data_len() const { return ell + 1; }
    uint64_t parity_len() const { return m - ell - 1; }
    uint64_t min_distance() const { return m - ell; }
    uint64_t radius() const { return (m - ell - 1) / 2; }
};

/// Received word: symbols plus per-position erasure marks. Erased positions
/// carry zero in symbols.
template <PrimeField F>
struct Codeword {
    std::vector<F> symbols;
    std::vector<uint8_t> erased;

    static Codeword full(std::vector<F> s) {
        Codeword w;
        w.erased.assign(s.size(), 0);
        w.symbols = std::move(s);
        return w;
    }
    size_t size() const { return symbols.size(); }
    size_t erasure_count() const {
        size_t n = 0;
        for (auto e : erased) n += e != 0;
        return n;
    }
    void erase(size_t i) {
        erased[i] = 1;
        symbols[i] = F::zero();
    }
};

/// Systematic extension: positions 0..ell are the data, the rest are the
/// evaluations of the degree-ell interpolant at ell+1..m-1.
template <PrimeField F>
Codeword<F> rs_extend(const CodeParams& p, std::span<const F> data) {
    if (data.size() != p.data_len()) throw DomainError("rs_extend: expected ell+1 data symbols");
    std::vector<F> out(data.begin(), data.end());
    auto parity = extend_consecutive<F>(data, 0, static_cast<int64_t>(p.ell + 1), p.parity_len());
    out.insert(out.end(), parity.begin(), parity.end());
    return Codeword<F>::full(std::move(out));
}

/// Dual multipliers eta_j = prod_{i != j} (j - i)^{-1} over 0..m-1.
template <PrimeField F>
std::vector<F> dual_multipliers(uint64_t m) {
    Factorials<F> fc(m);
    std::vector<F> eta(m);
    for (uint64_t j = 0; j < m; ++j) {
        F e = fc.inv_fact[j] * fc.inv_fact[m - 1 - j];
        eta[j] = ((m - 1 - j) & 1) ? -e : e;
    }
    return eta;
}

/// Compressed parity check w = v^T H with H[r][j] = eta_j * j^r,
/// r = 0..m-ell-2. The random row combination v is represented by the
/// polynomial V(X) = sum_r v_r X^r, drawn through its values at the parity
/// points ell+1..m-1, so w_j = eta_j * V(j).
template <PrimeField F>
struct DetectorKey {
    CodeParams params;
    std::vector<F> eta;
    std::vector<F> w;
    std::vector<F> v_values;  // V at ell+1..m-1

    /// Coefficients v_0..v_{m-ell-2}; O(parity^2), for tests.
    std::vector<F> v_coefficients() const {
        std::vector<uint64_t> idx;
        for (uint64_t i = params.ell + 1; i < params.m; ++i) idx.push_back(i);
        auto d = EvalDomain<F>::from_indices(idx);
        auto poly = interpolate(d, std::span<const F>(v_values));
        std::vector<F> c = poly.coeffs();
        c.resize(params.parity_len());
        return c;
    }
};

template <PrimeField F>
DetectorKey<F> build_detector(const CodeParams& p, ByteView v_seed) {
    DetectorKey<F> key;
    key.params = p;
    key.eta = dual_multipliers<F>(p.m);
    Transcript t("fde/rs/detector");
    t.absorb("seed", v_seed);
    t.absorb_u64("ell", p.ell);
    t.absorb_u64("m", p.m);
    const size_t r = p.parity_len();
    for (size_t attempt = 0;; ++attempt) {
        key.v_values = t.challenge_scalars<F>("v", r);
        if (!std::all_of(key.v_values.begin(), key.v_values.end(), [](const F& x) { return x.is_zero(); })) break;
    }
    std::vector<F> v_all(p.m);
    if (r > 0) {
        if (r == 1) {
            std::fill(v_all.begin(), v_all.end(), key.v_values[0]);
        } else {
            auto low = extend_consecutive<F>(key.v_values, static_cast<int64_t>(p.ell + 1), 0, p.ell + 1);
            std::copy(low.begin(), low.end(), v_all.begin());
            std::copy(key.v_values.begin(), key.v_values.end(), v_all.begin() + p.ell + 1);
        }
    }
    key.w.resize(p.m);
    for (uint64_t j = 0; j < p.m; ++j) key.w[j] = key.eta[j] * v_all[j];
    return key;
}

/// Full syndrome H c^T; O(m * (m - ell)).
template <PrimeField F>
std::vector<F> syndrome(const CodeParams& p, std::span<const F> eta, std::span<const F> word) {
    if (word.size() != p.m) throw DomainError("syndrome: word length must equal m");
    std::vector<F> s(p.parity_len());
    for (uint64_t j = 0; j < p.m; ++j) {
        F term = eta[j] * word[j];
        const F x = F::from_u64(j);
        for (auto& sr : s) {
            sr += term;
            term *= x;
        }
    }
    return s;
}

/// Freivalds accumulator T = sum_j w_j c_j.
template <PrimeField F>
F freivalds_accumulator(const DetectorKey<F>& key, std::span<const F> symbols) {
    F acc = F::zero();
    for (size_t j = 0; j < symbols.size(); ++j) acc += key.w[j] * symbols[j];
    return acc;
}

/// True when the word passes the single-accumulator test. Erasures are a
/// caller error: erased words go to rs_decode directly.
template <PrimeField F>
bool rs_detect(const DetectorKey<F>& key, const Codeword<F>& word) {
    if (word.size() != key.params.m) throw DomainError("rs_detect: word length must equal m");
    if (word.erasure_count() != 0) throw DomainError("rs_detect: word has erasures; decode instead");
    return freivalds_accumulator(key, std::span<const F>(word.symbols)).is_zero();
}

/// Corrected message polynomial, or nullopt when no degree-<=ell polynomial
/// lies within the decoding radius of the non-erased symbols.
template <PrimeField F>
std::optional<Polynomial<F>> rs_decode_poly(const CodeParams& p, const Codeword<F>& word) {
    if (word.size() != p.m || word.erased.size() != p.m) throw DomainError("rs_decode: word length must equal m");
    const size_t k = p.data_len();
    std::vector<uint64_t> idx;
    std::vector<F> vals;
    for (uint64_t j = 0; j < p.m; ++j) {
        if (word.erased[j]) continue;
        idx.push_back(j);
        vals.push_back(word.symbols[j]);
    }
    const size_t n = idx.size();
    if (n < k) return std::nullopt;

    EvalDomain<F> dom = (n == p.m) ? EvalDomain<F>::range(n) : EvalDomain<F>::from_indices(idx);
    const Polynomial<F> g0 = vanishing(dom);
    Polynomial<F> r_prev = g0, r = interpolate(dom, std::span<const F>(vals));
    Polynomial<F> v_prev, v = Polynomial<F>::constant(F::one());
    while (!r.is_zero() && 2 * static_cast<size_t>(r.degree()) >= n + k) {
        auto [q, rem] = div_rem(r_prev, r);
        r_prev = std::move(r);
        r = std::move(rem);
        Polynomial<F> next = v_prev - q * v;
        v_prev = std::move(v);
        v = std::move(next);
    }
    auto [f, rem] = div_rem(r, v);
    if (!rem.is_zero() || f.degree() >= static_cast<long>(k)) return std::nullopt;

    size_t disagreements = 0;
    for (size_t i = 0; i < n; ++i)
        if (!(f.eval(dom[i]) == vals[i])) ++disagreements;
    if (2 * disagreements > n - k) return std::nullopt;
    return f;
}

template <PrimeField F>
std::optional<std::vector<F>> rs_decode(const CodeParams& p, const EvalDomain<F>& targets, const Codeword<F>& word) {
    auto f = rs_decode_poly(p, word);
    if (!f) return std::nullopt;
    return evaluate(*f, targets);
}

/// "FDECW1" || ell u64 || m u64 || beta (IEEE double bits) || m x (32-byte
/// symbol || erasure flag)
template <PrimeField F>
Bytes dump_codeword(const CodeParams& p, const Codeword<F>& w) {
    ByteWriter out;
    out.raw(as_bytes("FDECW1"));
    out.u64(p.ell);
    out.u64(p.m);
    uint64_t beta_bits;
    std::memcpy(&beta_bits, &p.beta, 8);
    out.u64(beta_bits);
    for (size_t j = 0; j < w.size(); ++j) {
        out.raw(w.symbols[j].to_bytes());
        out.u8(w.erased[j] ? 1 : 0);
    }
    return std::move(out).bytes();
}

template <PrimeField F>
std::pair<CodeParams, Codeword<F>> load_codeword(ByteView data) {
    ByteReader in(data);
    auto magic = in.raw(6);
    if (std::string_view(reinterpret_cast<const char*>(magic.data()), 6) != "FDECW1")
        throw FormatError("codeword dump: bad magic");
    CodeParams p;
    p.ell = in.u64();
    p.m = in.u64();
    uint64_t beta_bits = in.u64();
    std::memcpy(&p.beta, &beta_bits, 8);
    if (p.m < p.ell + 2 || p.m > in.remaining() / 33) throw FormatError("codeword dump: bad header");
    Codeword<F> w;
    w.symbols.resize(p.m);
    w.erased.resize(p.m);
    for (uint64_t j = 0; j < p.m; ++j) {
        w.symbols[j] = F::from_bytes_checked(in.raw(32));
        w.erased[j] = in.u8();
        if (w.erased[j] > 1) throw FormatError("codeword dump: bad erasure flag");
    }
    in.expect_done();
    return {p, std::move(w)};
}

}  // namespace fde::rs
