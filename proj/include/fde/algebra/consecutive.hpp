#pragma once

// Fast routines for the integer domain {a, a+1, ..., a+k-1}. Both reduce to
// one or a few convolutions by exploiting factorial structure of the
// Lagrange weights, so they run in O(k log k) or O(k log^2 k).

#include <bit>
#include <span>
#include <vector>

#include "fde/algebra/field.hpp"
#include "fde/algebra/ntt.hpp"

namespace fde {

template <PrimeField F>
struct Factorials {
    std::vector<F> fact, inv_fact;

    explicit Factorials(size_t n) {
        fact.resize(n + 1);
        inv_fact.resize(n + 1);
        fact[0] = F::one();
        for (size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * F::from_u64(i);
        inv_fact[n] = fact[n].inverse();
        for (size_t i = n; i > 0; --i) inv_fact[i - 1] = inv_fact[i] * F::from_u64(i);
    }
};

namespace detail {

/// Coefficients of B(X + c) given those of B.
template <PrimeField F>
std::vector<F> taylor_shift(std::span<const F> b, const F& c, const Factorials<F>& fc) {
    const size_t n = b.size();
    if (n == 0) return {};
    std::vector<F> ur(n), v(n);
    for (size_t i = 0; i < n; ++i) ur[n - 1 - i] = b[i] * fc.fact[i];
    F cp = F::one();
    for (size_t t = 0; t < n; ++t) {
        v[t] = cp * fc.inv_fact[t];
        cp *= c;
    }
    auto w = convolve<F>(ur, v);
    std::vector<F> out(n);
    for (size_t j = 0; j < n; ++j) out[j] = w[n - 1 - j] * fc.inv_fact[j];
    return out;
}

inline constexpr size_t kNewtonLeaf = 32;

/// sum_i d[i] * X(X-1)...(X-i+1), in monomial form. ff[j] holds the falling
/// factorial of length 2^j.
template <PrimeField F>
std::vector<F> falling_to_monomial(std::span<const F> d, const std::vector<std::vector<F>>& ff,
                                   const Factorials<F>& fc) {
    const size_t n = d.size();
    if (n <= kNewtonLeaf) {
        std::vector<F> p{d.empty() ? F::zero() : d[n - 1]};
        for (size_t i = n - 1; i-- > 0;) {
            // p <- p * (X - i) + d[i]
            const F root = F::from_u64(i);
            p.push_back(F::zero());
            for (size_t j = p.size() - 1; j > 0; --j) p[j] = p[j - 1] - root * p[j];
            p[0] = -root * p[0] + d[i];
        }
        return p;
    }
    const size_t s = std::bit_floor(n - 1);
    auto a = falling_to_monomial<F>(d.subspan(0, s), ff, fc);
    auto b = falling_to_monomial<F>(d.subspan(s), ff, fc);
    auto b_shift = taylor_shift<F>(b, -F::from_u64(s), fc);
    auto prod = convolve<F>(ff[std::countr_zero(s)], b_shift);
    if (prod.size() < a.size()) prod.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i) prod[i] += a[i];
    prod.resize(n);
    return prod;
}

}  // namespace detail

/// Coefficients (length k) of the unique polynomial of degree < k taking
/// values[j] at X = j for j = 0..k-1.
template <PrimeField F>
std::vector<F> interpolate_consecutive(std::span<const F> values) {
    const size_t k = values.size();
    if (k == 0) return {};
    Factorials<F> fc(k);
    std::vector<F> yf(k), alt(k);
    for (size_t j = 0; j < k; ++j) {
        yf[j] = values[j] * fc.inv_fact[j];
        alt[j] = (j & 1) ? -fc.inv_fact[j] : fc.inv_fact[j];
    }
    auto d = convolve<F>(yf, alt);
    d.resize(k);

    std::vector<std::vector<F>> ff{{F::zero(), F::one()}};
    for (size_t s = 1; 2 * s < k; s *= 2) {
        auto shifted = detail::taylor_shift<F>(ff.back(), -F::from_u64(s), fc);
        ff.push_back(convolve<F>(ff.back(), shifted));
    }
    return detail::falling_to_monomial<F>(d, ff, fc);
}

/// Given values of a degree < k polynomial at a, a+1, ..., a+k-1, returns its
/// values at c, c+1, ..., c+count-1. The target range must lie entirely before
/// or entirely after the source range.
template <PrimeField F>
std::vector<F> extend_consecutive(std::span<const F> values, int64_t a, int64_t c, size_t count) {
    const size_t k = values.size();
    if (count == 0) return {};
    if (k == 0) return std::vector<F>(count, F::zero());
    const int64_t ki = static_cast<int64_t>(k), ci = static_cast<int64_t>(count);
    const bool after = c >= a + ki;
    const bool before = c + ci <= a;
    if (!after && !before) throw DomainError("extension targets overlap source points");

    const int64_t D = c - a;
    const size_t max_fact = after ? static_cast<size_t>(D + ci - 1) : static_cast<size_t>(ki - 1 - D);
    Factorials<F> fc(std::max<size_t>({max_fact, k, static_cast<size_t>(ci + ki)}));

    // u_j = w_j * y_j with w_j = (-1)^(k-1-j) / (j! (k-1-j)!)
    std::vector<F> u(k);
    for (size_t j = 0; j < k; ++j) {
        F w = fc.inv_fact[j] * fc.inv_fact[k - 1 - j];
        u[j] = ((k - 1 - j) & 1) ? -(w * values[j]) : w * values[j];
    }
    // kernel K[s] = 1 / (D + s - (k-1)), s = 0..count+k-2
    const size_t klen = count + k - 1;
    std::vector<F> kern(klen);
    for (size_t s = 0; s < klen; ++s) kern[s] = F::from_i64(D + static_cast<int64_t>(s) - (ki - 1));
    batch_inverse<F>(kern);
    auto sums = convolve<F>(u, kern);

    std::vector<F> out(count);
    for (size_t t = 0; t < count; ++t) {
        const int64_t x = D + static_cast<int64_t>(t);  // x - a
        F L;
        if (after) {
            L = fc.fact[x] * fc.inv_fact[x - ki];
        } else {
            const int64_t e = -x;  // >= 1
            L = fc.fact[e + ki - 1] * fc.inv_fact[e - 1];
            if (k & 1) L = -L;
        }
        out[t] = L * sums[t + k - 1];
    }
    return out;
}

}  // namespace fde
