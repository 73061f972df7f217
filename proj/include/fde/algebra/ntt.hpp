#pragma once

#include <bit>
#include <span>
#include <vector>

#include "fde/algebra/field.hpp"

namespace fde {

/// Radix-2 number-theoretic transform over the power-of-two subgroup of F*.
/// The length must be a power of two not exceeding 2^F::kTwoAdicity.
template <PrimeField F>
void ntt(std::span<F> a, bool inverse) {
    const size_t n = a.size();
    if (n <= 1) return;
    if (!std::has_single_bit(n)) throw DomainError("ntt length must be a power of two");
    const unsigned log_n = static_cast<unsigned>(std::countr_zero(n));
    if (log_n > F::kTwoAdicity) throw DomainError("ntt length exceeds field two-adicity");

    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    F root = F::root_of_unity(log_n);
    if (inverse) root = root.inverse();
    std::vector<F> tw(n / 2);
    tw[0] = F::one();
    for (size_t k = 1; k < n / 2; ++k) tw[k] = tw[k - 1] * root;

    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t half = len >> 1, stride = n / len;
        for (size_t start = 0; start < n; start += len) {
            for (size_t k = 0; k < half; ++k) {
                F& lo = a[start + k];
                F& hi = a[start + k + half];
                F t = hi * tw[k * stride];
                hi = lo - t;
                lo += t;
            }
        }
    }
    if (inverse) {
        F n_inv = F::from_u64(n).inverse();
        for (auto& x : a) x *= n_inv;
    }
}

inline constexpr size_t kSchoolbookCutoff = 64;

/// Linear convolution; schoolbook below the cutoff, NTT above.
template <PrimeField F>
std::vector<F> convolve(std::span<const F> a, std::span<const F> b) {
    if (a.empty() || b.empty()) return {};
    const size_t out_len = a.size() + b.size() - 1;
    if (std::min(a.size(), b.size()) < kSchoolbookCutoff ||
        std::bit_width(out_len - 1) > F::kTwoAdicity) {
        std::vector<F> out(out_len);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    }
    const size_t n = std::bit_ceil(out_len);
    std::vector<F> fa(a.begin(), a.end()), fb(b.begin(), b.end());
    fa.resize(n);
    fb.resize(n);
    ntt<F>(fa, false);
    ntt<F>(fb, false);
    for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    ntt<F>(fa, true);
    fa.resize(out_len);
    return fa;
}

}  // namespace fde
