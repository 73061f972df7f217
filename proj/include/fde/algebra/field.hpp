#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "fde/algebra/fr.hpp"
#include "fde/algebra/toy_field.hpp"

namespace fde {

template <class F>
concept PrimeField = requires(F a, const F b, uint64_t u, int64_t s, unsigned k, ByteView bytes, Rng& rng) {
    { F::zero() } -> std::same_as<F>;
    { F::one() } -> std::same_as<F>;
    { F::from_u64(u) } -> std::same_as<F>;
    { F::from_i64(s) } -> std::same_as<F>;
    { F::from_wide_bytes(bytes) } -> std::same_as<F>;
    { F::random(rng) } -> std::same_as<F>;
    { F::root_of_unity(k) } -> std::same_as<F>;
    { b + b } -> std::same_as<F>;
    { b - b } -> std::same_as<F>;
    { b * b } -> std::same_as<F>;
    { -b } -> std::same_as<F>;
    { b.inverse() } -> std::same_as<F>;
    { b.is_zero() } -> std::same_as<bool>;
    { b == b } -> std::same_as<bool>;
    { b.to_bytes() };
    F::kTwoAdicity;
};

/// Montgomery batch inversion; every input must be nonzero.
template <PrimeField F>
void batch_inverse(std::span<F> values) {
    if (values.empty()) return;
    std::vector<F> prefix(values.size());
    F acc = F::one();
    for (size_t i = 0; i < values.size(); ++i) {
        prefix[i] = acc;
        acc *= values[i];
    }
    F inv = acc.inverse();
    for (size_t i = values.size(); i-- > 0;) {
        F v = values[i];
        values[i] = inv * prefix[i];
        inv *= v;
    }
}

}  // namespace fde
