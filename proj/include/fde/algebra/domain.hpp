#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "fde/algebra/consecutive.hpp"
#include "fde/algebra/field.hpp"
#include "fde/algebra/polynomial.hpp"

namespace fde {

/// Ordered set of pairwise-distinct evaluation points. Index i of the domain
/// corresponds to points()[i].
template <PrimeField F>
class EvalDomain {
  public:
    EvalDomain() = default;

    /// Throws DomainError on duplicates.
    explicit EvalDomain(std::vector<F> points) : pts_(std::move(points)) {
        std::vector<decltype(F::zero().to_bytes())> keys;
        keys.reserve(pts_.size());
        for (const auto& p : pts_) keys.push_back(p.to_bytes());
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            throw DomainError("evaluation domain has duplicate points");
    }

    /// {0, 1, ..., n-1}
    static EvalDomain range(size_t n) {
        EvalDomain d;
        d.pts_.reserve(n);
        for (size_t i = 0; i < n; ++i) d.pts_.push_back(F::from_u64(i));
        d.consecutive_from_zero_ = true;
        return d;
    }

    static EvalDomain from_indices(std::span<const uint64_t> idx) {
        std::vector<F> pts;
        pts.reserve(idx.size());
        for (uint64_t i : idx) pts.push_back(F::from_u64(i));
        return EvalDomain(std::move(pts));
    }

    const std::vector<F>& points() const { return pts_; }
    size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const F& operator[](size_t i) const { return pts_[i]; }
    bool is_range() const { return consecutive_from_zero_; }

  private:
    std::vector<F> pts_;
    bool consecutive_from_zero_ = false;
};

/// prod_{x in domain} (X - x); monic of degree |domain|.
template <PrimeField F>
Polynomial<F> vanishing(const EvalDomain<F>& d) {
    return product_of_linears<F>(d.points());
}

/// Values of p at every point of the domain.
template <PrimeField F>
std::vector<F> evaluate(const Polynomial<F>& p, const EvalDomain<F>& d) {
    std::vector<F> out;
    out.reserve(d.size());
    for (const auto& x : d.points()) out.push_back(p.eval(x));
    return out;
}

/// Unique polynomial of degree < |domain| through (points[i], values[i]).
/// Lagrange form, O(k^2); {0..k-1} domains use the fast consecutive path.
template <PrimeField F>
Polynomial<F> interpolate(const EvalDomain<F>& d, std::span<const F> values) {
    if (d.size() != values.size()) throw DomainError("interpolate: size mismatch");
    if (d.empty()) throw DomainError("interpolate: empty domain");
    if (std::all_of(values.begin(), values.end(), [](const F& v) { return v.is_zero(); })) return {};
    if (d.is_range()) return Polynomial<F>(interpolate_consecutive<F>(values));

    const size_t k = d.size();
    const auto vpoly = vanishing(d);
    const auto& v = vpoly.coeffs();
    std::vector<F> acc(k), denom(k);
    // V'(x_i) via the quotient V / (X - x_i) evaluated at x_i.
    std::vector<F> q(k);
    for (size_t i = 0; i < k; ++i) {
        const F& xi = d[i];
        q[k - 1] = v[k];
        for (size_t j = k - 1; j > 0; --j) q[j - 1] = v[j] + xi * q[j];
        F dv = F::zero();
        for (size_t j = k; j-- > 0;) dv = dv * xi + q[j];
        denom[i] = dv;
    }
    batch_inverse<F>(denom);
    for (size_t i = 0; i < k; ++i) {
        const F scale = values[i] * denom[i];
        if (scale.is_zero()) continue;
        const F& xi = d[i];
        q[k - 1] = v[k];
        for (size_t j = k - 1; j > 0; --j) q[j - 1] = v[j] + xi * q[j];
        for (size_t j = 0; j < k; ++j) acc[j] += scale * q[j];
    }
    return Polynomial<F>(std::move(acc));
}

}  // namespace fde
