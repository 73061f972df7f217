#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fde/algebra/field.hpp"
#include "fde/algebra/ntt.hpp"

namespace fde {

/// Dense univariate polynomial; coefficient i multiplies X^i. Trailing zero
/// coefficients are trimmed so the zero polynomial has no coefficients.
template <PrimeField F>
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const F& a) { return Polynomial(std::vector<F>{a}); }
    /// X - a
    static Polynomial linear_root(const F& a) { return Polynomial(std::vector<F>{-a, F::one()}); }

    const std::vector<F>& coeffs() const { return c_; }
    std::vector<F>&& take_coeffs() && { return std::move(c_); }
    size_t size() const { return c_.size(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    F operator[](size_t i) const { return i < c_.size() ? c_[i] : F::zero(); }
    F leading() const { return c_.empty() ? F::zero() : c_.back(); }

    F eval(const F& x) const {
        F acc = F::zero();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<F> out(std::max(c_.size(), o.c_.size()));
        for (size_t i = 0; i < c_.size(); ++i) out[i] = c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
        return Polynomial(std::move(out));
    }
    Polynomial operator-(const Polynomial& o) const {
        std::vector<F> out(std::max(c_.size(), o.c_.size()));
        for (size_t i = 0; i < c_.size(); ++i) out[i] = c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) out[i] -= o.c_[i];
        return Polynomial(std::move(out));
    }
    Polynomial operator*(const Polynomial& o) const {
        return Polynomial(convolve<F>(c_, o.c_));
    }
    Polynomial operator*(const F& s) const {
        if (s.is_zero()) return {};
        std::vector<F> out(c_);
        for (auto& x : out) x *= s;
        return Polynomial(std::move(out));
    }
    bool operator==(const Polynomial&) const = default;

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<F> c_;
};

/// Long division: returns (quotient, remainder) with deg(rem) < deg(den).
template <PrimeField F>
std::pair<Polynomial<F>, Polynomial<F>> div_rem(const Polynomial<F>& num, const Polynomial<F>& den) {
    if (den.is_zero()) throw DomainError("division by the zero polynomial");
    if (num.degree() < den.degree()) return {Polynomial<F>(), num};
    std::vector<F> rem(num.coeffs());
    const auto& d = den.coeffs();
    const size_t dn = d.size();
    const size_t qn = rem.size() - dn + 1;
    std::vector<F> q(qn);
    const bool monic = d.back() == F::one();
    const F lead_inv = monic ? F::one() : d.back().inverse();
    for (size_t k = qn; k-- > 0;) {
        F coef = rem[k + dn - 1];
        if (!monic) coef *= lead_inv;
        q[k] = coef;
        if (coef.is_zero()) continue;
        for (size_t j = 0; j + 1 < dn; ++j) rem[k + j] -= coef * d[j];
        rem[k + dn - 1] = F::zero();
    }
    rem.resize(dn - 1);
    return {Polynomial<F>(std::move(q)), Polynomial<F>(std::move(rem))};
}

/// Exact division; throws DomainError("not divisible") on a nonzero remainder.
template <PrimeField F>
Polynomial<F> divide_exact(const Polynomial<F>& num, const Polynomial<F>& den) {
    auto [q, r] = div_rem(num, den);
    if (!r.is_zero()) throw DomainError("not divisible");
    return q;
}

/// Product of (X - r) over all roots, via a balanced product tree.
template <PrimeField F>
Polynomial<F> product_of_linears(std::span<const F> roots) {
    if (roots.empty()) return Polynomial<F>::constant(F::one());
    if (roots.size() <= kSchoolbookCutoff) {
        std::vector<F> acc{F::one()};
        for (const F& r : roots) {
            acc.push_back(F::zero());
            for (size_t i = acc.size() - 1; i > 0; --i) acc[i] = acc[i - 1] - r * acc[i];
            acc[0] = -r * acc[0];
        }
        return Polynomial<F>(std::move(acc));
    }
    const size_t mid = roots.size() / 2;
    return product_of_linears(roots.subspan(0, mid)) * product_of_linears(roots.subspan(mid));
}

}  // namespace fde
