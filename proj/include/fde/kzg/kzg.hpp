#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "fde/algebra/domain.hpp"
#include "fde/algebra/polynomial.hpp"
#include "fde/curve/groups.hpp"

namespace fde::kzg {

using Poly = Polynomial<Fr>;
using Domain = EvalDomain<Fr>;

/// Powers of a secret tau in both source groups, index 0 included.
class Crs {
  public:
    /// Samples tau from rng and discards it.
    static Crs setup(size_t n, Rng& rng);
    /// INSECURE: keeps tau so tests can evaluate at it directly.
    static Crs setup_dev(size_t n, const Fr& tau);

    size_t degree() const { return n_; }
    const std::vector<blst_p1_affine>& g1_powers() const { return g1_; }
    const std::vector<blst_p2_affine>& g2_powers() const { return g2_; }
    G1 g1(size_t i) const { return G1::from_affine(g1_.at(i)); }
    G2 g2(size_t i) const { return G2::from_affine(g2_.at(i)); }
    const std::optional<Fr>& insecure_tau() const { return tau_; }

    /// Checks e(g1^{tau^i}, g2^{tau^j}) = e(g1^{tau^{i+j}}, g2) on sampled
    /// (i, j), plus adjacent-power links in both groups.
    bool spot_check(Rng& rng, size_t samples = 8) const;

    /// "FDECRS1" || n (u64 LE) || (n+1) G1 || (n+1) G2, compressed.
    Bytes serialize() const;
    /// Validates subgroup membership and runs spot_check.
    static Crs deserialize(ByteView data);
    void save(const std::filesystem::path& path) const;
    static Crs load(const std::filesystem::path& path);

    /// SHA-256 of the serialized form; computed once.
    const Digest& digest() const;

    /// Deterministic swap of two G1 powers, for negative tests of spot_check.
    void swap_g1_powers_for_testing(size_t i, size_t j) {
        std::swap(g1_.at(i), g1_.at(j));
        digest_.reset();
    }

  private:
    Crs() = default;
    static Crs from_tau(size_t n, const Fr& tau);

    size_t n_ = 0;
    std::vector<blst_p1_affine> g1_;
    std::vector<blst_p2_affine> g2_;
    std::optional<Fr> tau_;
    mutable std::optional<Digest> digest_;
};

/// g1^{p(tau)}; throws DomainError if deg(p) > n.
G1 commit(const Crs& crs, const Poly& p);
/// g2^{p(tau)}; throws DomainError if deg(p) > n.
G2 commit_g2(const Crs& crs, const Poly& p);

struct Opening {
    Fr value;
    G1 proof;
};

Opening open(const Crs& crs, const Poly& p, const Fr& i);
bool verify(const Crs& crs, const G1& c, const Fr& i, const Fr& v, const G1& proof);

/// Commitment to (p - p_S) / V_S.
G1 batch_open(const Crs& crs, const Poly& p, const Domain& s);
/// Same, when the caller already knows the quotient.
G1 batch_open_with_quotient(const Crs& crs, const Poly& quotient);

/// e(c - g1^{phi_S(tau)}, g2) = e(proof, g2^{V_S(tau)}), computing both
/// auxiliary elements from the crs.
bool batch_verify(const Crs& crs, const G1& c, const Domain& s, std::span<const Fr> values, const G1& proof);
/// Same equation with a caller-supplied g2^{V_S(tau)}.
bool batch_verify(const Crs& crs, const G1& c, const Domain& s, std::span<const Fr> values, const G1& proof,
                  const G2& g2_vanishing_at_tau);
/// Specialization for the all-zero value vector: e(c, g2) = e(proof, w).
bool batch_verify_zero(const G1& c, const G1& proof, const G2& g2_vanishing_at_tau);

/// g2^{V_S(tau)}
G2 vanishing_g2(const Crs& crs, const Domain& s);

/// Prover-supplied g2^{V_S(tau)} with a G1 opening of V_S at a Fiat-Shamir
/// point kappa, checkable in O(|S|) field operations and two pairings.
struct VanishingHint {
    G2 w;
    G1 proof;
};

VanishingHint make_vanishing_hint(const Crs& crs, const Domain& s);
bool check_vanishing_hint(const Crs& crs, const Domain& s, const VanishingHint& hint);

}  // namespace fde::kzg
