#include "fde/kzg/kzg.hpp"

#include <fstream>
#include <iterator>

#include "fde/algebra/transcript.hpp"

namespace fde::kzg {

namespace {

constexpr std::string_view kCrsMagic = "FDECRS1";

std::vector<Fr> random_weights(Rng& rng, size_t n) {
    std::vector<Fr> r(n);
    for (auto& x : r) x = Fr::random(rng);
    return r;
}

}  // namespace

Crs Crs::from_tau(size_t n, const Fr& tau) {
    if (n < 1) throw DomainError("crs degree must be at least 1");
    std::vector<Fr> powers(n + 1);
    powers[0] = Fr::one();
    for (size_t i = 1; i <= n; ++i) powers[i] = powers[i - 1] * tau;

    Crs crs;
    crs.n_ = n;
    {
        G1FixedBase table(G1::generator());
        std::vector<G1> pts(n + 1);
        for (size_t i = 0; i <= n; ++i) pts[i] = table.mul(powers[i]);
        crs.g1_ = batch_affine(pts);
    }
    {
        G2FixedBase table(G2::generator());
        std::vector<G2> pts(n + 1);
        for (size_t i = 0; i <= n; ++i) pts[i] = table.mul(powers[i]);
        crs.g2_ = batch_affine(pts);
    }
    return crs;
}

Crs Crs::setup(size_t n, Rng& rng) {
    Fr tau = Fr::random(rng);
    Crs crs = from_tau(n, tau);
    tau = Fr::zero();
    return crs;
}

Crs Crs::setup_dev(size_t n, const Fr& tau) {
    Crs crs = from_tau(n, tau);
    crs.tau_ = tau;
    return crs;
}

bool Crs::spot_check(Rng& rng, size_t samples) const {
    if (g1_.size() != n_ + 1 || g2_.size() != n_ + 1) return false;
    const G1 g1_0 = g1(0);
    const G2 g2_0 = g2(0);
    if (!(g1_0 == G1::generator()) || !(g2_0 == G2::generator())) return false;

    for (size_t s = 0; s < samples; ++s) {
        const size_t i = rng.uniform(n_ + 1);
        const size_t j = rng.uniform(n_ + 1 - i);
        const std::pair<G1, G2> terms[] = {{g1(i), g2(j)}, {-g1(i + j), g2_0}};
        if (!pairing_product_is_one(terms)) return false;
    }

    // Random linear combinations of adjacent powers catch any permutation or
    // substitution: e(sum r_i P_{i+1}, g2) = e(sum r_i P_i, g2^tau).
    auto r1 = random_weights(rng, n_);
    const G1 hi1 = msm(std::span(g1_).subspan(1), r1);
    const G1 lo1 = msm(std::span(g1_).first(n_), r1);
    const std::pair<G1, G2> link1[] = {{hi1, g2_0}, {-lo1, g2(1)}};
    if (!pairing_product_is_one(link1)) return false;

    auto r2 = random_weights(rng, n_);
    const G2 hi2 = msm(std::span(g2_).subspan(1), r2);
    const G2 lo2 = msm(std::span(g2_).first(n_), r2);
    const std::pair<G1, G2> link2[] = {{g1_0, hi2}, {-g1(1), lo2}};
    return pairing_product_is_one(link2);
}

Bytes Crs::serialize() const {
    ByteWriter w;
    w.raw(as_bytes(kCrsMagic));
    w.u64(n_);
    for (const auto& a : g1_) w.raw(G1::from_affine(a).compress());
    for (const auto& a : g2_) w.raw(G2::from_affine(a).compress());
    return std::move(w).bytes();
}

Crs Crs::deserialize(ByteView data) {
    ByteReader r(data);
    auto magic = r.raw(kCrsMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kCrsMagic.begin())) throw FormatError("crs: bad magic");
    const uint64_t n = r.u64();
    if (n < 1 || n > (data.size() / (G1::kCompressedBytes + G2::kCompressedBytes)))
        throw FormatError("crs: implausible degree");
    Crs crs;
    crs.n_ = n;
    crs.g1_.reserve(n + 1);
    crs.g2_.reserve(n + 1);
    for (uint64_t i = 0; i <= n; ++i) crs.g1_.push_back(G1::decompress_checked(r.raw(G1::kCompressedBytes)).to_affine());
    for (uint64_t i = 0; i <= n; ++i) crs.g2_.push_back(G2::decompress_checked(r.raw(G2::kCompressedBytes)).to_affine());
    r.expect_done();
    Rng rng;
    if (!crs.spot_check(rng)) throw FormatError("crs: pairing consistency check failed");
    return crs;
}

void Crs::save(const std::filesystem::path& path) const {
    const Bytes b = serialize();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

Crs Crs::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    Bytes b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(b);
}

const Digest& Crs::digest() const {
    if (!digest_) {
        Sha256 h;
        h.update(as_bytes(kCrsMagic)).update_u64(n_);
        for (const auto& a : g1_) h.update(G1::from_affine(a).compress());
        for (const auto& a : g2_) h.update(G2::from_affine(a).compress());
        digest_ = h.finish();
    }
    return *digest_;
}

G1 commit(const Crs& crs, const Poly& p) {
    if (p.degree() > static_cast<long>(crs.degree())) throw DomainError("commit: degree exceeds crs");
    if (p.is_zero()) return G1::identity();
    return msm(std::span(crs.g1_powers()).first(p.size()), p.coeffs());
}

G2 commit_g2(const Crs& crs, const Poly& p) {
    if (p.degree() > static_cast<long>(crs.degree())) throw DomainError("commit: degree exceeds crs");
    if (p.is_zero()) return G2::identity();
    return msm(std::span(crs.g2_powers()).first(p.size()), p.coeffs());
}

Opening open(const Crs& crs, const Poly& p, const Fr& i) {
    auto [q, r] = div_rem(p, Poly::linear_root(i));
    return {r[0], commit(crs, q)};
}

bool verify(const Crs& crs, const G1& c, const Fr& i, const Fr& v, const G1& proof) {
    const G1 lhs = c - G1::generator() * v;
    const G2 rhs = crs.g2(1) - G2::generator() * i;
    const std::pair<G1, G2> terms[] = {{lhs, G2::generator()}, {-proof, rhs}};
    return pairing_product_is_one(terms);
}

G1 batch_open(const Crs& crs, const Poly& p, const Domain& s) {
    if (s.empty()) throw DomainError("batch_open: empty set");
    auto [q, r] = div_rem(p, vanishing(s));
    return commit(crs, q);
}

G1 batch_open_with_quotient(const Crs& crs, const Poly& quotient) { return commit(crs, quotient); }

G2 vanishing_g2(const Crs& crs, const Domain& s) { return commit_g2(crs, vanishing(s)); }

bool batch_verify(const Crs& crs, const G1& c, const Domain& s, std::span<const Fr> values, const G1& proof,
                  const G2& w) {
    if (s.size() != values.size()) throw DomainError("batch_verify: length mismatch");
    if (s.empty()) throw DomainError("batch_verify: empty set");
    const G1 phi_s = commit(crs, interpolate(s, values));
    const std::pair<G1, G2> terms[] = {{c - phi_s, G2::generator()}, {-proof, w}};
    return pairing_product_is_one(terms);
}

bool batch_verify(const Crs& crs, const G1& c, const Domain& s, std::span<const Fr> values, const G1& proof) {
    if (s.size() != values.size()) throw DomainError("batch_verify: length mismatch");
    if (s.size() > crs.degree()) return false;
    return batch_verify(crs, c, s, values, proof, vanishing_g2(crs, s));
}

bool batch_verify_zero(const G1& c, const G1& proof, const G2& w) {
    const std::pair<G1, G2> terms[] = {{c, G2::generator()}, {-proof, w}};
    return pairing_product_is_one(terms);
}

namespace {

Fr hint_point(const Domain& s, const G2& w) {
    Transcript t("fde/kzg/vanishing-hint");
    t.absorb_u64("size", s.size());
    for (const auto& x : s.points()) t.absorb_scalar("point", x);
    t.absorb("w", w.compress());
    return t.challenge_scalar<Fr>("kappa");
}

}  // namespace

VanishingHint make_vanishing_hint(const Crs& crs, const Domain& s) {
    const Poly v = vanishing(s);
    VanishingHint h;
    h.w = commit_g2(crs, v);
    const Fr kappa = hint_point(s, h.w);
    h.proof = open(crs, v, kappa).proof;
    return h;
}

bool check_vanishing_hint(const Crs& crs, const Domain& s, const VanishingHint& hint) {
    if (s.empty() || s.size() > crs.degree()) return false;
    const Fr kappa = hint_point(s, hint.w);
    Fr v_kappa = Fr::one();
    for (const auto& x : s.points()) v_kappa *= kappa - x;
    const G2 lhs_g2 = crs.g2(1) - G2::generator() * kappa;
    const G2 rhs_g2 = hint.w - G2::generator() * v_kappa;
    const std::pair<G1, G2> terms[] = {{hint.proof, lhs_g2}, {-G1::generator(), rhs_g2}};
    return pairing_product_is_one(terms);
}

}  // namespace fde::kzg
