#include "fde/veck/common.hpp"

#include <cmath>

#include "fde/algebra/domain.hpp"
#include "fde/algebra/transcript.hpp"

namespace fde::veck {

uint64_t sample_size(uint64_t cap, double beta, unsigned lambda) {
    if (!(beta > 1.0)) throw DomainError("beta must exceed 1");
    const double q = static_cast<double>(lambda) / (beta - 1.0);
    const auto k = static_cast<uint64_t>(std::ceil(q - 1e-9));
    return std::min(cap, k);
}

CommittedFile CommittedFile::from_data(const kzg::Crs& crs, std::vector<Fr> data) {
    if (data.empty()) throw DomainError("file must hold at least one symbol");
    CommittedFile f;
    f.data = std::move(data);
    f.phi = kzg::Poly(interpolate_consecutive<Fr>(f.data));
    f.commitment = kzg::commit(crs, f.phi);
    return f;
}

std::vector<uint64_t> sample_positions(std::string_view scheme, const Digest& crs_digest, const G1& commitment,
                                       const G1& vk, const Digest& ct_digest, uint64_t m, uint64_t k,
                                       ByteView extra) {
    Transcript t("fde/veck/sample");
    t.absorb("scheme", as_bytes(scheme));
    t.absorb("crs", crs_digest);
    t.absorb("C", commitment.compress());
    t.absorb("vk", vk.compress());
    t.absorb("ct", ct_digest);
    t.absorb("extra", extra);
    const Digest seed = t.challenge_bytes("S_R");
    return derive_subset(seed, m, k);
}

}  // namespace fde::veck
