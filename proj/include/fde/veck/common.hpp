#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fde/kzg/kzg.hpp"

namespace fde::veck {

inline constexpr unsigned kLambda = 128;

/// min(cap, ceil(lambda / (beta - 1)))
uint64_t sample_size(uint64_t cap, double beta, unsigned lambda = kLambda);

/// Seller-side view of a file: symbols at 0..ell, their interpolant, and
/// its commitment.
struct CommittedFile {
    std::vector<Fr> data;
    kzg::Poly phi;
    G1 commitment;

    static CommittedFile from_data(const kzg::Crs& crs, std::vector<Fr> data);
    uint64_t ell() const { return data.size() - 1; }
};

/// Fiat-Shamir sample of k positions out of [m], bound to the crs, the file
/// commitment, the key, and a digest of the full ciphertext.
std::vector<uint64_t> sample_positions(std::string_view scheme, const Digest& crs_digest, const G1& commitment,
                                       const G1& vk, const Digest& ct_digest, uint64_t m, uint64_t k,
                                       ByteView extra = {});

}  // namespace fde::veck
