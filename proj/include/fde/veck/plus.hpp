#pragma once

#include <optional>
#include <vector>

#include "fde/rscode/rscode.hpp"
#include "fde/veck/common.hpp"
#include "fde/veck/el.hpp"

namespace fde::veck {

/// Full-file and subset sale: every codeword symbol is ElGamal-encrypted,
/// consistency is proven on a sampled subset only.
struct PlusBundle {
    rs::CodeParams code;
    uint64_t sample_count = 0;
    G1 vk;
    G2 vk2;
    ChunkedCiphertext ct;  // m blocks, indices 0..m-1
    // Subset sale only.
    std::optional<G1> c_s;
    std::optional<G1> pi_s;
    ProofEl pi_r;

    bool is_subset() const { return c_s.has_value(); }
    /// "FDEV+1" then tagged sections PARAMS, VK, CT, PROOF, each
    /// tag (1 byte) || length (u32 LE) || body.
    Bytes serialize() const;
    static PlusBundle parse(ByteView data);
};

struct PlusEncOutput {
    PlusBundle bundle;
    Keypair key;
};

Digest ciphertext_digest(const ChunkedCiphertext& ct);

/// Bulk phase: encrypt every symbol of a codeword under key.
ChunkedCiphertext plus_encrypt(const VeckParams& pp, std::span<const Fr> codeword, const Keypair& key);

/// Proof phase of a full-file sale, given the bulk ciphertext.
PlusBundle plus_prove_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                           const rs::CodeParams& code, const Keypair& key, ChunkedCiphertext ct, Rng& rng);
PlusEncOutput plus_enc_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                            Rng& rng);
PlusEncOutput plus_enc_full(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                            const Keypair& key, Rng& rng);

/// expected: the code the buyer agreed to (ell of the file, m).
bool plus_ver_full(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, const rs::CodeParams& expected,
                   const PlusBundle& bundle);

/// Subset sale of the symbols at s (indices into the file, ascending).
PlusEncOutput plus_enc_subset(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                              std::span<const uint64_t> s, double beta, Rng& rng);
PlusEncOutput plus_enc_subset(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                              std::span<const uint64_t> s, double beta, const Keypair& key, Rng& rng);

/// How the verifier obtains g2^{V_S(tau)}.
struct VanishingSource {
    std::optional<G2> precomputed;               // trusted, e.g. cached per S
    std::optional<kzg::VanishingHint> hint;      // supplied by the seller, checked
};

bool plus_ver_subset(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, std::span<const uint64_t> s,
                     double beta, const PlusBundle& bundle, const VanishingSource& w = {});

struct DecodeReport {
    size_t erasures = 0;
    bool detector_clean = false;
    bool decode_path = false;
};

/// Decrypts all m positions, then detect-then-correct. Returns the symbols at
/// targets, or nullopt when decoding fails.
std::optional<std::vector<Fr>> plus_dec(const VeckParams& pp, const rs::CodeParams& code, const Fr& sk,
                                        const ChunkedCiphertext& ct, std::span<const uint64_t> targets,
                                        DecodeReport* report = nullptr);

/// Shared second half of decryption for both schemes: given a received word
/// over [m], recover the values at targets.
std::optional<std::vector<Fr>> detect_then_correct(const rs::CodeParams& code, const rs::Codeword<Fr>& word,
                                                   std::span<const uint64_t> targets, DecodeReport* report);

}  // namespace fde::veck
