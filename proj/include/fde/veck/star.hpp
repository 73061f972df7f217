#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fde/rscode/rscode.hpp"
#include "fde/veck/common.hpp"
#include "fde/veck/el.hpp"
#include "fde/veck/plus.hpp"

namespace fde::veck {

/// Wire id of the mask hash H(sk, i).
enum class MaskHash : uint8_t {
    kTranscript = 0,  // SHA-256 expansion, reduced mod r
    kAlgebraic = 1,   // MiMC-style x^5 permutation over Fr
};

Fr mask_at(const Fr& sk, uint64_t i, MaskHash hash = MaskHash::kTranscript);
/// H(sk, begin), ..., H(sk, begin + count - 1)
std::vector<Fr> mask_stream(const Fr& sk, uint64_t begin, uint64_t count, MaskHash hash = MaskHash::kTranscript);

/// Relation between the masked symbols and the ElGamal ciphertexts on S_R:
/// vk = h^sk, masked_i = x_i + H(sk, i), ct'_i encrypts the chunks of x_i.
struct ConsistencyStatement {
    const VeckParams* pp = nullptr;
    G1 vk;
    MaskHash hash = MaskHash::kTranscript;
    std::span<const uint64_t> sampled;
    std::span<const Fr> masked;        // at sampled positions
    std::span<const CtBlock> ct_prime;
};

struct ConsistencyWitness {
    Fr sk;
    std::span<const Fr> x;
};

/// Key bridge for hash-locked payment rails: vk = h^sk and t = H(sk).
struct KeyBridgeStatement {
    G1 h;
    G1 vk;
    Digest t{};
};

/// t = SHA-256 of the 32-byte little-endian encoding of sk.
Digest key_hash(const Fr& sk);

bool consistency_relation_holds(const ConsistencyStatement& st, const ConsistencyWitness& w);
bool bridge_relation_holds(const KeyBridgeStatement& st, const Fr& sk);

class BackendError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ConsistencyBackend {
  public:
    virtual ~ConsistencyBackend() = default;
    virtual uint8_t id() const = 0;
    virtual std::string name() const = 0;
    virtual Bytes prove(const ConsistencyStatement& st, const ConsistencyWitness& w) const = 0;
    virtual bool verify(const ConsistencyStatement& st, ByteView proof) const = 0;
    virtual Bytes prove_bridge(const KeyBridgeStatement& st, const Fr& sk) const = 0;
    virtual bool verify_bridge(const KeyBridgeStatement& st, ByteView proof) const = 0;
};

enum class SessionMode { kProduction, kTestOnly };

/// The proof is the witness itself; verification re-checks the relation
/// literally. Not zero-knowledge: throws BackendError outside test-only
/// sessions.
class TransparentBackend final : public ConsistencyBackend {
  public:
    static constexpr uint8_t kId = 0xf0;
    explicit TransparentBackend(SessionMode mode) : mode_(mode) {}
    uint8_t id() const override { return kId; }
    std::string name() const override { return "transparent-test"; }
    Bytes prove(const ConsistencyStatement& st, const ConsistencyWitness& w) const override;
    bool verify(const ConsistencyStatement& st, ByteView proof) const override;
    Bytes prove_bridge(const KeyBridgeStatement& st, const Fr& sk) const override;
    bool verify_bridge(const KeyBridgeStatement& st, ByteView proof) const override;

  private:
    void require_test_session() const;
    SessionMode mode_;
};

/// Stand-in for a zero-knowledge backend: a referee holding a secret key
/// checks the relation against the witness and attests with an HMAC over the
/// statement. Proofs are 32 bytes and reveal nothing; soundness rests on the
/// referee key staying out of the prover's hands. Test-only like the
/// transparent backend.
class IdealBackend final : public ConsistencyBackend {
  public:
    static constexpr uint8_t kId = 0xf1;
    IdealBackend(SessionMode mode, const Digest& referee_key) : mode_(mode), key_(referee_key) {}
    uint8_t id() const override { return kId; }
    std::string name() const override { return "ideal-test"; }
    Bytes prove(const ConsistencyStatement& st, const ConsistencyWitness& w) const override;
    bool verify(const ConsistencyStatement& st, ByteView proof) const override;
    Bytes prove_bridge(const KeyBridgeStatement& st, const Fr& sk) const override;
    bool verify_bridge(const KeyBridgeStatement& st, ByteView proof) const override;

  private:
    void require_test_session() const;
    Bytes attest(const Digest& statement, bool holds) const;
    SessionMode mode_;
    Digest key_;
};

Digest statement_digest(const ConsistencyStatement& st);
Digest statement_digest(const KeyBridgeStatement& st);

struct StarProof {
    uint8_t backend_id = 0;
    Bytes pi_z;
    ProofEl pi_r;
    ChunkedCiphertext ct_prime;  // one block per sampled position, ascending
};

struct StarBundle {
    rs::CodeParams code;
    uint64_t sample_count = 0;
    MaskHash mask_hash = MaskHash::kTranscript;
    G1 vk;
    G2 vk2;
    std::vector<Fr> masked;  // m symbols
    StarProof proof;

    /// "FDEV*1" then tagged sections PARAMS, VK, CT, PROOF as in PlusBundle.
    Bytes serialize() const;
    static StarBundle parse(ByteView data);
};

struct StarEncOutput {
    StarBundle bundle;
    Keypair key;
};

Digest masked_digest(std::span<const Fr> masked);

/// codeword + H(sk, i), positionwise.
std::vector<Fr> star_mask(std::span<const Fr> codeword, const Fr& sk, MaskHash hash = MaskHash::kTranscript);

/// Proof phase. codeword is the honest RS extension of the file; masked is
/// what the seller will send.
StarBundle star_prove(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file,
                      const rs::CodeParams& code, const ConsistencyBackend& backend, const Keypair& key,
                      std::span<const Fr> codeword, std::vector<Fr> masked, Rng& rng,
                      MaskHash hash = MaskHash::kTranscript);

StarEncOutput star_enc(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                       const ConsistencyBackend& backend, const Keypair& key, Rng& rng,
                       MaskHash hash = MaskHash::kTranscript);
StarEncOutput star_enc(const kzg::Crs& crs, const VeckParams& pp, const CommittedFile& file, double beta,
                       const ConsistencyBackend& backend, Rng& rng, MaskHash hash = MaskHash::kTranscript);

/// backend may be null, which rejects. diagnostic, when given, receives the
/// reason for a rejection.
bool star_ver(const kzg::Crs& crs, const VeckParams& pp, const G1& c_phi, const rs::CodeParams& expected,
              const StarBundle& bundle, const ConsistencyBackend* backend, std::string* diagnostic = nullptr);

/// Unmask, then detect-then-correct. No group operations.
std::optional<std::vector<Fr>> star_dec(const rs::CodeParams& code, const Fr& sk, std::span<const Fr> masked,
                                        std::span<const uint64_t> targets, MaskHash hash = MaskHash::kTranscript,
                                        DecodeReport* report = nullptr);

}  // namespace fde::veck
