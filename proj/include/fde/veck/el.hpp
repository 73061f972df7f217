#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fde/curve/groups.hpp"
#include "fde/kzg/kzg.hpp"

namespace fde::veck {

/// Public parameters: base h and per-chunk bases h_{i,j} for indices
/// i in [m] and the extra slot i = -1. Bases come from hash-to-curve so no
/// discrete-log relation between them is known. h_{i,j} is derived on demand.
struct VeckParams {
    std::string seed;
    Digest crs_digest{};
    uint64_t m = 0;
    unsigned chunk_bits = 16;
    unsigned chunks = 16;  // ceil(255 / chunk_bits)
    G1 h;

    G1 chunk_base(int64_t index, unsigned j) const;
    std::vector<G1> bases(int64_t index) const;
    Bytes serialize() const;
    /// Same bases, different codeword length.
    VeckParams for_length(uint64_t length) const {
        VeckParams out = *this;
        out.m = length;
        return out;
    }
};

inline constexpr int64_t kBlindingSlot = -1;

/// Throws DomainError unless 8 <= chunk_bits <= 24.
VeckParams gen(const kzg::Crs& crs, uint64_t m, unsigned chunk_bits = 16, std::string_view seed = "fde/pp/v1");

struct Keypair {
    Fr sk;
    G1 vk;   // h^sk
    G2 vk2;  // g2^sk

    /// Fresh key; sk in {0, 1} is never produced.
    static Keypair generate(const VeckParams& pp, Rng& rng);
    /// Throws DomainError for sk in {0, 1}.
    static Keypair from_sk(const VeckParams& pp, const Fr& sk);
};

bool ver_key(const VeckParams& pp, const G1& vk, const Fr& sk);
/// e(h, vk2) = e(vk, g2)
bool ver_key_pair(const VeckParams& pp, const G1& vk, const G2& vk2);

/// ct_{i,j} = h_{i,j}^sk * g1^{x_{i,j}}, chunks as compressed points.
struct CtBlock {
    int64_t index = 0;
    std::vector<G1::Compressed> chunks;

    bool operator==(const CtBlock&) const = default;
};
using ChunkedCiphertext = std::vector<CtBlock>;

/// index (i64 LE) || chunk count (u16 LE) || chunks
void write_block(ByteWriter& w, const CtBlock& b);
CtBlock read_block(ByteReader& r);
Bytes serialize_blocks(const ChunkedCiphertext& ct);
ChunkedCiphertext parse_blocks(ByteView data);

/// Little-endian base-2^b digits of the canonical integer of x.
std::vector<uint32_t> split_chunks(const Fr& x, unsigned chunk_bits, unsigned chunks);
/// sum_j digits[j] * 2^{jb} as a field element.
Fr join_chunks(std::span<const uint32_t> digits, unsigned chunk_bits);
/// Like join_chunks but nullopt when the integer is not a canonical scalar.
std::optional<Fr> join_chunks_canonical(std::span<const uint32_t> digits, unsigned chunk_bits);

CtBlock encrypt_symbol(const VeckParams& pp, const Fr& sk, int64_t index, const Fr& value);

/// Encrypts values[k] at indices[k] under an externally supplied key.
ChunkedCiphertext enc1(const VeckParams& pp, std::span<const int64_t> indices, std::span<const Fr> values,
                       const Keypair& key);
/// Evaluates phi at each index, then encrypts.
ChunkedCiphertext enc1(const VeckParams& pp, std::span<const int64_t> indices, const kzg::Poly& phi,
                       const Keypair& key);

struct Enc1Output {
    Keypair key;
    ChunkedCiphertext ct;
};
/// Fresh keypair, then encrypts phi at each index.
Enc1Output enc1(const VeckParams& pp, std::span<const int64_t> indices, const kzg::Poly& phi, Rng& rng);

/// Per-block decryption; nullopt marks an erased position (some chunk not
/// an on-curve point, outside the lookup table, or a non-canonical total).
std::vector<std::optional<Fr>> dec(const VeckParams& pp, const Fr& sk, const ChunkedCiphertext& ct);
std::optional<Fr> dec_block(const VeckParams& pp, const Fr& sk, const CtBlock& block);

/// Consistency proof for ciphertexts on a sampled set S_R against C.
struct ProofEl {
    G1::Compressed c_sub{};   // C'' = commit(phi_{S_R} + t V_{S_R})
    G1::Compressed pi_sub{};  // batch proof that phi - phi'' vanishes on S_R
    CtBlock ct_minus;         // encryption of t at slot -1
    G1::Compressed r_vk{};
    G1::Compressed r_c{};
    std::vector<std::vector<G1::Compressed>> r_ct;  // [|S_R|][chunks]
    std::vector<G1::Compressed> r_minus;            // [chunks]
    Fr z_sk;
    std::vector<Fr> z_a;                // |S_R| + 1
    std::vector<std::vector<Fr>> z_x;   // [|S_R|][chunks - 1], digit 0 implied
    std::vector<Fr> z_y;                // chunks - 1

    Bytes serialize() const;
    static ProofEl parse(ByteView data);
    bool operator==(const ProofEl&) const = default;
};

/// Statement shared by prover and verifier.
struct ElStatement {
    std::span<const uint64_t> sampled;  // S_R, ascending
    G1 commitment;                      // C
    G1 vk;
    G2 vk2;
    std::span<const CtBlock> ct;        // blocks for S_R, same order
    ByteView context;                   // extra transcript binding
};

/// Proves that every block in st.ct encrypts phi(i), chunked, under the sk
/// behind vk, and that C commits phi. ct_minus is produced here.
ProofEl enc2(const VeckParams& pp, const kzg::Crs& crs, const ElStatement& st, const kzg::Poly& phi,
             const Keypair& key, Rng& rng);

/// Caller may pass g2^{V_{S_R}(tau)} when already known.
bool ver_ct(const VeckParams& pp, const kzg::Crs& crs, const ElStatement& st, const ProofEl& proof,
            const std::optional<G2>& g2_vanishing = std::nullopt);

}  // namespace fde::veck
