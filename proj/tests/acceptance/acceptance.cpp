// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `acceptance 1 5` runs a selection.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "fde/exchange/bench.hpp"
#include "fde/exchange/local.hpp"
#include "fde/payments/fairness.hpp"
#include "fde/rscode/rscode.hpp"
#include "fde/veck/plus.hpp"
#include "fde/veck/star.hpp"

using namespace fde;
using namespace fde::veck;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class Fn>
double time_ms(Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    return ms_since(t0);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

void note(const char* fmt, auto... args) {
    std::printf("    ");
    if constexpr (sizeof...(args) == 0)
        std::fputs(fmt, stdout);
    else
        std::printf(fmt, args...);
    std::printf("\n");
    std::fflush(stdout);
}

/// Largest crs any criterion needs: a 16 MiB file at 31 bytes per symbol.
const kzg::Crs& shared_crs() {
    static const kzg::Crs crs = [] {
        const std::vector<ex::BenchCell> cells{{ex::Scheme::kStar, pay::Rail::kContract, 2.0, 16ull << 20}};
        const uint64_t degree = std::max<uint64_t>(ex::crs_degree_for(cells), 1u << 16);
        Rng rng;
        const auto t0 = Clock::now();
        kzg::Crs c = kzg::Crs::setup(degree, rng);
        note("crs setup, degree %llu: %.1f s", static_cast<unsigned long long>(degree), ms_since(t0) / 1000);
        return c;
    }();
    return crs;
}

const VeckParams& shared_params() {
    static const VeckParams pp = gen(shared_crs(), 0);
    return pp;
}

const IdealBackend& ideal_backend() {
    static const IdealBackend b(SessionMode::kTestOnly, [] {
        Digest k;
        Rng().fill(k);
        return k;
    }());
    return b;
}

std::vector<Fr> random_symbols(Rng& rng, size_t n) {
    std::vector<Fr> v(n);
    for (auto& x : v) x = Fr::random(rng);
    return v;
}

std::vector<uint64_t> iota(uint64_t n) {
    std::vector<uint64_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<uint64_t> random_subset(Rng& rng, uint64_t n, uint64_t k) {
    std::vector<uint64_t> all = iota(n);
    for (uint64_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.uniform(n - i)]);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

G1::Compressed shift(const G1::Compressed& c, Rng& rng) {
    return (*G1::decompress(c) + (G1::generator() * Fr::from_u64(1 + rng.uniform(1u << 30)))).compress();
}

Fr nonzero(Rng& rng) {
    for (;;) {
        Fr x = Fr::random(rng);
        if (!x.is_zero()) return x;
    }
}

std::vector<uint64_t> plus_sample(const G1& c_phi, const PlusBundle& b) {
    return sample_positions("veck+/full", shared_crs().digest(), c_phi, b.vk, ciphertext_digest(b.ct), b.code.m,
                            b.sample_count);
}

std::vector<uint64_t> star_sample(const G1& c_phi, const StarBundle& b) {
    const uint8_t id[1] = {static_cast<uint8_t>(b.mask_hash)};
    return sample_positions("veck*", shared_crs().digest(), c_phi, b.vk, masked_digest(b.masked), b.code.m,
                            b.sample_count, id);
}

// ---------------------------------------------------------------------------

bool proof_cost_is_constant() {
    const auto& crs = shared_crs();
    const auto& pp = shared_params();
    Rng rng = Rng::seeded(101);
    struct Cost {
        double prove = 0, verify = 0, bulk = 0;
    };
    std::map<std::pair<int, int>, Cost> cost;  // (scheme, log size)
    constexpr int kReps = 5;
    for (int lg : {12, 16}) {
        const size_t n = size_t{1} << lg;
        const auto file = CommittedFile::from_data(crs, random_symbols(rng, n));
        const auto code = rs::CodeParams::from_beta(n - 1, 2.0);
        const VeckParams ppm = pp.for_length(code.m);
        const auto key = Keypair::generate(ppm, rng);
        rs::Codeword<Fr> word;
        const double t_extend = time_ms([&] { word = rs::rs_extend<Fr>(code, file.data); });

        {
            std::vector<Fr> masked;
            const double t_mask = time_ms([&] { masked = star_mask(word.symbols, key.sk); });
            std::vector<double> tp, tv;
            StarBundle b;
            for (int r = 0; r < kReps; ++r)
                tp.push_back(time_ms(
                    [&] { b = star_prove(crs, pp, file, code, ideal_backend(), key, word.symbols, masked, rng); }));
            bool ok = true;
            for (int r = 0; r < kReps; ++r)
                tv.push_back(time_ms([&] { ok &= star_ver(crs, pp, file.commitment, code, b, &ideal_backend()); }));
            if (!ok) note("star verification failed at 2^%d", lg);
            cost[{0, lg}] = {median(tp), median(tv), t_extend + t_mask};
        }
        {
            ChunkedCiphertext ct;
            const double t_enc = time_ms([&] { ct = plus_encrypt(ppm, word.symbols, key); });
            std::vector<double> tp, tv;
            PlusBundle b;
            for (int r = 0; r < kReps; ++r)
                tp.push_back(time_ms([&] { b = plus_prove_full(crs, pp, file, code, key, ct, rng); }));
            bool ok = true;
            for (int r = 0; r < kReps; ++r)
                tv.push_back(time_ms([&] { ok &= plus_ver_full(crs, pp, file.commitment, code, b); }));
            if (!ok) note("plus verification failed at 2^%d", lg);
            cost[{1, lg}] = {median(tp), median(tv), t_extend + t_enc};
        }
    }
    bool pass = true;
    for (int s : {0, 1}) {
        const Cost a = cost[{s, 12}], b = cost[{s, 16}];
        const double rp = b.prove / a.prove, rv = b.verify / a.verify;
        pass &= rp < 2.0 && rv < 2.0;
        note("%s prove %.0f -> %.0f ms (x%.2f), verify %.0f -> %.0f ms (x%.2f)", s == 0 ? "VECK_STAR" : "VECK_PLUS",
             a.prove, b.prove, rp, a.verify, b.verify, rv);
        note("  prove+verify x%.2f; bulk encoding (timed apart) %.0f -> %.0f ms",
             (b.prove + b.verify) / (a.prove + a.verify), a.bulk, b.bulk);
    }
    return pass;
}

bool bandwidth_ratios() {
    const auto star = ex::bench_cell(shared_crs(), {ex::Scheme::kStar, pay::Rail::kContract, 2.0, 16ull << 20}, 7);
    const auto plus = ex::bench_cell(shared_crs(), {ex::Scheme::kPlus, pay::Rail::kContract, 2.0, 64ull << 10}, 7);
    note("VECK_STAR 16 MiB: %llu wire bytes, ratio %.4f (delivered=%d)",
         static_cast<unsigned long long>(star.bytes_wire), star.ratio(), star.delivered);
    note("VECK_PLUS 64 KiB: %llu wire bytes, ratio %.2f (delivered=%d)",
         static_cast<unsigned long long>(plus.bytes_wire), plus.ratio(), plus.delivered);
    return star.delivered && plus.delivered && star.ratio() >= 2.0 && star.ratio() <= 2.2 && plus.ratio() >= 8.0;
}

bool exchanges_deliver() {
    const auto& crs = shared_crs();
    constexpr int kRuns = 100;
    bool pass = true;
    Rng rng = Rng::seeded(303);
    for (auto scheme : {ex::Scheme::kStar, ex::Scheme::kPlus}) {
        for (auto rail : {pay::Rail::kContract, pay::Rail::kHtlc, pay::Rail::kLn}) {
            int good = 0;
            const auto t0 = Clock::now();
            for (int run = 0; run < kRuns; ++run) {
                Bytes data(1 + rng.uniform(4000));
                rng.fill(data);
                const double betas[] = {1.5, 2.0, 3.0};
                ex::SessionConfig cfg;
                cfg.scheme = scheme;
                cfg.rail = rail;
                cfg.beta = betas[rng.uniform(3)];
                cfg.price = 1 + rng.uniform(1000);
                cfg.timeout_blocks = 2 + rng.uniform(10);

                pay::MockLedger ledger;
                ex::LocalChain chain(ledger);
                const auto enc = ex::encode_file(data);
                const auto file = CommittedFile::from_data(crs, enc.symbols);
                Rng server_rng = Rng::seeded(rng.next_u64());
                ex::ServerContext server;
                server.listing = {&crs, &file, enc.byte_length, enc.tail_length};
                server.config = cfg;
                server.chain = &chain;
                server.signer = {"server", sha256(as_bytes("server" + std::to_string(run)))};
                server.backend = &ideal_backend();
                server.rng = &server_rng;
                ex::ClientContext client;
                client.crs = &crs;
                client.config = cfg;
                client.expected_commitment = file.commitment;
                client.chain = &chain;
                client.signer = {"client", sha256(as_bytes("client" + std::to_string(run)))};
                client.backend = &ideal_backend();
                client.ln_capacity = 5000;
                ledger.mint("client", 5000);

                const auto r = ex::exchange_in_process(server, client);
                if (rail == pay::Rail::kLn && r.client.ln_channel) chain.ln_close(*r.client.ln_channel);
                const bool ok = r.client.outcome == ex::ClientOutcome::kDelivered &&
                                r.server.outcome == ex::ServerOutcome::kPaid && r.client.file == data &&
                                ledger.balance("server") == cfg.price &&
                                ledger.balance("client") == 5000 - cfg.price;
                good += ok;
                if (!ok) note("run %d failed: %s / %s", run, r.client.detail.c_str(), r.server.detail.c_str());
            }
            pass &= good == kRuns;
            note("%s/%s: %d/%d delivered bit-exact and paid (%.1f s)", ex::to_string(scheme),
                 pay::to_string(rail), good, kRuns, ms_since(t0) / 1000);
        }
    }
    return pass;
}

template <class F>
bool decode_all_mixes(const rs::CodeParams& p, int trials, Rng& rng, const char* label) {
    const auto targets = EvalDomain<F>::range(p.data_len());
    const uint64_t budget = p.parity_len();
    uint64_t pairs = 0, failures = 0;
    for (uint64_t e = 0; 2 * e <= budget; ++e) {
        for (uint64_t s = 0; 2 * e + s <= budget; ++s) {
            ++pairs;
            for (int t = 0; t < trials; ++t) {
                std::vector<F> data(p.data_len());
                for (auto& x : data) x = F::random(rng);
                auto cw = rs::rs_extend<F>(p, data);
                std::vector<uint64_t> pos;
                if (t % 4 == 3) {
                    const uint64_t start = rng.uniform(p.m - (e + s) + 1);
                    for (uint64_t i = 0; i < e + s; ++i) pos.push_back(start + i);
                } else {
                    pos = random_subset(rng, p.m, e + s);
                    for (uint64_t i = pos.size(); i > 1; --i) std::swap(pos[i - 1], pos[rng.uniform(i)]);
                }
                for (uint64_t i = 0; i < e; ++i) {
                    F d;
                    do d = F::random(rng);
                    while (d.is_zero());
                    cw.symbols[pos[i]] += d;
                }
                for (uint64_t i = e; i < e + s; ++i) cw.erase(pos[i]);
                auto out = rs::rs_decode(p, targets, cw);
                failures += !(out && *out == data);
            }
        }
    }
    note("%s (ell=%llu, m=%llu): %llu (e,s) pairs x %d trials, %llu failures", label,
         static_cast<unsigned long long>(p.ell), static_cast<unsigned long long>(p.m),
         static_cast<unsigned long long>(pairs), trials, static_cast<unsigned long long>(failures));
    return failures == 0;
}

bool rs_layer() {
    Rng rng = Rng::seeded(404);
    bool pass = decode_all_mixes<Toy65537>(rs::CodeParams::from_beta(9, 2.0), 1000, rng, "toy field");
    pass &= decode_all_mixes<Fr>(rs::CodeParams::from_beta(15, 2.0), 1000, rng, "Fr");

    constexpr int kKeys = 1000, kWords = 1000;
    const double n = double(kKeys) * kWords, prob = 1.0 / Toy65537::kModulus;
    const auto p = rs::CodeParams::from_beta(7, 2.0);
    uint64_t accepts = 0;
    for (int k = 0; k < kKeys; ++k) {
        const auto seed = Fr::random(rng).to_bytes();
        const auto key = rs::build_detector<Toy65537>(p, seed);
        std::vector<Toy65537> word(p.m);
        for (int t = 0; t < kWords; ++t) {
            for (auto& x : word) x = Toy65537::random(rng);
            accepts += rs::freivalds_accumulator(key, std::span<const Toy65537>(word)).is_zero();
        }
    }
    const double sigma = std::sqrt(n * prob * (1 - prob));
    const double dev = (double(accepts) - n * prob) / sigma;
    note("Freivalds false accepts: %llu of 1e6 (expected %.2f, %.2f sigma)", static_cast<unsigned long long>(accepts),
         n * prob, dev);
    return pass && std::abs(dev) <= 3.0;
}

double hypergeometric_escape(uint64_t m, uint64_t k, uint64_t draws) {
    double p = 1;
    for (uint64_t i = 0; i < draws; ++i) p *= double(m - k - i) / double(m - i);
    return std::max(p, 0.0);
}

bool sampling_soundness() {
    const auto& crs = shared_crs();
    const auto& pp = shared_params();
    constexpr uint64_t kM = 64, kDraws = 16, kTrials = 10000;
    // ell + 1 = 16 at beta = 4 gives m = 64 and |S_R| = min(16, 43) = 16.
    Rng rng = Rng::seeded(505);
    const auto file = CommittedFile::from_data(crs, random_symbols(rng, 16));
    const auto code = rs::CodeParams::from_beta(15, 4.0);
    const uint64_t draws = sample_size(16, 4.0);
    if (code.m != kM || draws != kDraws) {
        note("parameter mismatch: m=%llu |S_R|=%llu", static_cast<unsigned long long>(code.m),
             static_cast<unsigned long long>(draws));
        return false;
    }
    const VeckParams ppm = pp.for_length(kM);
    const auto key = Keypair::generate(ppm, rng);
    const auto word = rs::rs_extend<Fr>(code, file.data);
    const auto honest = plus_encrypt(ppm, word.symbols, key);
    std::vector<G1::Compressed> junk(256);
    for (auto& j : junk) j = (G1::generator() * Fr::random(rng)).compress();

    bool pass = true;
    double worst = 0, worst_exact = 0;
    for (uint64_t k = 1; k <= 32; ++k) {
        uint64_t escapes = 0;
        for (uint64_t t = 0; t < kTrials; ++t) {
            auto ct = honest;
            const auto bad = random_subset(rng, kM, k);
            for (auto i : bad) ct[i].chunks[rng.uniform(ct[i].chunks.size())] = junk[rng.uniform(junk.size())];
            const auto sampled =
                sample_positions("veck+/full", crs.digest(), file.commitment, key.vk, ciphertext_digest(ct), kM, draws);
            bool hit = false;
            for (auto i : bad) hit |= std::binary_search(sampled.begin(), sampled.end(), i);
            escapes += !hit;
        }
        const double freq = double(escapes) / kTrials;
        const double model = std::pow(1.0 - double(k) / kM, double(kDraws));
        const double exact = hypergeometric_escape(kM, k, kDraws);
        const double gap = std::abs(freq - model);
        worst = std::max(worst, gap);
        worst_exact = std::max(worst_exact, std::abs(freq - exact));
        pass &= gap <= 0.05;
        note("k=%2llu escape %.4f  (1-k/m)^16 %.4f  gap %.4f%s  | without-replacement %.4f",
             static_cast<unsigned long long>(k), freq, model, gap, gap > 0.05 ? "  OVER" : "", exact);
    }
    note("max |freq - (1-k/m)^16| = %.4f; max |freq - without-replacement| = %.4f", worst, worst_exact);

    // End-to-end: real proofs on corrupted ciphertexts; the verifier accepts
    // exactly when the sample missed every corrupted block.
    uint64_t agree = 0, total = 0;
    for (uint64_t k : {2, 4, 8}) {
        for (int t = 0; t < 30; ++t, ++total) {
            auto ct = honest;
            const auto bad = random_subset(rng, kM, k);
            for (auto i : bad) ct[i].chunks[0] = shift(ct[i].chunks[0], rng);
            const auto sampled =
                sample_positions("veck+/full", crs.digest(), file.commitment, key.vk, ciphertext_digest(ct), kM, draws);
            bool hit = false;
            for (auto i : bad) hit |= std::binary_search(sampled.begin(), sampled.end(), i);
            const auto b = plus_prove_full(crs, pp, file, code, key, ct, rng);
            agree += plus_ver_full(crs, pp, file.commitment, code, b) == !hit;
        }
    }
    note("end-to-end prove/verify on corrupted ciphertexts: verdict matched the sample in %llu/%llu",
         static_cast<unsigned long long>(agree), static_cast<unsigned long long>(total));
    return pass && agree == total;
}

struct Fit {
    double slope = 0, intercept = 0, se = 0, r2 = 0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.se = std::sqrt(sse / (n - 2) / sxx);
    f.r2 = syy > 0 ? 1 - sse / syy : 1;
    return f;
}

bool subset_verification_paths() {
    const auto& crs = shared_crs();
    const auto& pp = shared_params();
    Rng rng = Rng::seeded(606);
    const auto file = CommittedFile::from_data(crs, random_symbols(rng, 5000));
    struct Case {
        std::vector<uint64_t> s;
        PlusBundle bundle;
        G2 w;
    };
    std::vector<Case> cases;
    for (int lg = 8; lg <= 12; ++lg) {
        Case c;
        c.s = random_subset(rng, file.data.size(), uint64_t{1} << lg);
        c.bundle = plus_enc_subset(crs, pp, file, c.s, 2.0, rng).bundle;
        c.w = kzg::vanishing_g2(crs, kzg::Domain::from_indices(c.s));
        cases.push_back(std::move(c));
    }
    constexpr int kReps = 5;
    std::vector<double> x, with, without;
    bool verdicts = true;
    for (int r = 0; r < kReps; ++r) {
        for (const auto& c : cases) {
            bool ok1 = false, ok2 = false;
            VanishingSource src;
            src.precomputed = c.w;
            with.push_back(time_ms([&] { ok1 = plus_ver_subset(crs, pp, file.commitment, c.s, 2.0, c.bundle, src); }));
            without.push_back(time_ms([&] { ok2 = plus_ver_subset(crs, pp, file.commitment, c.s, 2.0, c.bundle); }));
            x.push_back(double(c.s.size()));
            verdicts &= ok1 && ok2;
        }
    }
    // Two-sided 95% critical value of Student's t with 23 degrees of freedom.
    constexpr double kT = 2.069;
    const Fit a = least_squares(x, with), b = least_squares(x, without);
    for (size_t i = 0; i < cases.size(); ++i) {
        std::vector<double> wi, wo;
        for (int r = 0; r < kReps; ++r) {
            wi.push_back(with[r * cases.size() + i]);
            wo.push_back(without[r * cases.size() + i]);
        }
        note("|S|=%4zu: precomputed %.1f ms, self-computed %.1f ms (medians)", cases[i].s.size(), median(wi),
             median(wo));
    }
    note("precomputed: slope %.4f us/elem (se %.4f, t=%.2f)", a.slope * 1000, a.se * 1000, a.slope / a.se);
    note("self-computed: slope %.2f us/elem (se %.2f, t=%.1f, r2=%.3f)", b.slope * 1000, b.se * 1000, b.slope / b.se,
         b.r2);
    const bool flat = std::abs(a.slope / a.se) < kT;
    const bool linear = b.slope > 0 && b.slope / b.se > kT;
    return verdicts && flat && linear;
}

bool fairness() {
    bool pass = true;
    for (auto rail : {pay::Rail::kContract, pay::Rail::kHtlc, pay::Rail::kLn}) {
        const auto r = pay::check_rail_fairness(rail, 10000, 707 + static_cast<uint64_t>(rail));
        note("%s: %llu traces (paid %llu, refunded %llu, unpaid %llu); violations client %llu server %llu "
             "conservation %llu exactly-once %llu",
             pay::to_string(rail), static_cast<unsigned long long>(r.traces),
             static_cast<unsigned long long>(r.paid_traces), static_cast<unsigned long long>(r.refunded_traces),
             static_cast<unsigned long long>(r.unpaid_traces), static_cast<unsigned long long>(r.client_fairness),
             static_cast<unsigned long long>(r.server_fairness), static_cast<unsigned long long>(r.conservation),
             static_cast<unsigned long long>(r.exactly_once));
        for (const auto& e : r.examples) note("  %s", e.c_str());
        pass &= r.traces == 10000 && r.violations() == 0;
    }
    return pass;
}

/// Runs `trials` tamperings of one field; each must be rejected.
struct TamperTally {
    std::vector<std::pair<std::string, int>> rows;
    bool all = true;
    void run(const std::string& field, int trials, const std::function<bool(int)>& rejected) {
        int n = 0;
        for (int t = 0; t < trials; ++t) n += rejected(t);
        rows.emplace_back(field, n);
        all &= n == trials;
    }
};

void tamper_el(TamperTally& tally, const std::string& scheme, const ProofEl& honest,
               const std::function<bool(const ProofEl&)>& verify, Rng& rng) {
    auto field = [&](const std::string& name, const std::function<void(ProofEl&)>& mutate) {
        tally.run(scheme + " pi." + name, 100, [&](int) {
            ProofEl p = honest;
            mutate(p);
            return !verify(p);
        });
    };
    field("c_sub", [&](ProofEl& p) { p.c_sub = shift(p.c_sub, rng); });
    field("pi_sub", [&](ProofEl& p) { p.pi_sub = shift(p.pi_sub, rng); });
    field("ct_minus", [&](ProofEl& p) {
        auto& c = p.ct_minus.chunks[rng.uniform(p.ct_minus.chunks.size())];
        c = shift(c, rng);
    });
    field("r_vk", [&](ProofEl& p) { p.r_vk = shift(p.r_vk, rng); });
    field("r_c", [&](ProofEl& p) { p.r_c = shift(p.r_c, rng); });
    field("r_ct", [&](ProofEl& p) {
        auto& row = p.r_ct[rng.uniform(p.r_ct.size())];
        auto& c = row[rng.uniform(row.size())];
        c = shift(c, rng);
    });
    field("r_minus", [&](ProofEl& p) {
        auto& c = p.r_minus[rng.uniform(p.r_minus.size())];
        c = shift(c, rng);
    });
    field("z_sk", [&](ProofEl& p) { p.z_sk += nonzero(rng); });
    field("z_a", [&](ProofEl& p) { p.z_a[rng.uniform(p.z_a.size())] += nonzero(rng); });
    field("z_x", [&](ProofEl& p) {
        auto& row = p.z_x[rng.uniform(p.z_x.size())];
        row[rng.uniform(row.size())] += nonzero(rng);
    });
    field("z_y", [&](ProofEl& p) { p.z_y[rng.uniform(p.z_y.size())] += nonzero(rng); });
}

bool tamper_matrix() {
    const auto& crs = shared_crs();
    const auto& pp = shared_params();
    Rng rng = Rng::seeded(808);
    // ell + 1 = 32, beta = 2: m = 64 with 32 sampled, so half the positions
    // are outside the sample.
    const auto file = CommittedFile::from_data(crs, random_symbols(rng, 32));
    const auto code = rs::CodeParams::from_beta(31, 2.0);
    const auto& backend = ideal_backend();
    TamperTally tally;
    auto random_point = [&] { return G1::generator() * nonzero(rng); };

    {
        const auto out = star_enc(crs, pp, file, 2.0, backend, rng);
        const StarBundle& honest = out.bundle;
        auto verify = [&](const StarBundle& b) { return star_ver(crs, pp, file.commitment, code, b, &backend); };
        if (!verify(honest)) note("honest star bundle rejected");
        const auto sampled = star_sample(file.commitment, honest);
        auto mutated = [&](const std::function<void(StarBundle&)>& f) {
            StarBundle b = honest;
            f(b);
            return !verify(b);
        };
        tally.run("VECK_STAR C_phi", 100, [&](int) {
            return !star_ver(crs, pp, file.commitment + random_point(), code, honest, &backend);
        });
        tally.run("VECK_STAR vk", 100, [&](int) { return mutated([&](StarBundle& b) { b.vk = b.vk + random_point(); }); });
        tally.run("VECK_STAR vk2", 100, [&](int) {
            return mutated([&](StarBundle& b) { b.vk2 = b.vk2 + G2::generator() * nonzero(rng); });
        });
        tally.run("VECK_STAR masked ct at sampled position", 100, [&](int) {
            return mutated([&](StarBundle& b) { b.masked[sampled[rng.uniform(sampled.size())]] += nonzero(rng); });
        });
        tally.run("VECK_STAR ct'", 100, [&](int) {
            return mutated([&](StarBundle& b) {
                auto& blk = b.proof.ct_prime[rng.uniform(b.proof.ct_prime.size())];
                auto& c = blk.chunks[rng.uniform(blk.chunks.size())];
                c = shift(c, rng);
            });
        });
        tally.run("VECK_STAR pi_z", 100, [&](int) {
            return mutated([&](StarBundle& b) {
                b.proof.pi_z[rng.uniform(b.proof.pi_z.size())] ^= static_cast<uint8_t>(1 + rng.uniform(255));
            });
        });
        tamper_el(tally, "VECK_STAR", honest.proof.pi_r,
                  [&](const ProofEl& p) {
                      StarBundle b = honest;
                      b.proof.pi_r = p;
                      return verify(b);
                  },
                  rng);
    }
    {
        const auto out = plus_enc_full(crs, pp, file, 2.0, rng);
        const PlusBundle& honest = out.bundle;
        auto verify = [&](const PlusBundle& b) { return plus_ver_full(crs, pp, file.commitment, code, b); };
        if (!verify(honest)) note("honest plus bundle rejected");
        const auto sampled = plus_sample(file.commitment, honest);
        auto mutated = [&](const std::function<void(PlusBundle&)>& f) {
            PlusBundle b = honest;
            f(b);
            return !verify(b);
        };
        tally.run("VECK_PLUS C_phi", 100,
                  [&](int) { return !plus_ver_full(crs, pp, file.commitment + random_point(), code, honest); });
        tally.run("VECK_PLUS vk", 100, [&](int) { return mutated([&](PlusBundle& b) { b.vk = b.vk + random_point(); }); });
        tally.run("VECK_PLUS vk2", 100, [&](int) {
            return mutated([&](PlusBundle& b) { b.vk2 = b.vk2 + G2::generator() * nonzero(rng); });
        });
        tally.run("VECK_PLUS ct at sampled position", 100, [&](int) {
            return mutated([&](PlusBundle& b) {
                auto& blk = b.ct[sampled[rng.uniform(sampled.size())]];
                auto& c = blk.chunks[rng.uniform(blk.chunks.size())];
                c = shift(c, rng);
            });
        });
        tamper_el(tally, "VECK_PLUS", honest.pi_r,
                  [&](const ProofEl& p) {
                      PlusBundle b = honest;
                      b.pi_r = p;
                      return verify(b);
                  },
                  rng);
    }
    {
        const auto s = random_subset(rng, 32, 9);
        const auto out = plus_enc_subset(crs, pp, file, s, 2.0, rng);
        const PlusBundle& honest = out.bundle;
        auto verify = [&](const PlusBundle& b) { return plus_ver_subset(crs, pp, file.commitment, s, 2.0, b); };
        if (!verify(honest)) note("honest subset bundle rejected");
        tally.run("VECK_PLUS subset C_phi", 100,
                  [&](int) { return !plus_ver_subset(crs, pp, file.commitment + random_point(), s, 2.0, honest); });
        tally.run("VECK_PLUS subset C_S", 100, [&](int) {
            PlusBundle b = honest;
            b.c_s = *b.c_s + random_point();
            return !verify(b);
        });
        tally.run("VECK_PLUS subset pi_S", 100, [&](int) {
            PlusBundle b = honest;
            b.pi_s = *b.pi_s + random_point();
            return !verify(b);
        });
    }

    // Pre-proof corruption of one masked symbol that the sample then misses:
    // accepted, and the buyer's decoder repairs it.
    int accepted = 0, corrected = 0, skipped = 0;
    {
        const auto word = rs::rs_extend<Fr>(code, file.data);
        for (int t = 0; t < 100;) {
            const auto key = Keypair::generate(pp.for_length(code.m), rng);
            auto masked = star_mask(word.symbols, key.sk);
            const uint64_t victim = rng.uniform(code.m);
            masked[victim] += nonzero(rng);
            const uint8_t id[1] = {0};
            const auto sampled = sample_positions("veck*", crs.digest(), file.commitment, key.vk,
                                                  masked_digest(masked), code.m, sample_size(32, 2.0), id);
            if (std::binary_search(sampled.begin(), sampled.end(), victim)) {
                ++skipped;
                continue;
            }
            ++t;
            const auto b = star_prove(crs, pp, file, code, backend, key, word.symbols, masked, rng);
            accepted += star_ver(crs, pp, file.commitment, code, b, &backend);
            DecodeReport rep;
            const auto got = star_dec(code, key.sk, b.masked, iota(32), MaskHash::kTranscript, &rep);
            corrected += got && *got == file.data && rep.decode_path;
        }
    }

    for (const auto& [name, n] : tally.rows) note("%-44s rejected %3d/100", name.c_str(), n);
    note("non-sampled masked symbol: accepted %d/100, corrected after purchase %d/100 (%d sampled draws skipped)",
         accepted, corrected, skipped);
    return tally.all && accepted == 100 && corrected == 100;
}

struct Criterion {
    int id;
    const char* name;
    bool (*run)();
};

const Criterion kCriteria[] = {
    {1, "constant-cost proofs (2^12 -> 2^16 symbols, ratio < 2)", proof_cost_is_constant},
    {2, "bandwidth (VECK_STAR in [2.0, 2.2] at 16 MiB, VECK_PLUS >= 8)", bandwidth_ratios},
    {3, "end-to-end exchanges (100/100 per scheme x rail)", exchanges_deliver},
    {4, "RS decoding within radius and Freivalds false-accept rate", rs_layer},
    {5, "sampling soundness (m=64, |S_R|=16, within 0.05)", sampling_soundness},
    {6, "subset verification paths (flat with precomputed vanishing, linear without)", subset_verification_paths},
    {7, "payment fairness (1e4 traces per rail)", fairness},
    {8, "tamper matrix (100/100 rejected, non-sampled corrected)", tamper_matrix},
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failed = 0;
    std::vector<std::string> summary;
    for (const auto& c : kCriteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        std::printf("criterion %d: %s\n", c.id, c.name);
        std::fflush(stdout);
        const auto t0 = Clock::now();
        bool ok = false;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            note("exception: %s", e.what());
        }
        char line[256];
        std::snprintf(line, sizeof line, "%s  criterion %d: %s (%.1f s)", ok ? "PASS" : "FAIL", c.id, c.name,
                      ms_since(t0) / 1000);
        std::printf("%s\n", line);
        std::fflush(stdout);
        summary.emplace_back(line);
        failed += !ok;
    }
    std::printf("\nsummary\n");
    for (const auto& s : summary) std::printf("%s\n", s.c_str());
    return failed ? 1 : 0;
}
