// fde: command-line front end for selling and buying committed files.

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "fde/cli/settings.hpp"
#include "fde/exchange/bench.hpp"
#include "fde/exchange/session.hpp"
#include "fde/payments/bridge.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fde;
using namespace fde::ex;

namespace {

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, ByteView data) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

void write_json(const fs::path& p, const json& j) {
    const std::string s = j.dump(2) + "\n";
    write_file(p, as_bytes(s));
}

std::pair<std::string, uint16_t> host_port(const std::string& s) {
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("expected host:port, got " + s);
    return {s.substr(0, colon), static_cast<uint16_t>(std::stoul(s.substr(colon + 1)))};
}

Digest digest_from_hex(const std::string& h, const char* what) {
    const Bytes b = from_hex(h);
    if (b.size() != 32) throw std::runtime_error(std::string(what) + " must be 32 bytes of hex");
    Digest d;
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

Digest secret_or_random(const std::string& hex) {
    if (!hex.empty()) return digest_from_hex(hex, "secret");
    Digest d;
    Rng().fill(d);
    return d;
}

std::unique_ptr<veck::ConsistencyBackend> make_backend(const SessionConfig& cfg, const std::string& referee,
                                                      bool insecure_ok) {
    if (cfg.scheme != Scheme::kStar && cfg.rail == pay::Rail::kContract) return nullptr;
    if (!insecure_ok)
        throw std::runtime_error(
            "this scheme/rail needs a consistency backend; only the test-only ideal backend is built in. "
            "Pass --insecure-test-backend and a shared --referee-key to use it");
    if (referee.empty()) throw std::runtime_error("--referee-key is required with the test backend");
    return std::make_unique<veck::IdealBackend>(veck::SessionMode::kTestOnly,
                                                digest_from_hex(referee, "referee key"));
}

SessionConfig make_config(const std::string& scheme, const std::string& rail, double beta, uint64_t price,
                          uint64_t timeout, unsigned chunk_bits, const std::string& mask) {
    SessionConfig c;
    auto s = scheme_from_string(scheme);
    if (!s) throw std::runtime_error("unknown scheme " + scheme);
    auto r = pay::rail_from_string(rail);
    if (!r) throw std::runtime_error("unknown rail " + rail);
    c.scheme = *s;
    c.rail = *r;
    c.beta = beta;
    c.price = price;
    c.timeout_blocks = timeout;
    c.chunk_bits = chunk_bits;
    if (mask == "transcript") c.mask_hash = veck::MaskHash::kTranscript;
    else if (mask == "algebraic") c.mask_hash = veck::MaskHash::kAlgebraic;
    else throw std::runtime_error("unknown mask hash " + mask);
    c.validate();
    return c;
}

const char* mask_name(veck::MaskHash h) { return h == veck::MaskHash::kAlgebraic ? "algebraic" : "transcript"; }

std::string session_id() {
    Digest d;
    Rng().fill(d);
    return to_hex(ByteView(d).first(8));
}

// ---------------------------------------------------------------- commands

int cmd_setup(size_t n, const std::string& out, const std::string& dev_tau) {
    Rng rng;
    const kzg::Crs crs = dev_tau.empty() ? kzg::Crs::setup(n, rng)
                                         : kzg::Crs::setup_dev(n, Fr::from_u64(std::stoull(dev_tau)));
    if (!dev_tau.empty()) std::cerr << "warning: INSECURE dev crs, tau is known\n";
    crs.save(out);
    std::cout << json{{"crs", out}, {"degree", n}, {"digest", to_hex(crs.digest())}}.dump() << "\n";
    return 0;
}

int cmd_commit(const std::string& file, const std::string& crs_path, const std::string& out) {
    const kzg::Crs crs = kzg::Crs::load(crs_path);
    const Bytes data = read_file(file);
    const FileEncoding enc = encode_file(data);
    if (enc.ell() > crs.degree()) throw std::runtime_error("file needs a crs of degree " + std::to_string(enc.ell()));
    const auto cf = veck::CommittedFile::from_data(crs, enc.symbols);
    const json j = {{"file", file},
                    {"bytes", enc.byte_length},
                    {"ell", enc.ell()},
                    {"tail_length", enc.tail_length},
                    {"commitment", to_hex(cf.commitment.compress())},
                    {"crs_digest", to_hex(crs.digest())},
                    {"sha256", to_hex(sha256(data))}};
    if (!out.empty()) write_json(out, j);
    std::cout << j.dump() << "\n";
    return 0;
}

struct ServeOptions {
    std::string file, crs, scheme = "star", rail = "contract", listen = "127.0.0.1:7700",
                       chain_listen = "127.0.0.1:7701", offer_out = "offer.json", address = "server", secret,
                       referee, session_dir = ".fde/sessions", mask = "transcript";
    double beta = 2.0;
    uint64_t price = 100, timeout = 6, sessions = 0, linger = 10;
    unsigned chunk_bits = 16;
    bool insecure_backend = false;
};

int cmd_serve(const ServeOptions& o) {
    const kzg::Crs crs = kzg::Crs::load(o.crs);
    const SessionConfig cfg = make_config(o.scheme, o.rail, o.beta, o.price, o.timeout, o.chunk_bits, o.mask);
    const auto backend = make_backend(cfg, o.referee, o.insecure_backend);
    const FileEncoding enc = encode_file(read_file(o.file));
    const auto file = veck::CommittedFile::from_data(crs, enc.symbols);

    pay::MockLedger ledger;
    LocalChain chain(ledger);
    const auto [chain_host, chain_port] = host_port(o.chain_listen);
    ChainService service(chain, chain_host, chain_port);
    const auto [host, port] = host_port(o.listen);
    TcpListener listener(host, port);

    const pay::Signer signer{o.address, secret_or_random(o.secret)};
    const json offer = {{"server", host + ":" + std::to_string(listener.port())},
                        {"chain", chain_host + ":" + std::to_string(service.port())},
                        {"scheme", to_string(cfg.scheme)},
                        {"rail", pay::to_string(cfg.rail)},
                        {"beta", cfg.beta},
                        {"price", cfg.price},
                        {"timeout_blocks", cfg.timeout_blocks},
                        {"chunk_bits", cfg.chunk_bits},
                        {"mask_hash", mask_name(cfg.mask_hash)},
                        {"commitment", to_hex(file.commitment.compress())},
                        {"crs_digest", to_hex(crs.digest())},
                        {"bytes", enc.byte_length}};
    write_json(o.offer_out, offer);
    std::cerr << "serving " << o.file << " on " << offer["server"] << ", chain on " << offer["chain"] << "\n";

    ServerContext base;
    base.listing = {&crs, &file, enc.byte_length, enc.tail_length};
    base.config = cfg;
    base.chain = &chain;
    base.signer = signer;
    base.backend = backend.get();

    std::mutex out_mu;
    std::vector<std::thread> workers;
    uint64_t served = 0;
    while (o.sessions == 0 || served < o.sessions) {
        auto conn = listener.accept(std::chrono::seconds(1));
        if (!conn) continue;
        ++served;
        workers.emplace_back([&, c = std::shared_ptr<Connection>(std::move(conn))] {
            const std::string id = session_id();
            const ServerReport r = run_server(base, *c);
            json rec = {{"session", id},
                        {"role", "server"},
                        {"outcome", to_string(r.outcome)},
                        {"reason", to_string(r.reason)},
                        {"detail", r.detail},
                        {"rail", pay::to_string(cfg.rail)},
                        {"chain", offer["chain"]},
                        {"address", signer.address},
                        {"signer_secret", to_hex(signer.secret)},
                        {"contract_id", r.contract_id},
                        {"bytes_sent", r.bytes_sent},
                        {"t_enc_ms", r.times.enc_ms},
                        {"t_prove_ms", r.times.prove_ms}};
            if (r.sk) rec["sk"] = to_hex(r.sk->to_bytes());
            if (r.evidence) rec["evidence"] = {{"object", r.evidence->object}, {"htlc", r.evidence->htlc}};
            write_json(fs::path(o.session_dir) / (id + ".json"), rec);
            std::lock_guard lk(out_mu);
            json line = rec;
            line.erase("sk");
            line.erase("signer_secret");
            std::cout << line.dump() << std::endl;
        });
    }
    for (auto& w : workers) w.join();
    // Buyers read the key and settle on the chain after the session ends.
    std::this_thread::sleep_for(std::chrono::seconds(o.linger));
    service.stop();
    return 0;
}

struct BuyOptions {
    std::string offer, out, crs, address = "client", secret, subset, referee, session_dir = ".fde/sessions";
    uint64_t funds = 0, channel = 0;
    bool insecure_backend = false;
};

int cmd_buy(const BuyOptions& o) {
    std::ifstream in(o.offer);
    if (!in) throw std::runtime_error("cannot read offer " + o.offer);
    const json offer = json::parse(in);
    const kzg::Crs crs = kzg::Crs::load(o.crs);
    if (to_hex(crs.digest()) != offer.at("crs_digest").get<std::string>())
        throw std::runtime_error("crs does not match the offer");
    SessionConfig cfg = make_config(offer.at("scheme"), offer.at("rail"), offer.at("beta"), offer.at("price"),
                                    offer.at("timeout_blocks"), offer.at("chunk_bits"), offer.at("mask_hash"));
    if (!o.subset.empty()) {
        std::vector<uint64_t> s;
        std::stringstream ss(o.subset);
        for (std::string tok; std::getline(ss, tok, ',');) s.push_back(std::stoull(tok));
        cfg.subset = s;
        cfg.validate();
    }
    const auto backend = make_backend(cfg, o.referee, o.insecure_backend);

    const auto [chain_host, chain_port] = host_port(offer.at("chain"));
    auto chain = connect_chain(chain_host, chain_port);
    if (o.funds) chain->mint(o.address, o.funds);

    ClientContext ctx;
    ctx.crs = &crs;
    ctx.config = cfg;
    ctx.expected_commitment = G1::decompress_checked(from_hex(offer.at("commitment").get<std::string>()));
    ctx.chain = chain.get();
    ctx.signer = {o.address, secret_or_random(o.secret)};
    ctx.backend = backend.get();
    if (o.channel) ctx.ln_channel = o.channel;

    const auto [host, port] = host_port(offer.at("server"));
    auto conn = tcp_connect(host, port);
    const ClientReport r = run_client(ctx, *conn);
    if (r.outcome == ClientOutcome::kDelivered) write_file(o.out, r.file);

    const std::string id = session_id();
    json rec = {{"session", id},
                {"role", "client"},
                {"outcome", to_string(r.outcome)},
                {"reason", to_string(r.reason)},
                {"detail", r.detail},
                {"trace", r.trace},
                {"bytes_received", r.bytes_received},
                {"t_verify_ms", r.times.verify_ms},
                {"t_dec_ms", r.times.dec_ms},
                {"balance", chain->balance(o.address)}};
    if (r.ln_channel) rec["channel"] = *r.ln_channel;
    if (r.outcome == ClientOutcome::kDelivered) rec["out"] = o.out;
    write_json(fs::path(o.session_dir) / (id + ".json"), rec);
    std::cout << rec.dump() << "\n";
    return r.outcome == ClientOutcome::kDelivered ? 0 : 2;
}

/// Re-submits the key reveal of a paid server session, e.g. after the serving
/// process went away between payment and claim.
int cmd_reveal(const std::string& session, const std::string& dir) {
    fs::path p = session;
    if (!fs::exists(p)) p = fs::path(dir) / (session + ".json");
    std::ifstream in(p);
    if (!in) throw std::runtime_error("no session record " + session);
    const json rec = json::parse(in);
    if (rec.value("role", "") != "server" || !rec.contains("sk"))
        throw std::runtime_error("not a server session with a key");
    const Fr sk = Fr::from_bytes_checked(from_hex(rec.at("sk").get<std::string>()));
    const auto [host, port] = host_port(rec.at("chain"));
    auto chain = connect_chain(host, port);
    const auto rail = pay::rail_from_string(rec.at("rail").get<std::string>()).value();
    pay::TxStatus st = pay::TxStatus::kUnknown;
    if (rail == pay::Rail::kContract) {
        st = chain->contract_claim(rec.at("contract_id"), sk);
    } else {
        if (!rec.contains("evidence")) throw std::runtime_error("session has no payment to claim");
        const uint64_t object = rec["evidence"].at("object"), htlc = rec["evidence"].at("htlc");
        if (rail == pay::Rail::kHtlc) {
            const pay::Signer signer{rec.at("address"), digest_from_hex(rec.at("signer_secret"), "signer secret")};
            st = chain->htlc_spend_success(object,
                                           {pay::sk_preimage(sk), signer.sign(pay::htlc_spend_message(object, 1)), 1});
        } else {
            st = chain->ln_fulfill(object, htlc, pay::sk_preimage(sk));
        }
    }
    std::cout << json{{"session", rec.at("session")}, {"status", pay::to_string(st)}}.dump() << "\n";
    return st == pay::TxStatus::kOk ? 0 : 2;
}

int cmd_bench(const std::string& grid, const std::string& crs_path, const std::string& out, uint64_t seed) {
    const auto cells = parse_grid(grid);
    const size_t need = crs_degree_for(cells);
    std::optional<kzg::Crs> crs;
    if (!crs_path.empty()) {
        crs = kzg::Crs::load(crs_path);
        if (crs->degree() < need) throw std::runtime_error("crs degree below " + std::to_string(need));
    } else {
        std::cerr << "warning: no --crs, using an INSECURE dev crs of degree " << need << "\n";
        crs = kzg::Crs::setup_dev(need, Fr::from_u64(0xbe7c4));
    }
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file.open(out);
        os = &file;
    }
    *os << kBenchHeader << "\n";
    for (const auto& c : cells) {
        const BenchRow row = bench_cell(*crs, c, seed++);
        *os << to_csv_line(row) << std::endl;
        if (!row.delivered) std::cerr << "warning: exchange did not deliver for " << to_csv_line(row) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair exchange of committed files"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config;
    app.add_option("--config", config, "JSON config file (flags > FDE_* env > config)");

    size_t n = 0;
    std::string setup_out, dev_tau;
    auto* setup = app.add_subcommand("setup", "Generate a crs");
    setup->add_option("--n", n, "Maximum polynomial degree")->required();
    setup->add_option("--out", setup_out, "Output path")->required();
    setup->add_option("--dev-tau", dev_tau, "INSECURE: fixed tau for reproducible tests");

    std::string c_file, c_crs, c_out;
    auto* commit = app.add_subcommand("commit", "Commit to a file");
    commit->add_option("--file", c_file)->required();
    commit->add_option("--crs", c_crs)->required();
    commit->add_option("--out", c_out, "Also write the listing JSON here");

    ServeOptions so;
    auto* serve = app.add_subcommand("serve", "Sell a file");
    serve->add_option("--file", so.file)->required();
    serve->add_option("--crs", so.crs)->required();
    serve->add_option("--scheme", so.scheme, "star or plus");
    serve->add_option("--rail", so.rail, "contract, htlc or ln");
    serve->add_option("--price", so.price);
    serve->add_option("--listen", so.listen, "host:port for buyers");
    serve->add_option("--chain-listen", so.chain_listen, "host:port of the mock chain");
    serve->add_option("--beta", so.beta);
    serve->add_option("--timeout-blocks", so.timeout);
    serve->add_option("--chunk-bits", so.chunk_bits);
    serve->add_option("--mask-hash", so.mask, "transcript or algebraic");
    serve->add_option("--offer-out", so.offer_out);
    serve->add_option("--sessions", so.sessions, "Stop after this many sessions (0: never)");
    serve->add_option("--linger", so.linger, "Seconds to keep the chain up after the last session");
    serve->add_option("--address", so.address);
    serve->add_option("--secret", so.secret, "Signing secret (hex)");
    serve->add_option("--referee-key", so.referee, "Shared key of the test backend (hex)");
    serve->add_option("--session-dir", so.session_dir);
    serve->add_flag("--insecure-test-backend", so.insecure_backend);

    BuyOptions bo;
    auto* buy = app.add_subcommand("buy", "Buy a file");
    buy->add_option("--offer", bo.offer)->required();
    buy->add_option("--out", bo.out)->required();
    buy->add_option("--crs", bo.crs)->required();
    buy->add_option("--address", bo.address);
    buy->add_option("--secret", bo.secret);
    buy->add_option("--funds", bo.funds, "Mint this much on the mock chain first");
    buy->add_option("--subset", bo.subset, "Comma-separated block indices");
    buy->add_option("--channel", bo.channel, "Existing channel id (ln rail)");
    buy->add_option("--referee-key", bo.referee);
    buy->add_option("--session-dir", bo.session_dir);
    buy->add_flag("--insecure-test-backend", bo.insecure_backend);

    std::string session, r_dir = ".fde/sessions";
    auto* reveal = app.add_subcommand("reveal", "Claim a paid session by revealing its key");
    reveal->add_option("--session", session, "Session id or record path")->required();
    reveal->add_option("--session-dir", r_dir);

    std::string grid = "scheme=star,plus rail=contract beta=2 size=64KiB", b_crs, b_out;
    uint64_t seed = 1;
    auto* benchc = app.add_subcommand("bench", "Benchmark exchanges over a grid");
    benchc->add_option("--grid", grid, "e.g. \"scheme=star,plus rail=contract beta=2 size=64KiB,1MiB\"");
    benchc->add_option("--crs", b_crs);
    benchc->add_option("--out", b_out, "CSV path (default stdout)");
    benchc->add_option("--seed", seed);

    try {
        fde::cli::parse_layered(app, std::vector<std::string>(argv + 1, argv + argc));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*setup) return cmd_setup(n, setup_out, dev_tau);
        if (*commit) return cmd_commit(c_file, c_crs, c_out);
        if (*serve) return cmd_serve(so);
        if (*buy) return cmd_buy(bo);
        if (*reveal) return cmd_reveal(session, r_dir);
        if (*benchc) return cmd_bench(grid, b_crs, b_out, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
