#include "fde/exchange/bench.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "fde/exchange/local.hpp"

namespace fde::ex {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

uint64_t parse_size(const std::string& s) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("bad size: " + s);
    }
    const std::string unit = s.substr(pos);
    if (unit.empty() || unit == "B") return v;
    if (unit == "KiB" || unit == "K") return v << 10;
    if (unit == "MiB" || unit == "M") return v << 20;
    throw DomainError("bad size unit: " + s);
}

std::vector<BenchCell> parse_grid(const std::string& spec) {
    std::vector<Scheme> schemes{Scheme::kStar};
    std::vector<pay::Rail> rails{pay::Rail::kContract};
    std::vector<double> betas{2.0};
    std::vector<uint64_t> sizes{64 << 10};
    for (const auto& field : split(spec, ' ')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw DomainError("grid field without '=': " + field);
        const std::string key = field.substr(0, eq);
        const auto values = split(field.substr(eq + 1), ',');
        if (values.empty()) throw DomainError("grid field without values: " + key);
        if (key == "scheme") {
            schemes.clear();
            for (const auto& v : values) {
                auto s = scheme_from_string(v);
                if (!s) throw DomainError("unknown scheme " + v);
                schemes.push_back(*s);
            }
        } else if (key == "rail") {
            rails.clear();
            for (const auto& v : values) {
                auto r = pay::rail_from_string(v);
                if (!r) throw DomainError("unknown rail " + v);
                rails.push_back(*r);
            }
        } else if (key == "beta") {
            betas.clear();
            for (const auto& v : values) betas.push_back(std::stod(v));
        } else if (key == "size") {
            sizes.clear();
            for (const auto& v : values) sizes.push_back(parse_size(v));
        } else {
            throw DomainError("unknown grid key " + key);
        }
    }
    std::vector<BenchCell> cells;
    for (auto s : schemes)
        for (auto r : rails)
            for (double b : betas)
                for (auto n : sizes) {
                    if (!(b > 1.0) || n == 0) throw DomainError("beta must exceed 1 and sizes be positive");
                    cells.push_back({s, r, b, n});
                }
    return cells;
}

size_t crs_degree_for(const std::vector<BenchCell>& cells) {
    size_t d = 1;
    for (const auto& c : cells) {
        const uint64_t ell = (c.bytes + kBytesPerSymbol - 1) / kBytesPerSymbol - 1;
        const auto code = rs::CodeParams::from_beta(ell, c.beta);
        d = std::max<size_t>({d, ell, veck::sample_size(code.m, c.beta)});
    }
    return d;
}

BenchRow bench_cell(const kzg::Crs& crs, const BenchCell& cell, uint64_t seed) {
    Rng rng = Rng::seeded(seed);
    Bytes data(cell.bytes);
    rng.fill(data);

    BenchRow row;
    row.cell = cell;
    const auto t0 = std::chrono::steady_clock::now();
    const FileEncoding enc = encode_file(data);
    const veck::CommittedFile file = veck::CommittedFile::from_data(crs, enc.symbols);
    row.t_commit_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    pay::MockLedger ledger;
    LocalChain chain(ledger);
    ledger.mint("client", 1000000);
    const veck::IdealBackend backend(veck::SessionMode::kTestOnly, sha256(as_bytes("bench referee")));
    SessionConfig cfg;
    cfg.scheme = cell.scheme;
    cfg.rail = cell.rail;
    cfg.beta = cell.beta;

    Rng server_rng = Rng::seeded(seed + 1);
    ServerContext sc;
    sc.listing = {&crs, &file, enc.byte_length, enc.tail_length};
    sc.config = cfg;
    sc.chain = &chain;
    sc.signer = {"server", sha256(as_bytes("bench server"))};
    sc.backend = &backend;
    sc.rng = &server_rng;
    ClientContext cc;
    cc.crs = &crs;
    cc.config = cfg;
    cc.expected_commitment = file.commitment;
    cc.chain = &chain;
    cc.signer = {"client", sha256(as_bytes("bench client"))};
    cc.backend = &backend;

    const auto r = exchange_in_process(sc, cc);
    row.bytes_wire = r.wire_bytes;
    row.t_enc_ms = r.server.times.enc_ms;
    row.t_prove_ms = r.server.times.prove_ms;
    row.t_verify_ms = r.client.times.verify_ms;
    row.t_dec_ms = r.client.times.dec_ms;
    row.delivered = r.client.outcome == ClientOutcome::kDelivered && r.client.file == data;
    return row;
}

std::vector<BenchRow> bench(const kzg::Crs& crs, const std::vector<BenchCell>& cells, uint64_t seed) {
    std::vector<BenchRow> rows;
    for (const auto& c : cells) rows.push_back(bench_cell(crs, c, seed++));
    return rows;
}

std::string to_csv_line(const BenchRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%g,%llu,%llu,%.3f,%.3f,%.3f,%.3f,%.3f",
                  r.cell.scheme == Scheme::kPlus ? "VECK_PLUS" : "VECK_STAR", pay::to_string(r.cell.rail), r.cell.beta,
                  static_cast<unsigned long long>(r.cell.bytes), static_cast<unsigned long long>(r.bytes_wire),
                  r.t_commit_ms, r.t_enc_ms, r.t_prove_ms, r.t_verify_ms, r.t_dec_ms);
    return buf;
}

}  // namespace fde::ex
