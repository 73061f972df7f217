#include <gtest/gtest.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "fde/cli/settings.hpp"
#include "fde/exchange/bench.hpp"
#include "fde/exchange/session.hpp"

using namespace fde;

namespace {

struct Parsed {
    uint64_t price = 0;
    std::string rail = "unset";
    bool flag = false;
};

Parsed parse(const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
    CLI::App app;
    app.fallthrough();
    std::string config;
    app.add_option("--config", config);
    Parsed p;
    auto* serve = app.add_subcommand("serve");
    serve->add_option("--price", p.price);
    serve->add_option("--rail", p.rail);
    serve->add_flag("--insecure-test-backend", p.flag);
    cli::parse_layered(app, args, [&](const std::string& k) -> std::optional<std::string> {
        auto it = env.find(k);
        if (it == env.end()) return std::nullopt;
        return it->second;
    });
    return p;
}

}  // namespace

TEST(Settings, FlagsBeatEnvBeatConfig) {
    const auto path = std::filesystem::temp_directory_path() / "fde_settings_test.json";
    std::ofstream(path) << R"({"price": 7, "rail": "ln", "serve": {"rail": "htlc"}, "insecure-test-backend": true})";
    const std::string cfg = path.string();

    auto p = parse({"serve", "--config", cfg}, {});
    EXPECT_EQ(p.price, 7u);
    EXPECT_EQ(p.rail, "htlc");  // subcommand section wins over top level
    EXPECT_TRUE(p.flag);

    p = parse({"serve", "--config", cfg}, {{"FDE_PRICE", "8"}});
    EXPECT_EQ(p.price, 8u);
    p = parse({"serve", "--config", cfg, "--price", "9"}, {{"FDE_PRICE", "8"}});
    EXPECT_EQ(p.price, 9u);
    p = parse({"serve", "--price=10"}, {{"FDE_CONFIG", cfg}, {"FDE_RAIL", "contract"}});
    EXPECT_EQ(p.price, 10u);
    EXPECT_EQ(p.rail, "contract");
    EXPECT_TRUE(p.flag);
    p = parse({"serve"}, {{"FDE_INSECURE_TEST_BACKEND", "0"}});
    EXPECT_FALSE(p.flag);
    EXPECT_EQ(p.rail, "unset");

    EXPECT_THROW(parse({"serve", "--config", "/nonexistent/x.json"}, {}), CLI::FileError);
    std::filesystem::remove(path);
}

TEST(Bench, GridParsing) {
    auto cells = ex::parse_grid("scheme=star,plus rail=contract,ln beta=2,3 size=1KiB,2MiB,100");
    EXPECT_EQ(cells.size(), 2u * 2 * 2 * 3);
    EXPECT_EQ(cells.back().bytes, 100u);
    EXPECT_EQ(cells[1].bytes, 2u << 20);
    EXPECT_EQ(ex::parse_grid("").size(), 1u);
    EXPECT_THROW(ex::parse_grid("scheme=foo"), DomainError);
    EXPECT_THROW(ex::parse_grid("beta=1"), DomainError);
    EXPECT_THROW(ex::parse_grid("size=3GB"), DomainError);
    EXPECT_EQ(ex::crs_degree_for({{ex::Scheme::kStar, pay::Rail::kLn, 2.0, 31 * 10}}), 20u);  // the sample covers all m = 20 positions
    EXPECT_EQ(ex::crs_degree_for({{ex::Scheme::kStar, pay::Rail::kLn, 2.0, 31 * 1000}}), 999u);
    EXPECT_EQ(ex::crs_degree_for({{ex::Scheme::kStar, pay::Rail::kLn, 2.0, 31 * 50}}), 100u);  // m = 100 samples
}

TEST(Bench, RowMatchesHeader) {
    const kzg::Crs crs = kzg::Crs::setup_dev(64, Fr::from_u64(3));
    const auto row = ex::bench_cell(crs, {ex::Scheme::kStar, pay::Rail::kContract, 2.0, 600});
    EXPECT_TRUE(row.delivered);
    const std::string line = ex::to_csv_line(row);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','),
              std::count(ex::kBenchHeader, ex::kBenchHeader + std::strlen(ex::kBenchHeader), ','));
    EXPECT_EQ(line.rfind("VECK_STAR,contract,2,600,", 0), 0u);
    EXPECT_GT(row.ratio(), 2.0);
}

TEST(RemoteChain, SessionOverTcpAndHttpChain) {
    const kzg::Crs crs = kzg::Crs::setup_dev(64, Fr::from_u64(4));
    pay::MockLedger ledger;
    ex::LocalChain local(ledger);
    ex::ChainService service(local, "127.0.0.1", 0);
    auto server_chain = ex::connect_chain("127.0.0.1", service.port());
    auto client_chain = ex::connect_chain("127.0.0.1", service.port());
    client_chain->mint("client", 500);

    const Bytes data(500, 0x61);
    const auto enc = ex::encode_file(data);
    const auto file = veck::CommittedFile::from_data(crs, enc.symbols);
    const veck::IdealBackend backend(veck::SessionMode::kTestOnly, sha256(as_bytes("r")));

    for (pay::Rail rail : {pay::Rail::kContract, pay::Rail::kHtlc, pay::Rail::kLn}) {
        ex::SessionConfig cfg;
        cfg.rail = rail;
        cfg.price = 10;
        ex::ServerContext sc;
        sc.listing = {&crs, &file, enc.byte_length, enc.tail_length};
        sc.config = cfg;
        sc.chain = server_chain.get();
        sc.signer = {"server", sha256(as_bytes("s"))};
        sc.backend = &backend;
        ex::ClientContext cc;
        cc.crs = &crs;
        cc.config = cfg;
        cc.chain = client_chain.get();
        cc.signer = {"client", sha256(as_bytes("c"))};
        cc.backend = &backend;

        ex::TcpListener l("127.0.0.1", 0);
        ex::ServerReport sr;
        std::thread t([&] {
            auto conn = l.accept(std::chrono::seconds(10));
            ASSERT_TRUE(conn);
            sr = ex::run_server(sc, *conn);
        });
        auto conn = ex::tcp_connect("127.0.0.1", l.port());
        const auto cr = ex::run_client(cc, *conn);
        t.join();
        EXPECT_EQ(cr.outcome, ex::ClientOutcome::kDelivered) << cr.detail;
        EXPECT_EQ(cr.file, data);
        EXPECT_EQ(sr.outcome, ex::ServerOutcome::kPaid);
        if (cr.ln_channel) EXPECT_EQ(client_chain->ln_close(*cr.ln_channel), pay::TxStatus::kOk);
    }
    EXPECT_EQ(ledger.balance("server"), 30u);
    EXPECT_EQ(ledger.balance("client"), 470u);
}
