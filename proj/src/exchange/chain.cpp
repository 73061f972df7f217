#include "fde/exchange/chain.hpp"

#include <httplib.h>

#include <json.hpp>
#include <thread>

namespace fde::ex {

using pay::Amount;
using pay::TxStatus;
using json = nlohmann::json;

void LocalChain::wait_until(uint64_t h) {
    std::lock_guard lk(mu_);
    const uint64_t now = ledger_.height();
    if (h > now) ledger_.advance_height(h - now);
}

pay::LightningChannel* LocalChain::find_locked(uint64_t channel) {
    auto it = channels_.find(channel);
    return it == channels_.end() ? nullptr : &it->second;
}

std::optional<uint64_t> LocalChain::ln_open(const pay::Address& client, const pay::Address& server,
                                            Amount capacity) {
    std::lock_guard lk(mu_);
    auto ch = pay::LightningChannel::open(ledger_, client, server, capacity);
    if (!ch) return std::nullopt;
    const uint64_t id = ch->id();
    channels_.emplace(id, std::move(*ch));
    return id;
}

TxStatus LocalChain::ln_add(uint64_t channel, Amount amount, const Digest& hashlock, uint64_t expiry,
                            uint64_t* htlc_id) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    return ch ? ch->add_htlc(amount, hashlock, expiry, htlc_id) : TxStatus::kUnknown;
}

std::optional<pay::PendingHtlc> LocalChain::ln_pending(uint64_t channel, uint64_t htlc_id) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    if (!ch) return std::nullopt;
    for (const auto& p : ch->pending())
        if (p.id == htlc_id) return p;
    return std::nullopt;
}

TxStatus LocalChain::ln_fulfill(uint64_t channel, uint64_t htlc_id, ByteView preimage) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    return ch ? ch->fulfill(htlc_id, preimage) : TxStatus::kUnknown;
}

std::optional<Bytes> LocalChain::ln_preimage(uint64_t channel, uint64_t htlc_id) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    return ch ? ch->revealed_preimage(htlc_id) : std::nullopt;
}

TxStatus LocalChain::ln_expire(uint64_t channel, uint64_t htlc_id) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    return ch ? ch->expire(htlc_id) : TxStatus::kUnknown;
}

TxStatus LocalChain::ln_close(uint64_t channel) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    return ch ? ch->close() : TxStatus::kUnknown;
}

std::optional<std::pair<Amount, Amount>> LocalChain::ln_balances(uint64_t channel) {
    std::lock_guard lk(mu_);
    auto* ch = find_locked(channel);
    if (!ch || !ch->is_open()) return std::nullopt;
    return std::pair{ch->client_balance(), ch->server_balance()};
}

// ---------------------------------------------------------------- JSON codec

namespace {

std::string hex(ByteView b) { return to_hex(b); }
Bytes unhex(const json& j) { return from_hex(j.get<std::string>()); }

Digest digest_of(const json& j) {
    const Bytes b = unhex(j);
    if (b.size() != 32) throw FormatError("expected 32 bytes");
    Digest d;
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

json g1_json(const G1& p) { return hex(p.compress()); }
G1 g1_of(const json& j) { return G1::decompress_checked(unhex(j)); }
json fr_json(const Fr& x) { return hex(x.to_bytes()); }
Fr fr_of(const json& j) { return Fr::from_bytes_checked(unhex(j)); }

json script_json(const pay::HtlcScript& s) {
    return {{"hashlock", hex(s.hashlock)},
            {"server_pk", hex(s.server_pk)},
            {"client_pk", hex(s.client_pk)},
            {"timeout", s.timeout}};
}
pay::HtlcScript script_of(const json& j) {
    return {digest_of(j.at("hashlock")), digest_of(j.at("server_pk")), digest_of(j.at("client_pk")),
            j.at("timeout").get<uint64_t>()};
}

json witness_json(const pay::HtlcWitness& w) {
    json j = {{"signature", hex(w.signature)}, {"branch", w.branch}};
    if (w.preimage) j["preimage"] = hex(*w.preimage);
    return j;
}
pay::HtlcWitness witness_of(const json& j) {
    pay::HtlcWitness w;
    if (j.contains("preimage")) w.preimage = unhex(j.at("preimage"));
    w.signature = digest_of(j.at("signature"));
    w.branch = j.at("branch").get<uint8_t>();
    return w;
}

json contract_json(const pay::ContractState& c) {
    json j = {{"h", g1_json(c.h)},
              {"vk", g1_json(c.vk)},
              {"price", c.price},
              {"server", c.server},
              {"client", c.client},
              {"timeout_blocks", c.timeout_blocks},
              {"timeout_height", c.timeout_height},
              {"status", static_cast<int>(c.status)}};
    if (c.revealed_sk) j["revealed_sk"] = fr_json(*c.revealed_sk);
    return j;
}
pay::ContractState contract_of(const json& j) {
    pay::ContractState c;
    c.h = g1_of(j.at("h"));
    c.vk = g1_of(j.at("vk"));
    c.price = j.at("price");
    c.server = j.at("server");
    c.client = j.at("client");
    c.timeout_blocks = j.at("timeout_blocks");
    c.timeout_height = j.at("timeout_height");
    c.status = static_cast<pay::ContractStatus>(j.at("status").get<int>());
    if (j.contains("revealed_sk")) c.revealed_sk = fr_of(j.at("revealed_sk"));
    return c;
}

json output_json(const pay::HtlcOutput& o) {
    json j = {{"script", script_json(o.script)}, {"amount", o.amount}, {"status", static_cast<int>(o.status)}};
    if (o.revealed_preimage) j["preimage"] = hex(*o.revealed_preimage);
    return j;
}
pay::HtlcOutput output_of(const json& j) {
    pay::HtlcOutput o;
    o.script = script_of(j.at("script"));
    o.amount = j.at("amount");
    o.status = static_cast<pay::OutputStatus>(j.at("status").get<int>());
    if (j.contains("preimage")) o.revealed_preimage = unhex(j.at("preimage"));
    return o;
}

json status_json(TxStatus s) { return static_cast<int>(s); }
TxStatus status_of(const json& j) { return static_cast<TxStatus>(j.get<int>()); }

json dispatch(LocalChain& c, const std::string& method, const json& p) {
    if (method == "height") return c.height();
    if (method == "wait_until") {
        c.wait_until(p.at("height"));
        return nullptr;
    }
    if (method == "balance") return c.balance(p.at("address"));
    if (method == "register_signer") {
        pay::Signer s{p.at("address"), digest_of(p.at("secret"))};
        c.register_signer(s);
        return nullptr;
    }
    if (method == "mint") {
        c.mint(p.at("address"), p.at("amount"));
        return nullptr;
    }
    if (method == "contract_deploy")
        return c.contract_deploy(p.at("server"), g1_of(p.at("h")), g1_of(p.at("vk")), p.at("price"),
                                 p.at("timeout_blocks"));
    if (method == "contract") {
        auto s = c.contract(p.at("id"));
        return s ? contract_json(*s) : json(nullptr);
    }
    if (method == "contract_lock") return status_json(c.contract_lock(p.at("id"), p.at("client")));
    if (method == "contract_claim") return status_json(c.contract_claim(p.at("id"), fr_of(p.at("sk"))));
    if (method == "contract_refund") return status_json(c.contract_refund(p.at("id")));
    if (method == "htlc_fund") {
        auto id = c.htlc_fund(p.at("client"), p.at("amount"), script_of(p.at("script")));
        return id ? json(*id) : json(nullptr);
    }
    if (method == "htlc") {
        auto o = c.htlc(p.at("id"));
        return o ? output_json(*o) : json(nullptr);
    }
    if (method == "htlc_spend_success") return status_json(c.htlc_spend_success(p.at("id"), witness_of(p.at("w"))));
    if (method == "htlc_spend_refund") return status_json(c.htlc_spend_refund(p.at("id"), witness_of(p.at("w"))));
    if (method == "ln_open") {
        auto id = c.ln_open(p.at("client"), p.at("server"), p.at("capacity"));
        return id ? json(*id) : json(nullptr);
    }
    if (method == "ln_add") {
        uint64_t hid = 0;
        const TxStatus s = c.ln_add(p.at("channel"), p.at("amount"), digest_of(p.at("hashlock")), p.at("expiry"), &hid);
        return {{"status", status_json(s)}, {"htlc", hid}};
    }
    if (method == "ln_pending") {
        auto h = c.ln_pending(p.at("channel"), p.at("htlc"));
        if (!h) return nullptr;
        return {{"id", h->id}, {"amount", h->amount}, {"hashlock", hex(h->hashlock)}, {"expiry", h->expiry}};
    }
    if (method == "ln_fulfill")
        return status_json(c.ln_fulfill(p.at("channel"), p.at("htlc"), unhex(p.at("preimage"))));
    if (method == "ln_preimage") {
        auto b = c.ln_preimage(p.at("channel"), p.at("htlc"));
        return b ? json(hex(*b)) : json(nullptr);
    }
    if (method == "ln_expire") return status_json(c.ln_expire(p.at("channel"), p.at("htlc")));
    if (method == "ln_close") return status_json(c.ln_close(p.at("channel")));
    if (method == "ln_balances") {
        auto b = c.ln_balances(p.at("channel"));
        return b ? json::array({b->first, b->second}) : json(nullptr);
    }
    throw FormatError("unknown method " + method);
}

class RemoteChain final : public Chain {
  public:
    RemoteChain(const std::string& host, uint16_t port) : cli_(host, port) {
        cli_.set_read_timeout(30, 0);
    }

    uint64_t height() override { return call("height", json::object()); }
    void wait_until(uint64_t h) override { call("wait_until", {{"height", h}}); }
    Amount balance(const pay::Address& a) override { return call("balance", {{"address", a}}); }
    void register_signer(const pay::Signer& s) override {
        call("register_signer", {{"address", s.address}, {"secret", hex(s.secret)}});
    }
    void mint(const pay::Address& a, Amount amount) override {
        call("mint", {{"address", a}, {"amount", amount}});
    }

    uint64_t contract_deploy(const pay::Address& server, const G1& h, const G1& vk, Amount price,
                             uint64_t timeout_blocks) override {
        return call("contract_deploy", {{"server", server},
                                        {"h", g1_json(h)},
                                        {"vk", g1_json(vk)},
                                        {"price", price},
                                        {"timeout_blocks", timeout_blocks}});
    }
    std::optional<pay::ContractState> contract(uint64_t id) override {
        auto r = call("contract", {{"id", id}});
        if (r.is_null()) return std::nullopt;
        return contract_of(r);
    }
    TxStatus contract_lock(uint64_t id, const pay::Address& client) override {
        return status_of(call("contract_lock", {{"id", id}, {"client", client}}));
    }
    TxStatus contract_claim(uint64_t id, const Fr& sk) override {
        return status_of(call("contract_claim", {{"id", id}, {"sk", fr_json(sk)}}));
    }
    TxStatus contract_refund(uint64_t id) override { return status_of(call("contract_refund", {{"id", id}})); }

    std::optional<uint64_t> htlc_fund(const pay::Address& client, Amount amount,
                                      const pay::HtlcScript& script) override {
        auto r = call("htlc_fund", {{"client", client}, {"amount", amount}, {"script", script_json(script)}});
        if (r.is_null()) return std::nullopt;
        return r.get<uint64_t>();
    }
    std::optional<pay::HtlcOutput> htlc(uint64_t id) override {
        auto r = call("htlc", {{"id", id}});
        if (r.is_null()) return std::nullopt;
        return output_of(r);
    }
    TxStatus htlc_spend_success(uint64_t id, const pay::HtlcWitness& w) override {
        return status_of(call("htlc_spend_success", {{"id", id}, {"w", witness_json(w)}}));
    }
    TxStatus htlc_spend_refund(uint64_t id, const pay::HtlcWitness& w) override {
        return status_of(call("htlc_spend_refund", {{"id", id}, {"w", witness_json(w)}}));
    }

    std::optional<uint64_t> ln_open(const pay::Address& client, const pay::Address& server,
                                    Amount capacity) override {
        auto r = call("ln_open", {{"client", client}, {"server", server}, {"capacity", capacity}});
        if (r.is_null()) return std::nullopt;
        return r.get<uint64_t>();
    }
    TxStatus ln_add(uint64_t channel, Amount amount, const Digest& hashlock, uint64_t expiry,
                    uint64_t* htlc_id) override {
        auto r = call("ln_add", {{"channel", channel}, {"amount", amount}, {"hashlock", hex(hashlock)}, {"expiry", expiry}});
        if (htlc_id) *htlc_id = r.at("htlc");
        return status_of(r.at("status"));
    }
    std::optional<pay::PendingHtlc> ln_pending(uint64_t channel, uint64_t htlc_id) override {
        auto r = call("ln_pending", {{"channel", channel}, {"htlc", htlc_id}});
        if (r.is_null()) return std::nullopt;
        return pay::PendingHtlc{r.at("id"), r.at("amount"), digest_of(r.at("hashlock")), r.at("expiry")};
    }
    TxStatus ln_fulfill(uint64_t channel, uint64_t htlc_id, ByteView preimage) override {
        return status_of(call("ln_fulfill", {{"channel", channel}, {"htlc", htlc_id}, {"preimage", hex(preimage)}}));
    }
    std::optional<Bytes> ln_preimage(uint64_t channel, uint64_t htlc_id) override {
        auto r = call("ln_preimage", {{"channel", channel}, {"htlc", htlc_id}});
        if (r.is_null()) return std::nullopt;
        return unhex(r);
    }
    TxStatus ln_expire(uint64_t channel, uint64_t htlc_id) override {
        return status_of(call("ln_expire", {{"channel", channel}, {"htlc", htlc_id}}));
    }
    TxStatus ln_close(uint64_t channel) override { return status_of(call("ln_close", {{"channel", channel}})); }
    std::optional<std::pair<Amount, Amount>> ln_balances(uint64_t channel) override {
        auto r = call("ln_balances", {{"channel", channel}});
        if (r.is_null()) return std::nullopt;
        return std::pair<Amount, Amount>{r.at(0), r.at(1)};
    }

  private:
    json call(const std::string& method, json params) {
        const json req = {{"method", method}, {"params", std::move(params)}};
        std::lock_guard lk(mu_);
        auto res = cli_.Post("/rpc", req.dump(), "application/json");
        if (!res) throw std::runtime_error("chain unreachable");
        const json out = json::parse(res->body);
        if (res->status != 200 || out.contains("error"))
            throw std::runtime_error("chain error: " + out.value("error", std::string("http ") + std::to_string(res->status)));
        return out.at("result");
    }

    httplib::Client cli_;
    std::mutex mu_;
};

}  // namespace

struct ChainService::Impl {
    httplib::Server server;
    std::thread thread;
};

ChainService::ChainService(LocalChain& chain, const std::string& host, uint16_t port)
    : impl_(std::make_unique<Impl>()) {
    impl_->server.Post("/rpc", [&chain](const httplib::Request& req, httplib::Response& res) {
        json out;
        try {
            const json in = json::parse(req.body);
            out["result"] = dispatch(chain, in.at("method"), in.value("params", json::object()));
        } catch (const std::exception& e) {
            out = {{"error", e.what()}};
            res.status = 400;
        }
        res.set_content(out.dump(), "application/json");
    });
    if (port == 0) {
        const int p = impl_->server.bind_to_any_port(host);
        if (p < 0) throw std::runtime_error("chain service cannot bind");
        port_ = static_cast<uint16_t>(p);
    } else {
        if (!impl_->server.bind_to_port(host, port)) throw std::runtime_error("chain service cannot bind");
        port_ = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
}

ChainService::~ChainService() { stop(); }

void ChainService::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

std::unique_ptr<Chain> connect_chain(const std::string& host, uint16_t port) {
    return std::make_unique<RemoteChain>(host, port);
}

}  // namespace fde::ex
