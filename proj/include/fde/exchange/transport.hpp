#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "fde/exchange/wire.hpp"

namespace fde::ex {

class TransportError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Received {
    enum class Status { kMessage, kTimeout, kClosed, kMalformed } status = Status::kTimeout;
    WireMessage message;
};

/// Reliable ordered message stream.
class Connection {
  public:
    virtual ~Connection() = default;
    /// Throws TransportError when the stream is gone.
    virtual void send(const WireMessage& m) = 0;
    virtual Received recv(std::chrono::milliseconds timeout) = 0;
    virtual void close() = 0;

    uint64_t bytes_sent() const { return sent_; }
    uint64_t bytes_received() const { return received_; }

  protected:
    uint64_t sent_ = 0;
    uint64_t received_ = 0;
};

/// In-process connected pair. A receive also returns kTimeout as soon as
/// both ends are blocked on empty queues, so dropped messages cost no wall
/// time in tests.
std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_pipe();

/// Outgoing fault injection on top of another connection. Indices count
/// outgoing messages from 0.
struct FaultPlan {
    int drop_index = -1;
    int flip_index = -1;
    size_t flip_offset = 0;  // into the body, modulo its size
    uint8_t flip_mask = 0x01;
    /// Close instead of sending from this index on.
    int close_index = -1;
};

class FaultyConnection final : public Connection {
  public:
    FaultyConnection(Connection& inner, FaultPlan plan) : inner_(inner), plan_(plan) {}
    void send(const WireMessage& m) override;
    Received recv(std::chrono::milliseconds timeout) override;
    void close() override { inner_.close(); }

  private:
    Connection& inner_;
    FaultPlan plan_;
    int index_ = 0;
};

class TcpListener {
  public:
    /// Binds host:port (port 0 picks a free one).
    TcpListener(const std::string& host, uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    uint16_t port() const { return port_; }
    /// nullptr on timeout.
    std::unique_ptr<Connection> accept(std::chrono::milliseconds timeout);

  private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

std::unique_ptr<Connection> tcp_connect(const std::string& host, uint16_t port);

}  // namespace fde::ex
