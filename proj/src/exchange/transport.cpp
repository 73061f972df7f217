#include "fde/exchange/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace fde::ex {

namespace {

Received decode_frame(ByteView frame) {
    Received r;
    try {
        r.message = WireMessage::decode(frame);
        r.status = Received::Status::kMessage;
    } catch (const FormatError&) {
        r.status = Received::Status::kMalformed;
    }
    return r;
}

struct PipeState {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> queue[2];
    bool closed[2] = {false, false};
    bool waiting[2] = {false, false};
    bool stalled[2] = {false, false};
};

class PipeEnd final : public Connection {
  public:
    PipeEnd(std::shared_ptr<PipeState> st, int side) : st_(std::move(st)), me_(side), peer_(1 - side) {}
    ~PipeEnd() override { close(); }

    void send(const WireMessage& m) override {
        Bytes frame = m.encode();
        std::lock_guard lk(st_->mu);
        if (st_->closed[me_] || st_->closed[peer_]) throw TransportError("pipe closed");
        sent_ += frame.size();
        st_->queue[peer_].push_back(std::move(frame));
        st_->cv.notify_all();
    }

    Received recv(std::chrono::milliseconds timeout) override {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        std::unique_lock lk(st_->mu);
        st_->waiting[me_] = true;
        st_->cv.notify_all();
        auto done = [&](Received::Status s) {
            st_->waiting[me_] = false;
            Received r;
            r.status = s;
            return r;
        };
        for (;;) {
            auto& q = st_->queue[me_];
            if (!q.empty()) {
                Bytes frame = std::move(q.front());
                q.pop_front();
                st_->waiting[me_] = false;
                st_->stalled[me_] = false;
                received_ += frame.size();
                return decode_frame(frame);
            }
            if (st_->closed[peer_] || st_->closed[me_]) return done(Received::Status::kClosed);
            if (st_->stalled[me_]) {
                st_->stalled[me_] = false;
                return done(Received::Status::kTimeout);
            }
            if (st_->waiting[peer_] && st_->queue[peer_].empty()) {
                // Both sides wait on each other: nothing will ever arrive.
                st_->stalled[peer_] = true;
                st_->cv.notify_all();
                return done(Received::Status::kTimeout);
            }
            if (st_->cv.wait_until(lk, deadline) == std::cv_status::timeout && q.empty())
                return done(Received::Status::kTimeout);
        }
    }

    void close() override {
        std::lock_guard lk(st_->mu);
        st_->closed[me_] = true;
        st_->cv.notify_all();
    }

  private:
    std::shared_ptr<PipeState> st_;
    int me_, peer_;
};

class TcpConnection final : public Connection {
  public:
    explicit TcpConnection(int fd) : fd_(fd) {
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    }
    ~TcpConnection() override { close(); }

    void send(const WireMessage& m) override {
        if (fd_ < 0) throw TransportError("connection closed");
        const Bytes frame = m.encode();
        size_t off = 0;
        while (off < frame.size()) {
            const ssize_t n = ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw TransportError(std::string("send: ") + std::strerror(errno));
            }
            off += static_cast<size_t>(n);
        }
        sent_ += frame.size();
    }

    Received recv(std::chrono::milliseconds timeout) override {
        const auto deadline = std::chrono::steady_clock::now() + timeout;
        Received r;
        for (;;) {
            try {
                if (auto len = WireMessage::frame_length(buf_); len && buf_.size() >= *len) {
                    Bytes frame(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(*len));
                    buf_.erase(buf_.begin(), buf_.begin() + static_cast<ptrdiff_t>(*len));
                    received_ += frame.size();
                    return decode_frame(frame);
                }
            } catch (const FormatError&) {
                buf_.clear();
                r.status = Received::Status::kMalformed;
                return r;
            }
            if (fd_ < 0) {
                r.status = Received::Status::kClosed;
                return r;
            }
            const auto left =
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
            if (left.count() <= 0) {
                r.status = Received::Status::kTimeout;
                return r;
            }
            pollfd p{fd_, POLLIN, 0};
            const int rc = ::poll(&p, 1, static_cast<int>(std::min<int64_t>(left.count(), 1 << 30)));
            if (rc < 0 && errno == EINTR) continue;
            if (rc == 0) continue;
            uint8_t tmp[1 << 16];
            const ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
            if (n <= 0) {
                if (n < 0 && errno == EINTR) continue;
                r.status = Received::Status::kClosed;
                return r;
            }
            buf_.insert(buf_.end(), tmp, tmp + n);
        }
    }

    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

  private:
    int fd_;
    Bytes buf_;
};

sockaddr_in resolve(const std::string& host, uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || !res)
        throw TransportError("cannot resolve " + host);
    sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(res->ai_addr);
    ::freeaddrinfo(res);
    addr.sin_port = htons(port);
    return addr;
}

}  // namespace

std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_pipe() {
    auto st = std::make_shared<PipeState>();
    return {std::make_unique<PipeEnd>(st, 0), std::make_unique<PipeEnd>(st, 1)};
}

void FaultyConnection::send(const WireMessage& m) {
    const int i = index_++;
    if (plan_.close_index >= 0 && i >= plan_.close_index) {
        inner_.close();
        throw TransportError("connection closed by fault plan");
    }
    if (i == plan_.drop_index) return;
    if (i == plan_.flip_index && !m.body.empty()) {
        WireMessage t = m;
        t.body[plan_.flip_offset % t.body.size()] ^= plan_.flip_mask ? plan_.flip_mask : 1;
        inner_.send(t);
    } else {
        inner_.send(m);
    }
    sent_ = inner_.bytes_sent();
}

Received FaultyConnection::recv(std::chrono::milliseconds timeout) {
    auto r = inner_.recv(timeout);
    received_ = inner_.bytes_received();
    return r;
}

TcpListener::TcpListener(const std::string& host, uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError("socket failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr = resolve(host, port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0) {
        ::close(fd_);
        throw TransportError("cannot listen on " + host + ":" + std::to_string(port));
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Connection> TcpListener::accept(std::chrono::milliseconds timeout) {
    pollfd p{fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(timeout.count())) <= 0) return nullptr;
    const int c = ::accept(fd_, nullptr, nullptr);
    if (c < 0) return nullptr;
    return std::make_unique<TcpConnection>(c);
}

std::unique_ptr<Connection> tcp_connect(const std::string& host, uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket failed");
    sockaddr_in addr = resolve(host, port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        ::close(fd);
        throw TransportError("cannot connect to " + host + ":" + std::to_string(port));
    }
    return std::make_unique<TcpConnection>(fd);
}

}  // namespace fde::ex
