#include "fde/exchange/local.hpp"

#include <exception>
#include <thread>

namespace fde::ex {

ExchangeResult exchange_in_process(const ServerContext& server, const ClientContext& client,
                                   const FaultPlan& server_out, const FaultPlan& client_out) {
    auto [s_end, c_end] = make_pipe();
    FaultyConnection s_conn(*s_end, server_out);
    FaultyConnection c_conn(*c_end, client_out);
    ExchangeResult out;
    std::exception_ptr server_error;
    std::thread t([&] {
        try {
            out.server = run_server(server, s_conn);
        } catch (...) {
            server_error = std::current_exception();
        }
        s_end->close();
    });
    std::exception_ptr client_error;
    try {
        out.client = run_client(client, c_conn);
    } catch (...) {
        client_error = std::current_exception();
    }
    c_end->close();
    t.join();
    if (server_error) std::rethrow_exception(server_error);
    if (client_error) std::rethrow_exception(client_error);
    out.wire_bytes = s_end->bytes_sent() + c_end->bytes_sent();
    return out;
}

}  // namespace fde::ex
