#pragma once

#include "fde/exchange/session.hpp"

namespace fde::ex {

struct ExchangeResult {
    ServerReport server;
    ClientReport client;
    uint64_t wire_bytes = 0;  // both directions
};

/// Runs both parties over an in-process pipe, the server on its own thread.
/// Fault plans apply to each party's outgoing messages.
ExchangeResult exchange_in_process(const ServerContext& server, const ClientContext& client,
                                   const FaultPlan& server_out = {}, const FaultPlan& client_out = {});

}  // namespace fde::ex
