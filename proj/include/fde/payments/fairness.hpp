#pragma once

#include <string>
#include <vector>

#include "fde/payments/ledger.hpp"

namespace fde::pay {

struct FairnessReport {
    uint64_t traces = 0;
    uint64_t paid_traces = 0;      // server ended up paid
    uint64_t refunded_traces = 0;  // client got the escrow back
    uint64_t unpaid_traces = 0;    // client never committed funds
    uint64_t client_fairness = 0;  // violations
    uint64_t server_fairness = 0;
    uint64_t conservation = 0;
    uint64_t exactly_once = 0;
    std::vector<std::string> examples;  // first few violating traces

    uint64_t violations() const { return client_fairness + server_fairness + conservation + exactly_once; }
};

/// Random interleavings of honest steps, adversarial attempts (wrong keys,
/// forged signatures, early refunds, double spends), dropped steps, and
/// height jumps on one rail. Every trace is driven to quiescence and checked
/// for client-fairness, server-fairness, conservation, and exactly-once.
FairnessReport check_rail_fairness(Rail rail, uint64_t traces, uint64_t seed);

}  // namespace fde::pay
