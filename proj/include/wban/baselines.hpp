// Comparison protocols: ENSA-BAN, P-AODV and RRLS, reduced to their routing
// policies. They share the engine, links, energy and heat with the proposed
// protocol; none of them looks at temperature or congestion.
#pragma once

#include <optional>
#include <span>

#include "wban/routing.hpp"
#include "wban/types.hpp"

namespace wban {

struct EnsaCandidate {
    NodeId id{};
    double prr = 0.0;
    double energy_j = 0.0;
    int hops_to_sink = 0;
};

/// Greedy forwarder: among neighbours strictly closer to a sink (in hops),
/// the one maximizing prr * E / E_initial. Ties go to the lower id.
std::optional<NodeId> ensa_ban_next_hop(int own_hops, std::span<const EnsaCandidate> neighbors, double e_initial);

/// Minimum-hop route to any sink; edge weights are ignored.
std::optional<Route> p_aodv_route(NodeId src, const Graph& graph);

/// Most stable route: each edge weight is read as the link PRR and costs 1/prr.
std::optional<Route> rrls_route(NodeId src, const Graph& prr_graph);

}  // namespace wban
