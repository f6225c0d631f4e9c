// Hand-built topologies shared by the unit tests and the acceptance run.
#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "wban/config.hpp"
#include "wban/routing.hpp"
#include "wban/topology.hpp"

namespace fixture {

// Three paths from S to the sink D:
//   S-A-E-D, S-A-B-C-D, S-F-G-H-I-D
namespace fig3 {
inline constexpr std::uint32_t S = 0, A = 1, B = 2, C = 3, E = 4, F = 5, G = 6, H = 7, I = 8, D = 9;
inline constexpr std::size_t kNodes = 10;

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> links()
{
    return {{S, A}, {A, E}, {E, D}, {A, B}, {B, C}, {C, D}, {S, F}, {F, G}, {G, H}, {H, I}, {I, D}};
}

inline std::string name(wban::NodeId id)
{
    static const char* names = "SABCEFGHID";
    return std::string(1, names[wban::index(id)]);
}

inline std::string path(const std::vector<wban::NodeId>& hops)
{
    std::string out;
    for (auto h : hops)
        out += name(h);
    return out;
}
}  // namespace fig3

/// Topology from an explicit link list. Nodes listed in `sinks` are sinks and
/// must be the highest ids. Every link has the given length and true PRR.
inline wban::Topology explicit_topology(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& links,
                                        std::initializer_list<std::uint32_t> sinks, const wban::ScenarioConfig& cfg,
                                        double length_m = 0.3, double prr = 1.0)
{
    wban::Topology t;
    t.area_m = cfg.area_m;
    t.range_m = cfg.range_m;
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node = t.nodes[i];
        node.id = wban::node_id(i);
        node.position = {0.1 * static_cast<double>(i), 0.0};
        node.energy_j = cfg.initial_energy_j;
        node.temperature_c = cfg.t_body_c;
    }
    for (auto s : sinks)
        t.nodes[s].role = wban::Role::sink;
    t.adjacency.assign(n, {});
    for (auto [a, b] : links) {
        t.adjacency[a].push_back({wban::node_id(b), length_m, prr});
        t.adjacency[b].push_back({wban::node_id(a), length_m, prr});
    }
    for (auto& adj : t.adjacency)
        std::sort(adj.begin(), adj.end(), [](const wban::Link& x, const wban::Link& y) { return x.to < y.to; });
    return t;
}

inline wban::Topology fig3_topology(const wban::ScenarioConfig& cfg)
{
    return explicit_topology(fig3::kNodes, fig3::links(), {fig3::D}, cfg);
}

/// The three-path graph with the same cost on every directed edge.
inline wban::Graph fig3_graph(double cost = 1.0)
{
    wban::Graph g(fig3::kNodes);
    g.sink[fig3::D] = true;
    for (auto [a, b] : fig3::links()) {
        g.add_edge(wban::node_id(a), wban::node_id(b), cost);
        g.add_edge(wban::node_id(b), wban::node_id(a), cost);
    }
    return g;
}

/// Heat-driven rerouting scenario on the three-path graph. S and E carry traffic,
/// the tissue heats fast, and the cost ignores temperature, delay and
/// congestion so route changes come only from hotspot exclusion.
inline wban::ScenarioConfig fig34_config(wban::ProtocolKind protocol = wban::ProtocolKind::proposed)
{
    wban::ScenarioConfig cfg;
    cfg.protocol = protocol;
    cfg.n_nodes = static_cast<int>(fig3::kNodes) - 1;
    cfg.n_sinks = 1;
    cfg.sim_time_s = 60.0;
    cfg.eta_c_product = 5.0;
    cfg.sar_coeff = 200.0;
    cfg.w1 = 0.0;
    cfg.w4 = 0.0;
    cfg.lambda = 1e9;
    cfg.frac_emergency = 0.0;
    cfg.frac_on_demand = 0.0;
    return cfg;
}

inline std::vector<double> fig34_rates()
{
    std::vector<double> r(fig3::kNodes - 1, 0.0);
    r[fig3::S] = 5.0;
    r[fig3::E] = 2.0;
    return r;
}

/// S=0 reaches the sink 3 over two disjoint relays 1 and 2.
inline wban::Topology two_route_topology(const wban::ScenarioConfig& cfg)
{
    return explicit_topology(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {3}, cfg);
}

}  // namespace fixture
