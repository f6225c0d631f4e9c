#include "wban/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace wban {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::size_t Topology::sensor_count() const
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const NodeState& n) { return !n.is_sink(); }));
}

const Link* Topology::link(NodeId from, NodeId to) const
{
    const auto& adj = adjacency[index(from)];
    auto it = std::lower_bound(adj.begin(), adj.end(), to, [](const Link& l, NodeId id) { return l.to < id; });
    return it != adj.end() && it->to == to ? &*it : nullptr;
}

bool Topology::linked(NodeId a, NodeId b) const { return link(a, b) != nullptr; }

std::vector<NodeId> Topology::sinks() const
{
    std::vector<NodeId> out;
    for (const auto& n : nodes)
        if (n.is_sink())
            out.push_back(n.id);
    return out;
}

double ground_truth_prr(double d, double range, double jitter)
{
    const double r = d / range;
    const double base = std::clamp(1.0 - 0.6 * r * r, 0.5, 1.0);
    return std::clamp(base + jitter, 0.0, 1.0);
}

std::vector<Position> sink_positions(int n_sinks, double area)
{
    const std::vector<Position> slots{{0.0, area / 2}, {area, area / 2}, {area / 2, 0.0}, {area / 2, area}};
    return {slots.begin(), slots.begin() + std::min<std::ptrdiff_t>(n_sinks, 4)};
}

namespace {

Topology assemble(std::span<const Position> sensors, std::span<const Position> sinks, const ScenarioConfig& cfg,
                  Rng& rng, double fixed_prr)
{
    Topology topo;
    topo.area_m = cfg.area_m;
    topo.range_m = cfg.range_m;
    const std::size_t n = sensors.size() + sinks.size();
    topo.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node = topo.nodes[i];
        node.id = node_id(i);
        node.role = i < sensors.size() ? Role::sensor : Role::sink;
        node.position = i < sensors.size() ? sensors[i] : sinks[i - sensors.size()];
        node.energy_j = cfg.initial_energy_j;
        node.temperature_c = cfg.t_body_c;
    }
    topo.adjacency.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(topo.nodes[i].position, topo.nodes[j].position);
            if (d > cfg.range_m)
                continue;
            const double jitter = rng.uniform(-0.05, 0.05);
            const double prr = fixed_prr > 0 ? fixed_prr : ground_truth_prr(d, cfg.range_m, jitter);
            topo.adjacency[i].push_back({node_id(j), d, prr});
            topo.adjacency[j].push_back({node_id(i), d, prr});
        }
    }
    for (auto& adj : topo.adjacency)
        std::sort(adj.begin(), adj.end(), [](const Link& a, const Link& b) { return a.to < b.to; });
    return topo;
}

}  // namespace

std::vector<bool> sink_reachable(const Topology& topo)
{
    std::vector<bool> seen(topo.size(), false);
    std::deque<std::size_t> queue;
    for (const auto& n : topo.nodes)
        if (n.is_sink()) {
            seen[index(n.id)] = true;
            queue.push_back(index(n.id));
        }
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (const auto& l : topo.adjacency[u])
            if (!seen[index(l.to)]) {
                seen[index(l.to)] = true;
                queue.push_back(index(l.to));
            }
    }
    return seen;
}

Topology build_topology(std::span<const Position> positions, std::span<const Position> sinks, const ScenarioConfig& cfg,
                        Rng& rng, double fixed_prr)
{
    return assemble(positions, sinks, cfg, rng, fixed_prr);
}

Topology build_topology(const ScenarioConfig& cfg, Rng& rng)
{
    const auto sinks = sink_positions(cfg.n_sinks, cfg.area_m);
    std::vector<Position> sensors(static_cast<std::size_t>(cfg.n_nodes));
    for (int attempt = 0; attempt < kMaxPlacementRetries; ++attempt) {
        for (auto& p : sensors)
            p = {rng.uniform(0.0, cfg.area_m), rng.uniform(0.0, cfg.area_m)};
        Topology topo = assemble(sensors, sinks, cfg, rng, 0.0);
        const auto reach = sink_reachable(topo);
        if (std::all_of(reach.begin(), reach.end(), [](bool b) { return b; }))
            return topo;
    }
    throw TopologyUnreachable("no placement with every sensor reaching a sink after " +
                              std::to_string(kMaxPlacementRetries) + " attempts; range too small for node density");
}

}  // namespace wban
