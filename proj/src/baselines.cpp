#include "wban/baselines.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

#include "wban/engine.hpp"
#include "wban/protocol.hpp"

namespace wban {

std::optional<NodeId> ensa_ban_next_hop(int own_hops, std::span<const EnsaCandidate> neighbors, double e_initial)
{
    const EnsaCandidate* best = nullptr;
    double best_score = -1.0;
    for (const auto& c : neighbors) {
        if (c.hops_to_sink < 0 || c.hops_to_sink >= own_hops)
            continue;
        const double score = c.prr * (c.energy_j / e_initial);
        if (best == nullptr || score > best_score || (score == best_score && c.id < best->id)) {
            best = &c;
            best_score = score;
        }
    }
    if (best == nullptr)
        return std::nullopt;
    return best->id;
}

std::optional<Route> p_aodv_route(NodeId src, const Graph& graph)
{
    Graph unit(graph.size());
    unit.sink = graph.sink;
    for (std::size_t u = 0; u < graph.size(); ++u)
        for (const auto& e : graph.out[u])
            unit.out[u].push_back({e.to, 1.0});
    return find_route(src, unit);
}

std::optional<Route> rrls_route(NodeId src, const Graph& prr_graph)
{
    Graph cost(prr_graph.size());
    cost.sink = prr_graph.sink;
    for (std::size_t u = 0; u < prr_graph.size(); ++u)
        for (const auto& e : prr_graph.out[u])
            cost.out[u].push_back({e.to, e.cost > 0.0 ? 1.0 / e.cost : kInfiniteCost});
    return find_route(src, cost);
}

std::unique_ptr<Protocol> make_baseline(ProtocolKind kind, const ScenarioConfig& cfg);

namespace {

// ENSA-BAN: hop gradient from the sinks, greedy link-quality x energy forwarder.
class EnsaBan final : public Protocol {
public:
    explicit EnsaBan(const ScenarioConfig& cfg) : cfg_(cfg) {}

    ProtocolKind kind() const override { return ProtocolKind::ensa_ban; }

    void on_start(Simulation& sim) override
    {
        hops_.assign(sim.size(), -1);
        // Sink-initiated gradient setup flood: every node rebroadcasts once.
        for (std::size_t i = 0; i < sim.size(); ++i)
            sim.send_control(node_id(i), ControlType::route_request);
    }

    void on_hello_round(Simulation& sim) override
    {
        const std::size_t n = sim.size();
        std::vector<std::vector<std::size_t>> hearers(n);  // j -> nodes that hear j
        for (std::size_t i = 0; i < n; ++i) {
            if (!sim.alive(node_id(i)))
                continue;
            for (const auto& e : sim.neighbors(node_id(i)).entries())
                hearers[index(e.neighbor)].push_back(i);
        }
        hops_.assign(n, -1);
        std::deque<std::size_t> frontier;
        for (std::size_t s = 0; s < n; ++s)
            if (sim.node(node_id(s)).is_sink()) {
                hops_[s] = 0;
                frontier.push_back(s);
            }
        while (!frontier.empty()) {
            const std::size_t j = frontier.front();
            frontier.pop_front();
            for (std::size_t i : hearers[j])
                if (hops_[i] < 0) {
                    hops_[i] = hops_[j] + 1;
                    frontier.push_back(i);
                }
        }
    }

    Decision next_hop(Simulation& sim, NodeId at, QueueEntry& entry) override
    {
        const int own = hops_.empty() ? -1 : hops_[index(at)];
        if (own < 0)
            return Decision::hold();
        std::vector<EnsaCandidate> cands;
        for (const auto& e : sim.neighbors(at).entries()) {
            if (std::find(entry.packet.hops.begin(), entry.packet.hops.end(), e.neighbor) != entry.packet.hops.end())
                continue;
            cands.push_back({e.neighbor, e.prr, e.reported_energy_j, hops_[index(e.neighbor)]});
        }
        const auto next = ensa_ban_next_hop(own, cands, cfg_.initial_energy_j);
        if (!next)
            return Decision::hold();
        return Decision::send(*next);
    }

private:
    ScenarioConfig cfg_;
    std::vector<int> hops_;
};

// Shared machinery for the on-demand, source-routed baselines: a flooded route
// request, a unicast reply along the chosen path, and a cached route that lives
// until a hop on it drops out of the neighbour table (route error to the source).
class SourceRouted : public Protocol {
public:
    explicit SourceRouted(const ScenarioConfig& cfg) : cfg_(cfg) {}

    void on_start(Simulation& sim) override
    {
        cache_.assign(sim.size(), std::nullopt);
        discovered_at_.assign(sim.size(), 0.0);
        retry_at_.assign(sim.size(), 0.0);
    }

    Decision next_hop(Simulation& sim, NodeId at, QueueEntry& entry) override
    {
        Packet& p = entry.packet;
        if (p.route.empty()) {
            if (at != p.src)
                return Decision::drop(DropCause::no_route);
            const std::size_t s = index(at);
            const double now = sim.now();
            const bool stale = cache_[s] && now - discovered_at_[s] >= refresh_period() - 1e-9;
            if ((!cache_[s] || stale) && now >= retry_at_[s])
                discover(sim, at);
            if (!cache_[s])
                return Decision::hold();
        }
        const auto& route = p.route.empty() ? cache_[index(at)]->hops : p.route;
        const auto it = std::find(route.begin(), route.end(), at);
        if (it == route.end() || it + 1 == route.end())
            return Decision::drop(DropCause::no_route);
        const NodeId next = *(it + 1);
        if (sim.neighbors(at).find(next) == nullptr) {
            // Lost HELLO contact with the next hop: the link is broken.
            break_link(sim, at, next);
            p.route.clear();
            return at == p.src ? Decision::hold() : Decision::drop(DropCause::no_route);
        }
        if (p.route.empty())
            p.route = route;
        return Decision::send(next);
    }

protected:
    /// Picks a route over the links the request flood actually crossed.
    virtual std::optional<Route> select(Simulation& sim, NodeId src, const Graph& flooded) = 0;
    /// Age after which a cached route is rediscovered even if it still works.
    virtual double refresh_period() const { return std::numeric_limits<double>::infinity(); }

    ScenarioConfig cfg_;

private:
    // Minimum spacing between two discoveries from the same source.
    static constexpr double kRetryBackoff = 1.0;

    void discover(Simulation& sim, NodeId src)
    {
        const auto& topo = sim.topology();
        const std::size_t n = sim.size();
        Graph flooded(n);
        for (std::size_t i = 0; i < n; ++i)
            flooded.sink[i] = topo.nodes[i].is_sink();
        std::vector<bool> seen(n, false);
        std::deque<NodeId> frontier{src};
        seen[index(src)] = true;
        while (!frontier.empty()) {
            const NodeId u = frontier.front();
            frontier.pop_front();
            if (topo.nodes[index(u)].is_sink())
                continue;  // sinks answer instead of rebroadcasting
            sim.send_control(u, ControlType::route_request);
            for (const Link& l : topo.adjacency[index(u)]) {
                if (!sim.control_rng().bernoulli(l.true_prr) || !sim.alive(l.to))
                    continue;
                flooded.add_edge(u, l.to, link_weight(sim, u, l.to));
                if (!seen[index(l.to)]) {
                    seen[index(l.to)] = true;
                    frontier.push_back(l.to);
                }
            }
        }
        const std::size_t s = index(src);
        cache_[s] = select(sim, src, flooded);
        discovered_at_[s] = sim.now();
        retry_at_[s] = sim.now() + kRetryBackoff;
        if (!cache_[s])
            return;
        const auto& hops = cache_[s]->hops;
        for (std::size_t k = hops.size() - 1; k >= 1; --k)
            sim.send_control(hops[k], ControlType::route_reply, hops[k - 1]);
        if (sim.tracing_routes())
            sim.trace_route({sim.now(), src, hops, cache_[s]->cost, "discovery"});
    }

    double link_weight(const Simulation& sim, NodeId from, NodeId to) const
    {
        // The request carries the receiver's view of the link it arrived on.
        const NeighborEntry* e = sim.neighbors(to).find(from);
        return e != nullptr ? e->prr : 0.0;
    }

    void break_link(Simulation& sim, NodeId from, NodeId to)
    {
        for (std::size_t s = 0; s < cache_.size(); ++s) {
            if (!cache_[s])
                continue;
            const auto& hops = cache_[s]->hops;
            for (std::size_t k = 0; k + 1 < hops.size(); ++k) {
                if (hops[k] != from || hops[k + 1] != to)
                    continue;
                // Route error travels back to the source.
                for (std::size_t b = k; b >= 1; --b)
                    sim.send_control(hops[b], ControlType::route_error, hops[b - 1]);
                cache_[s].reset();
                break;
            }
        }
    }

    std::vector<std::optional<Route>> cache_;
    std::vector<double> discovered_at_;
    std::vector<double> retry_at_;
};

// P-AODV: minimum-hop on-demand routes, class-priority queueing.
class PAodv final : public SourceRouted {
public:
    using SourceRouted::SourceRouted;
    ProtocolKind kind() const override { return ProtocolKind::p_aodv; }
    QueuePolicy queue_policy() const override { return QueuePolicy::class_priority; }

protected:
    std::optional<Route> select(Simulation& /*sim*/, NodeId src, const Graph& flooded) override
    {
        return p_aodv_route(src, flooded);
    }
};

// RRLS: most stable route by summed 1/prr, frequent link probing, periodic reselection.
class Rrls final : public SourceRouted {
public:
    using SourceRouted::SourceRouted;
    ProtocolKind kind() const override { return ProtocolKind::rrls; }
    double hello_interval(const ScenarioConfig& cfg) const override { return cfg.hello_interval_s / 2.0; }

protected:
    std::optional<Route> select(Simulation& /*sim*/, NodeId src, const Graph& flooded) override
    {
        return rrls_route(src, flooded);
    }
    double refresh_period() const override { return cfg_.route_refresh_s; }
};

}  // namespace

std::unique_ptr<Protocol> make_baseline(ProtocolKind kind, const ScenarioConfig& cfg)
{
    switch (kind) {
    case ProtocolKind::ensa_ban: return std::make_unique<EnsaBan>(cfg);
    case ProtocolKind::p_aodv: return std::make_unique<PAodv>(cfg);
    case ProtocolKind::rrls: return std::make_unique<Rrls>(cfg);
    case ProtocolKind::proposed: break;
    }
    return nullptr;
}

}  // namespace wban
