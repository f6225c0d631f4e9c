#include "wban/routing.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <sstream>
#include <tuple>

namespace wban {

CostWeights CostWeights::normalized(double w1, double w2, double w3, double w4)
{
    if (w1 < 0 || w2 < 0 || w3 < 0 || w4 < 0)
        throw ValidationError("cost weights must be non-negative");
    const double sum = w1 + w2 + w3 + w4;
    if (sum <= 0)
        throw ValidationError("cost weights must not all be zero");
    return {w1 / sum, w2 / sum, w3 / sum, w4 / sum};
}

CostWeights CostWeights::from(const ScenarioConfig& cfg) { return normalized(cfg.w1, cfg.w2, cfg.w3, cfg.w4); }

CostNorms CostNorms::from(const ScenarioConfig& cfg)
{
    return {cfg.t_body_c, cfg.t_thresh_c, cfg.initial_energy_j, cfg.delay_ref_s, cfg.raw_cost_units};
}

double link_cost(const NeighborEntry& entry, const CostWeights& w, const CostNorms& norms)
{
    if (entry.prr <= 0.0 || entry.reported_energy_j <= 0.0 || entry.hotspot)
        return kInfiniteCost;
    double t = entry.reported_temp_c;
    double e = entry.reported_energy_j;
    double d = entry.delay_s;
    if (!norms.raw) {
        t = std::max(0.0, (t - norms.t_body) / (norms.t_thresh - norms.t_body));
        e = e / norms.e_initial;
        d = d / norms.d_ref;
    }
    return w.w1 * t + w.w2 / entry.prr + w.w3 / e + w.w4 * d;
}

void Graph::add_edge(NodeId from, NodeId to, double cost)
{
    auto& edges = out[index(from)];
    auto it = std::lower_bound(edges.begin(), edges.end(), to, [](const Edge& e, NodeId id) { return e.to < id; });
    if (it != edges.end() && it->to == to)
        it->cost = cost;
    else
        edges.insert(it, Edge{to, cost});
}

std::optional<double> Graph::edge_cost(NodeId from, NodeId to) const
{
    const auto& edges = out[index(from)];
    auto it = std::lower_bound(edges.begin(), edges.end(), to, [](const Edge& e, NodeId id) { return e.to < id; });
    if (it != edges.end() && it->to == to)
        return it->cost;
    return std::nullopt;
}

bool Route::contains(NodeId id) const { return std::find(hops.begin(), hops.end(), id) != hops.end(); }

namespace {

// Lexicographic path label: total cost, then hop count, then highest node id.
struct Label {
    double cost = kInfiniteCost;
    std::uint32_t hops = 0;
    std::uint32_t max_id = 0;

    bool operator<(const Label& o) const { return std::tie(cost, hops, max_id) < std::tie(o.cost, o.hops, o.max_id); }
    bool finite() const { return cost < kInfiniteCost; }
};

struct QueueItem {
    Label label;
    std::uint32_t node;
    bool operator>(const QueueItem& o) const { return o.label < label || (!(label < o.label) && node > o.node); }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

std::uint32_t raw(NodeId id) { return static_cast<std::uint32_t>(id); }

}  // namespace

std::optional<Route> find_route(NodeId src, const Graph& graph, const NodeSet& excluded)
{
    const std::size_t n = graph.size();
    std::vector<Label> best(n);
    std::vector<std::int64_t> prev(n, -1);
    std::vector<bool> done(n, false);
    MinQueue queue;
    best[index(src)] = {0.0, 0, raw(src)};
    queue.push({best[index(src)], raw(src)});

    while (!queue.empty()) {
        const auto item = queue.top();
        queue.pop();
        const std::size_t u = item.node;
        if (done[u] || best[u] < item.label)
            continue;
        done[u] = true;
        if (graph.sink[u])
            continue;  // routes terminate at the first sink
        if (u != index(src) && excluded.contains(node_id(u)))
            continue;
        for (const auto& e : graph.out[u]) {
            const std::size_t v = index(e.to);
            if (done[v] || !(e.cost < kInfiniteCost))
                continue;
            if (excluded.contains(e.to) && !graph.sink[v])
                continue;
            const Label cand{item.label.cost + e.cost, item.label.hops + 1, std::max(item.label.max_id, raw(e.to))};
            if (cand < best[v]) {
                best[v] = cand;
                prev[v] = static_cast<std::int64_t>(u);
                queue.push({cand, static_cast<std::uint32_t>(v)});
            }
        }
    }

    std::optional<std::size_t> target;
    for (std::size_t v = 0; v < n; ++v)
        if (graph.sink[v] && v != index(src) && best[v].finite() && (!target || best[v] < best[*target]))
            target = v;
    if (!target)
        return std::nullopt;

    Route route;
    route.cost = best[*target].cost;
    for (std::int64_t v = static_cast<std::int64_t>(*target); v >= 0; v = prev[static_cast<std::size_t>(v)])
        route.hops.push_back(node_id(static_cast<std::size_t>(v)));
    std::reverse(route.hops.begin(), route.hops.end());
    return route;
}

std::vector<std::optional<Route>> route_tree(const Graph& graph, const NodeSet& excluded)
{
    const std::size_t n = graph.size();
    // Reverse adjacency: for each node u, the nodes v with an edge v -> u.
    std::vector<std::vector<Edge>> in(n);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& e : graph.out[v])
            in[index(e.to)].push_back({node_id(v), e.cost});

    std::vector<Label> best(n);
    std::vector<std::int64_t> next(n, -1);
    std::vector<bool> done(n, false);
    MinQueue queue;
    for (std::size_t s = 0; s < n; ++s)
        if (graph.sink[s]) {
            best[s] = {0.0, 0, raw(node_id(s))};
            queue.push({best[s], static_cast<std::uint32_t>(s)});
        }

    while (!queue.empty()) {
        const auto item = queue.top();
        queue.pop();
        const std::size_t u = item.node;
        if (done[u] || best[u] < item.label)
            continue;
        done[u] = true;
        // Excluded nodes receive a route of their own but are never relays.
        if (!graph.sink[u] && excluded.contains(node_id(u)))
            continue;
        for (const auto& e : in[u]) {
            const std::size_t v = index(e.to);
            if (done[v] || graph.sink[v] || !(e.cost < kInfiniteCost))
                continue;
            const Label cand{item.label.cost + e.cost, item.label.hops + 1, std::max(item.label.max_id, raw(e.to))};
            if (cand < best[v]) {
                best[v] = cand;
                next[v] = static_cast<std::int64_t>(u);
                queue.push({cand, static_cast<std::uint32_t>(v)});
            }
        }
    }

    std::vector<std::optional<Route>> routes(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (graph.sink[v] || !best[v].finite())
            continue;
        Route r;
        r.cost = best[v].cost;
        for (std::int64_t x = static_cast<std::int64_t>(v); x >= 0; x = next[static_cast<std::size_t>(x)]) {
            r.hops.push_back(node_id(static_cast<std::size_t>(x)));
            if (graph.sink[static_cast<std::size_t>(x)])
                break;
        }
        routes[v] = std::move(r);
    }
    return routes;
}

Graph exclude_hotspots(const Graph& graph, const NodeSet& hotspots, std::optional<NodeId> source)
{
    if (hotspots.empty())
        return graph;
    auto removable = [&](NodeId id) { return hotspots.contains(id) && !graph.sink[index(id)] && id != source; };
    Graph out(graph.size());
    out.sink = graph.sink;
    for (std::size_t u = 0; u < graph.size(); ++u) {
        if (removable(node_id(u)))
            continue;
        for (const auto& e : graph.out[u])
            if (!removable(e.to))
                out.out[u].push_back(e);
    }
    return out;
}

double path_cost(const Graph& graph, const std::vector<NodeId>& hops)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
        const auto c = graph.edge_cost(hops[i], hops[i + 1]);
        if (!c)
            return kInfiniteCost;
        total += *c;
    }
    return total;
}

Route update_rci(Route route, double packets_sent_in_window, double tau_s)
{
    route.rci = packets_sent_in_window / tau_s;
    return route;
}

double congestion_threshold(double mean_rci, double lambda) { return lambda * mean_rci; }

std::string format_route_trace(const RouteTrace& t)
{
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", t.time_s);
    os << buf << '\t' << index(t.src) << '\t';
    for (std::size_t i = 0; i < t.hops.size(); ++i)
        os << (i ? "-" : "") << index(t.hops[i]);
    std::snprintf(buf, sizeof buf, "%.9g", t.cost);
    os << '\t' << buf << '\t' << t.trigger;
    return os.str();
}

RouteTrace parse_route_trace(const std::string& line)
{
    std::istringstream is(line);
    RouteTrace t;
    std::string src, hops, cost;
    std::string time;
    if (!std::getline(is, time, '\t') || !std::getline(is, src, '\t') || !std::getline(is, hops, '\t') ||
        !std::getline(is, cost, '\t') || !std::getline(is, t.trigger))
        throw ParseError("malformed route trace line");
    t.time_s = std::stod(time);
    t.src = node_id(std::stoul(src));
    t.cost = std::stod(cost);
    std::istringstream hs(hops);
    for (std::string h; std::getline(hs, h, '-');)
        t.hops.push_back(node_id(std::stoul(h)));
    return t;
}

}  // namespace wban
